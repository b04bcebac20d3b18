#ifndef LEADSHEET_CODEC_HPP
#define LEADSHEET_CODEC_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "leadsheet/events.hpp"
#include "leadsheet/score.hpp"
#include "leadsheet/theory.hpp"

namespace leadsheet {

struct Violation {
  std::size_t index = 0;  // first offending token (or tokens.size() if truncated)
  std::string rule;
};

class CodecError : public std::runtime_error {
 public:
  explicit CodecError(const Violation& v)
      : std::runtime_error("token " + std::to_string(v.index) + ": " + v.rule), violation(v) {}
  Violation violation;
};

namespace detail {

inline bool melody_uses_degrees(Representation tag) {
  return tag == Representation::Functional;
}

inline bool chords_use_degrees(Representation tag) {
  return tag == Representation::Functional || tag == Representation::FunctionalAblated;
}

}  // namespace detail

/// Melody events for one bar: a SubBeat per distinct onset, then per note
/// either Octave+Degree+Duration (functional) or Pitch+Duration.
inline std::vector<Event> melody_bar_events(const LeadSheet& ls, int bar, Representation tag,
                                            const Key& key, DegreePolicy& policy) {
  std::vector<Event> out;
  const int lo = bar * kSubBeatsPerBar;
  const int hi = lo + kSubBeatsPerBar;
  int last_onset = -1;
  for (const Note& n : ls.melody) {
    if (n.onset < lo || n.onset >= hi) continue;
    if (n.onset != last_onset) {
      out.push_back(Event::sub_beat(n.onset - lo));
      last_onset = n.onset;
    }
    if (detail::melody_uses_degrees(tag)) {
      DegreePitch dp = pitch_to_degree_pitch(n.pitch, key, policy);
      if (dp.octave < 0 || dp.octave > 7) {
        throw std::out_of_range("pitch " + std::to_string(n.pitch) +
                                " not representable in key " + key_name(key));
      }
      out.push_back(Event::octave(dp.octave));
      out.push_back(Event::degree(dp.degree));
    } else {
      out.push_back(Event::pitch(n.pitch));
    }
    out.push_back(Event::duration(n.duration));
  }
  return out;
}

/// Chord events for one bar: four slots at sub-beats 0, 4, 8, 12.
inline std::vector<Event> chord_bar_events(const LeadSheet& ls, int bar, Representation tag,
                                           const Key& key, DegreePolicy& policy) {
  std::vector<Event> out;
  for (int beat = 0; beat < kBeatsPerBar; ++beat) {
    out.push_back(Event::sub_beat(beat * 4));
    const auto& slot = ls.chords[bar * kBeatsPerBar + beat].chord;
    if (!slot) {
      out.push_back(Event::chord_none());
    } else if (detail::chords_use_degrees(tag)) {
      RomanDegree d = pc_to_degree(slot->root, key, policy);
      out.push_back(Event::func_chord({d, slot->quality}));
    } else {
      out.push_back(Event::remi_chord(*slot));
    }
  }
  return out;
}

inline TokenSequence encode(const LeadSheet& ls, Representation tag, DegreePolicy& policy) {
  check_lead_sheet(ls);
  TokenSequence ts;
  ts.tag = tag;
  ts.tokens.push_back(Event::emotion(ls.emotion));
  ts.tokens.push_back(Event::key(ls.key));
  for (int bar = 0; bar < ls.num_bars; ++bar) {
    ts.tokens.push_back(Event::track_melody());
    ts.tokens.push_back(Event::bar());
    auto mel = melody_bar_events(ls, bar, tag, ls.key, policy);
    ts.tokens.insert(ts.tokens.end(), mel.begin(), mel.end());
    ts.tokens.push_back(Event::track_chord());
    ts.tokens.push_back(Event::bar());
    auto ch = chord_bar_events(ls, bar, tag, ls.key, policy);
    ts.tokens.insert(ts.tokens.end(), ch.begin(), ch.end());
  }
  ts.tokens.push_back(Event::eos());
  return ts;
}

inline TokenSequence encode_functional(const LeadSheet& ls, DegreePolicy& policy) {
  return encode(ls, Representation::Functional, policy);
}

inline TokenSequence encode_functional_ablated(const LeadSheet& ls, DegreePolicy& policy) {
  return encode(ls, Representation::FunctionalAblated, policy);
}

inline TokenSequence encode_remi(const LeadSheet& ls) {
  DegreePolicy unused = DegreePolicy::always_lower();
  return encode(ls, Representation::Remi, unused);
}

namespace detail {

// Single parser behind both decode and validate, so decoding rejects
// exactly the sequences validation rejects.
inline std::optional<Violation> parse(const TokenSequence& ts, LeadSheet* out) {
  const auto& t = ts.tokens;
  std::size_t i = 0;
  auto fail = [&](const std::string& rule) { return Violation{i, rule}; };
  auto at_end = [&] { return i >= t.size(); };

  if (at_end() || t[i].kind != EventKind::Emotion) return fail("expected Emotion at start");
  Emotion emotion = static_cast<Emotion>(t[i].value);
  ++i;
  if (at_end() || t[i].kind != EventKind::Key) return fail("expected Key after Emotion");
  Key key{t[i].value, static_cast<Mode>(t[i].value2)};
  ++i;

  LeadSheet ls;
  ls.emotion = emotion;
  ls.key = key;
  ls.num_bars = 0;

  while (!at_end() && t[i].kind == EventKind::TrackMelody) {
    const int bar = ls.num_bars;
    ++i;
    if (at_end() || t[i].kind != EventKind::Bar) return fail("expected Bar after Track_Melody");
    ++i;
    // melody groups
    int last_sub_beat = -1;
    while (!at_end() && t[i].kind == EventKind::SubBeat) {
      const int sb = t[i].value;
      if (sb <= last_sub_beat) return fail("SubBeat not strictly increasing in melody bar");
      last_sub_beat = sb;
      ++i;
      bool any_note = false;
      while (!at_end() &&
             (t[i].kind == EventKind::Octave || t[i].kind == EventKind::Pitch)) {
        Note n;
        n.onset = bar * kSubBeatsPerBar + sb;
        if (t[i].kind == EventKind::Octave) {
          if (melody_uses_degrees(ts.tag) == false) return fail("Octave token in pitch-valued melody");
          DegreePitch dp{t[i].value, RomanDegree::I};
          ++i;
          if (at_end() || t[i].kind != EventKind::Degree) return fail("expected Degree after Octave");
          dp.degree = static_cast<RomanDegree>(t[i].value);
          ++i;
          try {
            n.pitch = degree_pitch_to_pitch(dp, key);
          } catch (const std::out_of_range&) {
            return fail("decoded pitch out of range");
          }
        } else {
          if (melody_uses_degrees(ts.tag)) return fail("Pitch token in degree-valued melody");
          n.pitch = t[i].value;
          ++i;
        }
        if (at_end() || t[i].kind != EventKind::Duration) return fail("expected Duration after note pitch");
        n.duration = t[i].value;
        ++i;
        ls.melody.push_back(n);
        any_note = true;
      }
      if (!any_note) return fail("melody SubBeat with no note");
    }
    // chord bar
    if (at_end() || t[i].kind != EventKind::TrackChord) return fail("expected Track_Chord");
    ++i;
    if (at_end() || t[i].kind != EventKind::Bar) return fail("expected Bar after Track_Chord");
    ++i;
    for (int beat = 0; beat < kBeatsPerBar; ++beat) {
      if (at_end() || t[i].kind != EventKind::SubBeat || t[i].value != beat * 4) {
        return fail("expected SubBeat_" + std::to_string(beat * 4) + " in chord bar");
      }
      ++i;
      if (at_end()) return fail("expected chord token");
      BeatChord bc;
      if (t[i].kind == EventKind::ChordNone) {
        // no chord this beat
      } else if (t[i].kind == EventKind::FuncChord) {
        if (!chords_use_degrees(ts.tag)) return fail("functional chord in REMI sequence");
        bc.chord = ChordLabel{degree_to_pc(static_cast<RomanDegree>(t[i].value), key),
                              static_cast<ChordQuality>(t[i].value2)};
      } else if (t[i].kind == EventKind::RemiChord) {
        if (chords_use_degrees(ts.tag)) return fail("letter chord in functional sequence");
        bc.chord = ChordLabel{t[i].value, static_cast<ChordQuality>(t[i].value2)};
      } else {
        return fail("expected chord token");
      }
      ++i;
      ls.chords.push_back(bc);
    }
    ++ls.num_bars;
  }

  if (ls.num_bars == 0) return fail("no bars");
  if (at_end() || t[i].kind != EventKind::Eos) return fail("expected EOS");
  ++i;
  if (i != t.size()) return fail("trailing tokens after EOS");

  if (out) *out = std::move(ls);
  return std::nullopt;
}

}  // namespace detail

/// Grammar check; returns the first violation, or nullopt if valid.
inline std::optional<Violation> validate_sequence(const TokenSequence& ts) {
  return detail::parse(ts, nullptr);
}

/// Throws CodecError on grammar violations.
inline LeadSheet decode(const TokenSequence& ts) {
  LeadSheet ls;
  if (auto v = detail::parse(ts, &ls)) throw CodecError(*v);
  return ls;
}

inline LeadSheet decode_functional(const TokenSequence& ts) { return decode(ts); }
inline LeadSheet decode_remi(const TokenSequence& ts) { return decode(ts); }

/// Minimal-motion chromatic shift into C major / c minor, mode preserved.
inline LeadSheet transpose_to_c(const LeadSheet& ls) {
  int delta = (12 - ls.key.tonic) % 12;
  if (delta > 5) delta -= 12;
  LeadSheet out = ls;
  out.key = Key{0, ls.key.mode};
  for (Note& n : out.melody) {
    n.pitch += delta;
    while (n.pitch < kMinPitch) n.pitch += 12;
    while (n.pitch > kMaxPitch) n.pitch -= 12;
  }
  for (BeatChord& bc : out.chords) {
    if (bc.chord) bc.chord->root = ((bc.chord->root + delta) % 12 + 12) % 12;
  }
  return out;
}

}  // namespace leadsheet

#endif  // LEADSHEET_CODEC_HPP
