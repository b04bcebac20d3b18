#ifndef LEADSHEET_EVENTS_HPP
#define LEADSHEET_EVENTS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "leadsheet/score.hpp"
#include "leadsheet/theory.hpp"

namespace leadsheet {

enum class EventKind : std::uint8_t {
  Emotion,     // value = Emotion
  Key,         // value = tonic, value2 = Mode
  Bar,
  SubBeat,     // value = 0..15
  Duration,    // value = 1..16
  TrackMelody,
  TrackChord,
  Eos,
  FuncChord,   // value = RomanDegree, value2 = ChordQuality
  RemiChord,   // value = root pc, value2 = ChordQuality
  ChordNone,
  Octave,      // value = 0..7
  Degree,      // value = RomanDegree
  Pitch,       // value = 21..108
  Pad,
};

struct Event {
  EventKind kind = EventKind::Pad;
  int value = 0;
  int value2 = 0;

  friend bool operator==(const Event&, const Event&) = default;
  friend auto operator<=>(const Event&, const Event&) = default;

  static Event emotion(Emotion e) { return {EventKind::Emotion, static_cast<int>(e), 0}; }
  static Event key(const Key& k) { return {EventKind::Key, k.tonic, static_cast<int>(k.mode)}; }
  static Event bar() { return {EventKind::Bar, 0, 0}; }
  static Event sub_beat(int pos) { return {EventKind::SubBeat, pos, 0}; }
  static Event duration(int steps) { return {EventKind::Duration, steps, 0}; }
  static Event track_melody() { return {EventKind::TrackMelody, 0, 0}; }
  static Event track_chord() { return {EventKind::TrackChord, 0, 0}; }
  static Event eos() { return {EventKind::Eos, 0, 0}; }
  static Event func_chord(const FunctionalChord& c) {
    return {EventKind::FuncChord, static_cast<int>(c.degree), static_cast<int>(c.quality)};
  }
  static Event remi_chord(const ChordLabel& c) {
    return {EventKind::RemiChord, c.root, static_cast<int>(c.quality)};
  }
  static Event chord_none() { return {EventKind::ChordNone, 0, 0}; }
  static Event octave(int o) { return {EventKind::Octave, o, 0}; }
  static Event degree(RomanDegree d) { return {EventKind::Degree, static_cast<int>(d), 0}; }
  static Event pitch(int p) { return {EventKind::Pitch, p, 0}; }
  static Event pad() { return {EventKind::Pad, 0, 0}; }
};

enum class Representation : std::uint8_t { Remi, RemiTrans, Functional, FunctionalAblated };

inline const char* representation_name(Representation r) {
  static constexpr const char* names[] = {"remi", "remi-trans", "functional",
                                          "functional-ablated"};
  return names[static_cast<int>(r)];
}

inline std::optional<Representation> representation_from_name(const std::string& s) {
  for (int i = 0; i < 4; ++i) {
    auto r = static_cast<Representation>(i);
    if (s == representation_name(r)) return r;
  }
  return std::nullopt;
}

struct TokenSequence {
  Representation tag = Representation::Functional;
  std::vector<Event> tokens;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

// --- text format: one token per line as Kind_Value -------------------------

inline std::string event_to_string(const Event& e) {
  switch (e.kind) {
    case EventKind::Emotion: {
      std::string name = emotion_name(static_cast<Emotion>(e.value));
      name[0] = static_cast<char>(std::toupper(name[0]));
      return "Emotion_" + name;
    }
    case EventKind::Key:
      return "Key_" + key_name(Key{e.value, static_cast<Mode>(e.value2)});
    case EventKind::Bar: return "Bar";
    case EventKind::SubBeat: return "SubBeat_" + std::to_string(e.value);
    case EventKind::Duration: return "Duration_" + std::to_string(e.value);
    case EventKind::TrackMelody: return "Track_Melody";
    case EventKind::TrackChord: return "Track_Chord";
    case EventKind::Eos: return "EOS";
    case EventKind::FuncChord:
      return std::string("Chord_") + degree_name(static_cast<RomanDegree>(e.value)) + "_" +
             quality_name(static_cast<ChordQuality>(e.value2));
    case EventKind::RemiChord:
      return std::string("Chord_") + pc_letter(e.value) + "_" +
             quality_name(static_cast<ChordQuality>(e.value2));
    case EventKind::ChordNone: return "Chord_None";
    case EventKind::Octave: return "Octave_" + std::to_string(e.value);
    case EventKind::Degree: return std::string("Degree_") + degree_name(static_cast<RomanDegree>(e.value));
    case EventKind::Pitch: return "Pitch_" + std::to_string(e.value);
    case EventKind::Pad: return "Pad";
  }
  throw std::logic_error("unreachable event kind");
}

inline std::optional<Event> event_from_string(const std::string& s) {
  auto tail = [&s](const std::string& prefix) -> std::optional<std::string> {
    if (s.rfind(prefix, 0) == 0) return s.substr(prefix.size());
    return std::nullopt;
  };
  if (s == "Bar") return Event::bar();
  if (s == "Track_Melody") return Event::track_melody();
  if (s == "Track_Chord") return Event::track_chord();
  if (s == "EOS") return Event::eos();
  if (s == "Pad") return Event::pad();
  if (s == "Chord_None") return Event::chord_none();
  if (auto t = tail("Emotion_")) {
    std::string lower = *t;
    for (char& c : lower) c = static_cast<char>(std::tolower(c));
    if (auto e = emotion_from_name(lower)) return Event::emotion(*e);
    return std::nullopt;
  }
  if (auto t = tail("Key_")) {
    if (auto k = key_from_name(*t)) return Event::key(*k);
    return std::nullopt;
  }
  auto parse_int = [](const std::string& v, int lo, int hi) -> std::optional<int> {
    try {
      size_t pos = 0;
      int n = std::stoi(v, &pos);
      if (pos != v.size() || n < lo || n > hi) return std::nullopt;
      return n;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  if (auto t = tail("SubBeat_")) {
    if (auto n = parse_int(*t, 0, 15)) return Event::sub_beat(*n);
    return std::nullopt;
  }
  if (auto t = tail("Duration_")) {
    if (auto n = parse_int(*t, 1, 16)) return Event::duration(*n);
    return std::nullopt;
  }
  if (auto t = tail("Octave_")) {
    if (auto n = parse_int(*t, 0, 7)) return Event::octave(*n);
    return std::nullopt;
  }
  if (auto t = tail("Pitch_")) {
    if (auto n = parse_int(*t, kMinPitch, kMaxPitch)) return Event::pitch(*n);
    return std::nullopt;
  }
  if (auto t = tail("Degree_")) {
    if (auto d = degree_from_name(*t)) return Event::degree(*d);
    return std::nullopt;
  }
  if (auto t = tail("Chord_")) {
    auto us = t->find('_');
    if (us == std::string::npos) return std::nullopt;
    std::string root = t->substr(0, us);
    auto quality = quality_from_name(t->substr(us + 1));
    if (!quality) return std::nullopt;
    if (auto d = degree_from_name(root)) return Event::func_chord({*d, *quality});
    if (auto pc = pc_from_letter(root)) return Event::remi_chord({*pc, *quality});
    return std::nullopt;
  }
  return std::nullopt;
}

// --- vocabulary ------------------------------------------------------------

/// Enumerates the closed token set for a representation, in a fixed order.
/// Functional carries a trailing Pad token; counts: functional 217, REMI 284.
inline std::vector<Event> vocabulary(Representation tag) {
  std::vector<Event> vocab;
  for (int e = 0; e < 3; ++e) vocab.push_back(Event::emotion(static_cast<Emotion>(e)));
  for (int t = 0; t < 12; ++t) {
    vocab.push_back(Event::key(Key{t, Mode::Major}));
    vocab.push_back(Event::key(Key{t, Mode::Minor}));
  }
  vocab.push_back(Event::bar());
  for (int i = 0; i < 16; ++i) vocab.push_back(Event::sub_beat(i));
  for (int d = 1; d <= 16; ++d) vocab.push_back(Event::duration(d));
  vocab.push_back(Event::track_melody());
  vocab.push_back(Event::track_chord());
  vocab.push_back(Event::eos());
  const bool func_chords = tag == Representation::Functional || tag == Representation::FunctionalAblated;
  for (int root = 0; root < 12; ++root) {
    for (int q = 0; q < kNumQualities; ++q) {
      if (func_chords) {
        vocab.push_back(Event::func_chord(
            {static_cast<RomanDegree>(root), static_cast<ChordQuality>(q)}));
      } else {
        vocab.push_back(Event::remi_chord({root, static_cast<ChordQuality>(q)}));
      }
    }
  }
  vocab.push_back(Event::chord_none());
  if (tag == Representation::Functional) {
    for (int o = 0; o < 8; ++o) vocab.push_back(Event::octave(o));
    for (int d = 0; d < kNumDegrees; ++d) vocab.push_back(Event::degree(static_cast<RomanDegree>(d)));
    vocab.push_back(Event::pad());
  } else {
    for (int p = kMinPitch; p <= kMaxPitch; ++p) vocab.push_back(Event::pitch(p));
  }
  return vocab;
}

}  // namespace leadsheet

#endif  // LEADSHEET_EVENTS_HPP
