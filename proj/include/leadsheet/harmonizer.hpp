#ifndef LEADSHEET_HARMONIZER_HPP
#define LEADSHEET_HARMONIZER_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "leadsheet/codec.hpp"
#include "leadsheet/model.hpp"
#include "leadsheet/sampler.hpp"
#include "leadsheet/score.hpp"

namespace leadsheet {

enum class KeyPolicy : std::uint8_t { KeepOriginal, RuleBased, ModelBased };

inline const char* key_policy_name(KeyPolicy p) {
  static constexpr const char* names[] = {"keep", "rule", "model"};
  return names[static_cast<int>(p)];
}

inline std::optional<KeyPolicy> key_policy_from_name(const std::string& s) {
  if (s == "keep") return KeyPolicy::KeepOriginal;
  if (s == "rule") return KeyPolicy::RuleBased;
  if (s == "model") return KeyPolicy::ModelBased;
  return std::nullopt;
}

/// Samples a Key token from the model's distribution after Emotion_e.
inline Key predict_key(const SequenceModel& model, Emotion e, Sampler& sampler) {
  const Vocabulary& vocab = model.vocab();
  std::vector<int> prefix = {vocab.id_of(Event::emotion(e))};
  std::vector<char> mask(vocab.size(), 0);
  for (int i = 0; i < vocab.size(); ++i) {
    if (vocab.event_of(i).kind == EventKind::Key) mask[i] = 1;
  }
  const Event& key_event = vocab.event_of(sampler.sample(model.next_token_distribution(prefix), mask));
  return Key{key_event.value, static_cast<Mode>(key_event.value2)};
}

/// Rule-based: parallel major for positive, parallel minor otherwise.
inline Key decide_key(const Key& original, Emotion e, KeyPolicy policy,
                      const SequenceModel* model = nullptr, Sampler* sampler = nullptr) {
  switch (policy) {
    case KeyPolicy::KeepOriginal:
      return original;
    case KeyPolicy::RuleBased:
      return Key{original.tonic, e == Emotion::Positive ? Mode::Major : Mode::Minor};
    case KeyPolicy::ModelBased:
      if (!model || !sampler) throw std::invalid_argument("model-based key decision needs a model");
      return predict_key(*model, e, *sampler);
  }
  throw std::logic_error("unreachable key policy");
}

/// Re-pitches the melody under a new key, holding scale degrees fixed.
/// Registers are nudged by octaves only when a decoded pitch falls outside
/// the representable range.
inline LeadSheet adjust_melody_to_key(const LeadSheet& ls, const Key& new_key,
                                      DegreePolicy& policy) {
  LeadSheet out = ls;
  out.key = new_key;
  for (Note& n : out.melody) {
    DegreePitch dp = pitch_to_degree_pitch(n.pitch, ls.key, policy);
    while (true) {
      try {
        n.pitch = degree_pitch_to_pitch(dp, new_key);
        break;
      } catch (const std::out_of_range&) {
        if (12 * (dp.octave + 1) + new_key.tonic < kMinPitch) {
          ++dp.octave;
        } else {
          --dp.octave;
        }
        if (dp.octave < 0 || dp.octave > 7) throw;
      }
    }
  }
  return out;
}

/// Samples the chord bars against the given melody, bar by bar, under a
/// grammar mask: sub-beat positions in chord bars are forced, chord slots
/// only admit chord tokens. Deterministic given the sampler seed.
inline LeadSheet generate_chords(const SequenceModel& model, Emotion e, const Key& key,
                                 const LeadSheet& melody_ls, Sampler& sampler,
                                 DegreePolicy& policy) {
  check_lead_sheet(melody_ls);
  const Vocabulary& vocab = model.vocab();
  const Representation tag = vocab.tag();

  LeadSheet conditioned = melody_ls;
  conditioned.emotion = e;
  conditioned.key = key;

  std::vector<char> chord_mask(vocab.size(), 0);
  for (int i = 0; i < vocab.size(); ++i) {
    const EventKind k = vocab.event_of(i).kind;
    if (k == EventKind::FuncChord || k == EventKind::RemiChord || k == EventKind::ChordNone) {
      chord_mask[i] = 1;
    }
  }

  TokenSequence ts;
  ts.tag = tag;
  std::vector<int> prefix;
  auto push = [&](const Event& ev) {
    ts.tokens.push_back(ev);
    prefix.push_back(vocab.id_of(ev));
  };

  push(Event::emotion(e));
  push(Event::key(key));
  for (int bar = 0; bar < conditioned.num_bars; ++bar) {
    push(Event::track_melody());
    push(Event::bar());
    for (const Event& ev : melody_bar_events(conditioned, bar, tag, key, policy)) push(ev);
    push(Event::track_chord());
    push(Event::bar());
    for (int beat = 0; beat < kBeatsPerBar; ++beat) {
      push(Event::sub_beat(beat * 4));
      const int id = sampler.sample(model.next_token_distribution(prefix), chord_mask);
      push(vocab.event_of(id));
    }
  }
  push(Event::eos());

  return decode(ts);
}

/// decide_key then generate_chords; the output melody keeps the input's
/// scale degrees under the decided key.
inline LeadSheet harmonize(const LeadSheet& ls, Emotion target, KeyPolicy key_policy,
                           const SequenceModel& model, Sampler& sampler, DegreePolicy& policy) {
  const Key key = decide_key(ls.key, target, key_policy, &model, &sampler);
  LeadSheet adjusted = adjust_melody_to_key(ls, key, policy);
  return generate_chords(model, target, key, adjusted, sampler, policy);
}

}  // namespace leadsheet

#endif  // LEADSHEET_HARMONIZER_HPP
