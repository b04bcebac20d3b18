#ifndef LEADSHEET_SCORE_HPP
#define LEADSHEET_SCORE_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "leadsheet/theory.hpp"

namespace leadsheet {

/// `None` is legal only for unlabeled (pretraining) data.
enum class Emotion : std::uint8_t { Positive, Negative, None };

inline const char* emotion_name(Emotion e) {
  static constexpr const char* names[] = {"positive", "negative", "none"};
  return names[static_cast<int>(e)];
}

inline std::optional<Emotion> emotion_from_name(const std::string& s) {
  if (s == "positive") return Emotion::Positive;
  if (s == "negative") return Emotion::Negative;
  if (s == "none") return Emotion::None;
  return std::nullopt;
}

/// Onsets and durations are in 16th-note steps; 16 sub-beats per 4/4 bar.
struct Note {
  int onset = 0;     // >= 0, steps from clip start
  int pitch = 60;    // MIDI, [21,108]
  int duration = 1;  // [1,16]

  friend bool operator==(const Note&, const Note&) = default;
};

/// One chord slot per quarter-note beat; nullopt = no chord sounding.
struct BeatChord {
  std::optional<ChordLabel> chord;

  friend bool operator==(const BeatChord&, const BeatChord&) = default;
};

inline constexpr int kSubBeatsPerBar = 16;
inline constexpr int kBeatsPerBar = 4;

/// Canonical in-memory clip: melody + per-beat chords + key + emotion.
/// 4/4 only; chords.size() == 4 * num_bars; melody sorted by onset.
struct LeadSheet {
  Emotion emotion = Emotion::None;
  Key key;
  int num_bars = 1;
  std::vector<Note> melody;
  std::vector<BeatChord> chords;

  friend bool operator==(const LeadSheet&, const LeadSheet&) = default;
};

/// Throws std::invalid_argument on the first violated invariant.
inline void check_lead_sheet(const LeadSheet& ls) {
  if (ls.num_bars < 1) throw std::invalid_argument("num_bars must be >= 1");
  if (static_cast<int>(ls.chords.size()) != kBeatsPerBar * ls.num_bars) {
    throw std::invalid_argument("chords length must be 4 * num_bars, got " +
                                std::to_string(ls.chords.size()));
  }
  int prev_onset = -1;
  for (const Note& n : ls.melody) {
    if (n.pitch < kMinPitch || n.pitch > kMaxPitch) {
      throw std::invalid_argument("note pitch out of [21,108]: " + std::to_string(n.pitch));
    }
    if (n.onset < 0 || n.onset >= kSubBeatsPerBar * ls.num_bars) {
      throw std::invalid_argument("note onset out of clip: " + std::to_string(n.onset));
    }
    if (n.duration < 1 || n.duration > 16) {
      throw std::invalid_argument("note duration out of [1,16]: " + std::to_string(n.duration));
    }
    if (n.onset < prev_onset) throw std::invalid_argument("melody not sorted by onset");
    prev_onset = n.onset;
  }
}

/// The BeatChord covering a melody onset, or nullptr for NoChord slots.
inline const ChordLabel* chord_at_onset(const LeadSheet& ls, int onset) {
  const int beat = onset / 4;
  if (beat < 0 || beat >= static_cast<int>(ls.chords.size())) return nullptr;
  const auto& slot = ls.chords[beat].chord;
  return slot ? &*slot : nullptr;
}

}  // namespace leadsheet

#endif  // LEADSHEET_SCORE_HPP
