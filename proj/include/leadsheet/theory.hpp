#ifndef LEADSHEET_THEORY_HPP
#define LEADSHEET_THEORY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace leadsheet {

/// Pitch class 0..11, 0 = C.
using PitchClass = int;

enum class Mode : std::uint8_t { Major, Minor };

struct Key {
  PitchClass tonic = 0;  // 0..11
  Mode mode = Mode::Major;

  friend bool operator==(const Key&, const Key&) = default;
  friend auto operator<=>(const Key&, const Key&) = default;
};

/// The closed 12-symbol degree alphabet. III# and VII# are not members;
/// they are resolved to a neighbor at encode time.
enum class RomanDegree : std::uint8_t {
  I, Is, II, IIs, III, IV, IVs, V, Vs, VI, VIs, VII
};

inline constexpr int kNumDegrees = 12;

enum class ChordQuality : std::uint8_t {
  Major, Minor, Augment, Diminish, Suspend2, Suspend4,
  Major7, Minor7, Dominant7, Diminish7, HalfDiminish7
};

inline constexpr int kNumQualities = 11;

struct ChordLabel {
  PitchClass root = 0;
  ChordQuality quality = ChordQuality::Major;

  friend bool operator==(const ChordLabel&, const ChordLabel&) = default;
};

struct FunctionalChord {
  RomanDegree degree = RomanDegree::I;
  ChordQuality quality = ChordQuality::Major;

  friend bool operator==(const FunctionalChord&, const FunctionalChord&) = default;
};

/// Octave/degree decomposition of a MIDI pitch relative to a key.
/// The octave is the register of the tonic at or below the pitch.
struct DegreePitch {
  int octave = 4;  // 0..7
  RomanDegree degree = RomanDegree::I;

  friend bool operator==(const DegreePitch&, const DegreePitch&) = default;
};

inline constexpr int kMinPitch = 21;   // A0
inline constexpr int kMaxPitch = 108;  // C8

namespace detail {

// Semitone offsets from the tonic for each degree token, by mode.
// The minor table is total so any sampled token decodes in any key;
// II# and V# collide with III and VI, which a minor-key encoder never emits.
inline constexpr std::array<int, 12> kMajorOffsets = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
inline constexpr std::array<int, 12> kMinorOffsets = {0, 1, 2, 3, 3, 5, 6, 7, 8, 8, 9, 10};

inline const std::array<int, 12>& offsets(Mode mode) {
  return mode == Mode::Major ? kMajorOffsets : kMinorOffsets;
}

}  // namespace detail

/// Resolves the two minor-key accidentals (relative pcs 4 and 11) that have
/// no degree token of their own. Seeded-random reproduces choices bitwise.
class DegreePolicy {
 public:
  enum class Kind { SeededRandom, AlwaysLower, AlwaysUpper };

  static DegreePolicy seeded(std::uint64_t seed) { return DegreePolicy(Kind::SeededRandom, seed); }
  static DegreePolicy always_lower() { return DegreePolicy(Kind::AlwaysLower, 0); }
  static DegreePolicy always_upper() { return DegreePolicy(Kind::AlwaysUpper, 0); }

  // True -> pick the lower neighbor.
  bool pick_lower() {
    switch (kind_) {
      case Kind::AlwaysLower: return true;
      case Kind::AlwaysUpper: return false;
      case Kind::SeededRandom: break;
    }
    return std::uniform_int_distribution<int>(0, 1)(rng_) == 0;
  }

  Kind kind() const { return kind_; }

 private:
  DegreePolicy(Kind kind, std::uint64_t seed) : kind_(kind), rng_(seed) {}
  Kind kind_;
  std::mt19937_64 rng_;
};

/// The seven scale pitch classes of a key, tonic first. Minor = natural minor.
inline std::array<PitchClass, 7> scale_pcs(const Key& key) {
  static constexpr std::array<int, 7> major = {0, 2, 4, 5, 7, 9, 11};
  static constexpr std::array<int, 7> minor = {0, 2, 3, 5, 7, 8, 10};
  const auto& steps = key.mode == Mode::Major ? major : minor;
  std::array<PitchClass, 7> out{};
  for (int i = 0; i < 7; ++i) out[i] = (key.tonic + steps[i]) % 12;
  return out;
}

inline PitchClass degree_to_pc(RomanDegree degree, const Key& key) {
  return (key.tonic + detail::offsets(key.mode)[static_cast<int>(degree)]) % 12;
}

/// Inverse of degree_to_pc. Bijective in major; in minor the relative pcs 4
/// and 11 resolve by policy to a neighbor one semitone away.
inline RomanDegree pc_to_degree(PitchClass pc, const Key& key, DegreePolicy& policy) {
  const int r = ((pc - key.tonic) % 12 + 12) % 12;
  if (key.mode == Mode::Major) {
    return static_cast<RomanDegree>(r);  // offsets are the identity
  }
  static constexpr std::array<RomanDegree, 12> minor_map = {
      RomanDegree::I,   RomanDegree::Is,  RomanDegree::II, RomanDegree::III,
      RomanDegree::III, RomanDegree::IV,  RomanDegree::IVs, RomanDegree::V,
      RomanDegree::VI,  RomanDegree::VIs, RomanDegree::VII, RomanDegree::VII};
  if (r == 4) return policy.pick_lower() ? RomanDegree::III : RomanDegree::IV;
  if (r == 11) return policy.pick_lower() ? RomanDegree::VII : RomanDegree::I;
  return minor_map[r];
}

inline DegreePitch pitch_to_degree_pitch(int pitch, const Key& key, DegreePolicy& policy) {
  if (pitch < kMinPitch || pitch > kMaxPitch) {
    throw std::out_of_range("pitch out of [21,108]: " + std::to_string(pitch));
  }
  const int r = ((pitch % 12 - key.tonic) % 12 + 12) % 12;
  int octave = (pitch - key.tonic) / 12 - 1;
  RomanDegree degree = pc_to_degree(pitch % 12, key, policy);
  // r=11 resolved upward lands on the tonic of the next register.
  if (r == 11 && degree == RomanDegree::I) ++octave;
  return DegreePitch{octave, degree};
}

inline int degree_pitch_to_pitch(const DegreePitch& dp, const Key& key) {
  const int pitch = 12 * (dp.octave + 1) + key.tonic +
                    detail::offsets(key.mode)[static_cast<int>(dp.degree)];
  if (pitch < kMinPitch || pitch > kMaxPitch) {
    throw std::out_of_range("decoded pitch out of [21,108]: " + std::to_string(pitch));
  }
  return pitch;
}

inline Key parallel_key(const Key& key) {
  return Key{key.tonic, key.mode == Mode::Major ? Mode::Minor : Mode::Major};
}

/// Root-position close voicing of each quality, as intervals above the root.
inline std::set<PitchClass> chord_tones(const ChordLabel& chord) {
  static constexpr std::array<std::array<int, 4>, 11> templates = {{
      {0, 4, 7, -1},   // major
      {0, 3, 7, -1},   // minor
      {0, 4, 8, -1},   // augment
      {0, 3, 6, -1},   // diminish
      {0, 2, 7, -1},   // suspend2
      {0, 5, 7, -1},   // suspend4
      {0, 4, 7, 11},   // major7
      {0, 3, 7, 10},   // minor7
      {0, 4, 7, 10},   // dominant7
      {0, 3, 6, 9},    // diminish7
      {0, 3, 6, 10},   // half-diminish7
  }};
  std::set<PitchClass> out;
  for (int iv : templates[static_cast<int>(chord.quality)]) {
    if (iv >= 0) out.insert((chord.root + iv) % 12);
  }
  return out;
}

// --- names -----------------------------------------------------------------

inline const char* degree_name(RomanDegree d) {
  static constexpr const char* names[] = {"I",  "I#",  "II", "II#", "III", "IV",
                                          "IV#", "V",  "V#", "VI",  "VI#", "VII"};
  return names[static_cast<int>(d)];
}

inline std::optional<RomanDegree> degree_from_name(const std::string& s) {
  for (int i = 0; i < kNumDegrees; ++i) {
    if (s == degree_name(static_cast<RomanDegree>(i))) return static_cast<RomanDegree>(i);
  }
  return std::nullopt;
}

inline const char* quality_name(ChordQuality q) {
  static constexpr const char* names[] = {
      "major", "minor", "augment", "diminish", "suspend2", "suspend4",
      "major7", "minor7", "dominant7", "diminish7", "half-diminish7"};
  return names[static_cast<int>(q)];
}

inline std::optional<ChordQuality> quality_from_name(const std::string& s) {
  for (int i = 0; i < kNumQualities; ++i) {
    if (s == quality_name(static_cast<ChordQuality>(i))) return static_cast<ChordQuality>(i);
  }
  return std::nullopt;
}

inline const char* pc_letter(PitchClass pc) {
  static constexpr const char* names[] = {"C",  "C#", "D",  "D#", "E",  "F",
                                          "F#", "G",  "G#", "A",  "A#", "B"};
  return names[((pc % 12) + 12) % 12];
}

inline std::optional<PitchClass> pc_from_letter(const std::string& s) {
  for (int i = 0; i < 12; ++i) {
    if (s == pc_letter(i)) return i;
  }
  return std::nullopt;
}

inline std::string key_name(const Key& key) {
  return std::string(pc_letter(key.tonic)) + (key.mode == Mode::Major ? "major" : "minor");
}

inline std::optional<Key> key_from_name(const std::string& s) {
  for (int t = 0; t < 12; ++t) {
    for (Mode m : {Mode::Major, Mode::Minor}) {
      Key k{t, m};
      if (key_name(k) == s) return k;
    }
  }
  return std::nullopt;
}

}  // namespace leadsheet

#endif  // LEADSHEET_THEORY_HPP
