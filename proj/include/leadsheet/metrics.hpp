#ifndef LEADSHEET_METRICS_HPP
#define LEADSHEET_METRICS_HPP

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "leadsheet/score.hpp"
#include "leadsheet/theory.hpp"

namespace leadsheet {

// --- harmonicity -----------------------------------------------------------

/// Chord tone to non-chord tone ratio. A non-chord tone counts as "proper"
/// when the next melody note exists and lies within 2 semitones.
/// No eligible notes -> nullopt.
inline std::optional<double> ctnctr(const LeadSheet& ls) {
  int n_c = 0, n_n = 0, n_p = 0;
  for (std::size_t i = 0; i < ls.melody.size(); ++i) {
    const Note& n = ls.melody[i];
    const ChordLabel* chord = chord_at_onset(ls, n.onset);
    if (!chord) continue;
    auto tones = chord_tones(*chord);
    if (tones.count(n.pitch % 12)) {
      ++n_c;
    } else {
      ++n_n;
      if (i + 1 < ls.melody.size() &&
          std::abs(ls.melody[i + 1].pitch - n.pitch) <= 2) {
        ++n_p;
      }
    }
  }
  if (n_c + n_n == 0) return std::nullopt;
  return static_cast<double>(n_c + n_p) / (n_c + n_n);
}

/// Pitch consonance score: per chord tone, interval (pitch - tone) mod 12
/// scores +1 on {0,3,4,7,8,9}, 0 on {5}, -1 otherwise; averaged over chord
/// tones, then duration-weighted over melody notes.
inline std::optional<double> pcs(const LeadSheet& ls) {
  double weighted = 0.0, total_dur = 0.0;
  for (const Note& n : ls.melody) {
    const ChordLabel* chord = chord_at_onset(ls, n.onset);
    if (!chord) continue;
    auto tones = chord_tones(*chord);
    double score = 0.0;
    for (PitchClass pc : tones) {
      const int interval = ((n.pitch % 12 - pc) % 12 + 12) % 12;
      if (interval == 0 || interval == 3 || interval == 4 || interval == 7 ||
          interval == 8 || interval == 9) {
        score += 1.0;
      } else if (interval != 5) {
        score -= 1.0;
      }
    }
    weighted += n.duration * score / static_cast<double>(tones.size());
    total_dur += n.duration;
  }
  if (total_dur == 0.0) return std::nullopt;
  return weighted / total_dur;
}

/// 6-D tonal centroid of an L1-normalized 12-bin pitch-class vector.
inline std::array<double, 6> tonal_centroid(const std::array<double, 12>& pc_vector) {
  constexpr double pi = 3.14159265358979323846;
  double norm = 0.0;
  for (double v : pc_vector) norm += std::abs(v);
  std::array<double, 6> out{};
  if (norm == 0.0) return out;
  static constexpr std::array<double, 3> radii = {1.0, 1.0, 0.5};
  static constexpr std::array<double, 3> angles = {7.0 * pi / 6.0, 3.0 * pi / 2.0,
                                                   2.0 * pi / 3.0};
  for (int k = 0; k < 12; ++k) {
    const double w = pc_vector[k] / norm;
    for (int a = 0; a < 3; ++a) {
      out[2 * a] += w * radii[a] * std::sin(k * angles[a]);
      out[2 * a + 1] += w * radii[a] * std::cos(k * angles[a]);
    }
  }
  return out;
}

inline double tonal_distance(const std::array<double, 12>& a, const std::array<double, 12>& b) {
  auto ca = tonal_centroid(a);
  auto cb = tonal_centroid(b);
  double sum = 0.0;
  for (int i = 0; i < 6; ++i) sum += (ca[i] - cb[i]) * (ca[i] - cb[i]);
  return std::sqrt(sum);
}

/// Melody-chord tonal distance, duration-weighted over melody notes.
inline std::optional<double> mctd(const LeadSheet& ls) {
  double weighted = 0.0, total_dur = 0.0;
  for (const Note& n : ls.melody) {
    const ChordLabel* chord = chord_at_onset(ls, n.onset);
    if (!chord) continue;
    std::array<double, 12> note_vec{};
    note_vec[n.pitch % 12] = 1.0;
    std::array<double, 12> chord_vec{};
    for (PitchClass pc : chord_tones(*chord)) chord_vec[pc] = 1.0;
    weighted += n.duration * tonal_distance(note_vec, chord_vec);
    total_dur += n.duration;
  }
  if (total_dur == 0.0) return std::nullopt;
  return weighted / total_dur;
}

// --- key metrics -----------------------------------------------------------

/// RR: fraction of chord roots inside the key scale.
inline std::optional<double> root_ratio(const LeadSheet& ls) {
  auto scale = scale_pcs(ls.key);
  int in = 0, total = 0;
  for (const BeatChord& bc : ls.chords) {
    if (!bc.chord) continue;
    ++total;
    if (std::find(scale.begin(), scale.end(), bc.chord->root) != scale.end()) ++in;
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(in) / total;
}

/// NR: fraction of chord tones inside the key scale.
inline std::optional<double> note_ratio(const LeadSheet& ls) {
  auto scale = scale_pcs(ls.key);
  int in = 0, total = 0;
  for (const BeatChord& bc : ls.chords) {
    if (!bc.chord) continue;
    for (PitchClass pc : chord_tones(*bc.chord)) {
      ++total;
      if (std::find(scale.begin(), scale.end(), pc) != scale.end()) ++in;
    }
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(in) / total;
}

// --- distributions ---------------------------------------------------------

inline constexpr double kSmoothingEpsilon = 1e-5;

struct Distribution {
  std::vector<std::string> support;
  std::vector<double> probs;
};

/// Counts -> smoothed, normalized distribution (epsilon added to every bin).
inline Distribution make_distribution(std::vector<std::string> support,
                                      const std::vector<double>& counts) {
  if (support.size() != counts.size()) throw std::invalid_argument("support/count size mismatch");
  double total = 0.0;
  std::vector<double> probs(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    probs[i] = counts[i] + kSmoothingEpsilon;
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return Distribution{std::move(support), std::move(probs)};
}

inline Distribution quality_distribution(const std::vector<LeadSheet>& corpus) {
  std::vector<double> counts(kNumQualities, 0.0);
  bool any = false;
  for (const LeadSheet& ls : corpus) {
    for (const BeatChord& bc : ls.chords) {
      if (!bc.chord) continue;
      counts[static_cast<int>(bc.chord->quality)] += 1.0;
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("no chords in corpus");
  std::vector<std::string> support;
  for (int q = 0; q < kNumQualities; ++q) support.push_back(quality_name(static_cast<ChordQuality>(q)));
  return make_distribution(std::move(support), counts);
}

/// Bigram root progressions as chromatic intervals (root2 - root1) mod 12,
/// taken over consecutive chord slots; pairs touching a NoChord slot skip.
inline Distribution progression_distribution(const std::vector<LeadSheet>& corpus) {
  std::vector<double> counts(12, 0.0);
  bool any = false;
  for (const LeadSheet& ls : corpus) {
    for (std::size_t i = 0; i + 1 < ls.chords.size(); ++i) {
      const auto& a = ls.chords[i].chord;
      const auto& b = ls.chords[i + 1].chord;
      if (!a || !b) continue;
      counts[((b->root - a->root) % 12 + 12) % 12] += 1.0;
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("no chord bigrams in corpus");
  std::vector<std::string> support;
  for (int i = 0; i < 12; ++i) support.push_back(std::to_string(i));
  return make_distribution(std::move(support), counts);
}

inline double kl_divergence(const Distribution& p, const Distribution& q) {
  if (p.support != q.support) throw std::invalid_argument("distribution support mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.probs.size(); ++i) {
    if (p.probs[i] > 0.0) kl += p.probs[i] * std::log(p.probs[i] / q.probs[i]);
  }
  return kl;
}

namespace detail {

inline std::vector<LeadSheet> filter_emotion(const std::vector<LeadSheet>& corpus, Emotion e) {
  std::vector<LeadSheet> out;
  for (const LeadSheet& ls : corpus) {
    if (ls.emotion == e) out.push_back(ls);
  }
  return out;
}

template <typename DistFn>
double emotion_averaged_kl(const std::vector<LeadSheet>& generated,
                           const std::vector<LeadSheet>& real, DistFn dist) {
  double sum = 0.0;
  for (Emotion e : {Emotion::Positive, Emotion::Negative}) {
    auto g = filter_emotion(generated, e);
    auto r = filter_emotion(real, e);
    if (g.empty() || r.empty()) {
      throw std::invalid_argument(std::string("missing emotion class: ") + emotion_name(e));
    }
    sum += kl_divergence(dist(g), dist(r));
  }
  return sum / 2.0;
}

}  // namespace detail

/// QD: mean over emotions of KL between chord-quality distributions.
inline double qd(const std::vector<LeadSheet>& generated, const std::vector<LeadSheet>& real) {
  return detail::emotion_averaged_kl(generated, real,
                                     [](const auto& c) { return quality_distribution(c); });
}

/// PD: mean over emotions of KL between bigram progression distributions.
inline double pd(const std::vector<LeadSheet>& generated, const std::vector<LeadSheet>& real) {
  return detail::emotion_averaged_kl(generated, real,
                                     [](const auto& c) { return progression_distribution(c); });
}

/// Raw key counts per (emotion, key).
inline std::map<Emotion, std::array<int, 24>> key_histogram(const std::vector<LeadSheet>& corpus) {
  std::map<Emotion, std::array<int, 24>> hist;
  for (Emotion e : {Emotion::Positive, Emotion::Negative, Emotion::None}) hist[e] = {};
  for (const LeadSheet& ls : corpus) {
    const int idx = ls.key.tonic * 2 + (ls.key.mode == Mode::Minor ? 1 : 0);
    hist[ls.emotion][idx] += 1;
  }
  return hist;
}

// --- per-clip report -------------------------------------------------------

struct MetricReport {
  std::optional<double> ctnctr;
  std::optional<double> pcs;
  std::optional<double> mctd;
  std::optional<double> rr;
  std::optional<double> nr;
};

inline MetricReport evaluate_clip(const LeadSheet& ls) {
  return MetricReport{ctnctr(ls), pcs(ls), mctd(ls), root_ratio(ls), note_ratio(ls)};
}

/// Mean over clips, skipping no-value entries per metric.
inline MetricReport aggregate_reports(const std::vector<MetricReport>& reports) {
  auto mean_of = [&](auto member) -> std::optional<double> {
    double sum = 0.0;
    int n = 0;
    for (const MetricReport& r : reports) {
      if (const auto& v = r.*member) {
        sum += *v;
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return sum / n;
  };
  return MetricReport{mean_of(&MetricReport::ctnctr), mean_of(&MetricReport::pcs),
                      mean_of(&MetricReport::mctd), mean_of(&MetricReport::rr),
                      mean_of(&MetricReport::nr)};
}

}  // namespace leadsheet

#endif  // LEADSHEET_METRICS_HPP
