#ifndef LEADSHEET_SAMPLER_HPP
#define LEADSHEET_SAMPLER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace leadsheet {

/// Defaults match the inference settings used throughout: temperatured
/// softmax with tau = 1.1, nucleus p = 0.99.
struct SamplerConfig {
  double temperature = 1.1;
  double top_p = 0.99;
  std::uint64_t seed = 0;
};

/// The nucleus: indices surviving masking, temperature scaling, and top-p
/// truncation, with their renormalized probabilities.
struct Nucleus {
  std::vector<int> indices;     // descending probability, index tie-break
  std::vector<double> probs;    // renormalized over the nucleus
  bool fallback_uniform = false;  // model gave zero mass to every legal token
};

inline Nucleus build_nucleus(const std::vector<double>& dist, const SamplerConfig& config,
                             const std::vector<char>& legal_mask) {
  if (dist.size() != legal_mask.size()) throw std::invalid_argument("mask size mismatch");
  if (config.temperature <= 0.0) throw std::invalid_argument("temperature must be > 0");
  if (config.top_p <= 0.0 || config.top_p > 1.0) throw std::invalid_argument("top_p must be in (0,1]");

  std::vector<int> legal;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (legal_mask[i]) legal.push_back(static_cast<int>(i));
  }
  if (legal.empty()) throw std::invalid_argument("empty legal token set");

  // log-domain temperature on masked-renormalized probabilities
  std::vector<double> scaled(legal.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < legal.size(); ++i) {
    const double p = dist[legal[i]];
    if (p > 0.0) {
      scaled[i] = std::exp(std::log(p) / config.temperature);
      total += scaled[i];
    }
  }

  Nucleus out;
  if (total == 0.0) {
    out.fallback_uniform = true;
    out.indices = legal;
    out.probs.assign(legal.size(), 1.0 / legal.size());
    return out;
  }
  for (double& s : scaled) s /= total;

  std::vector<std::size_t> order(legal.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scaled[a] > scaled[b]; });

  double cum = 0.0;
  double kept = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const std::size_t i = order[rank];
    out.indices.push_back(legal[i]);
    out.probs.push_back(scaled[i]);
    cum += scaled[i];
    kept = cum;
    if (cum >= config.top_p - 1e-12) break;
  }
  for (double& p : out.probs) p /= kept;
  return out;
}

/// Seeded sampling state shared across one generation run.
class Sampler {
 public:
  explicit Sampler(const SamplerConfig& config) : config_(config), rng_(config.seed) {}

  const SamplerConfig& config() const { return config_; }
  int fallback_count() const { return fallback_count_; }

  int sample(const std::vector<double>& dist, const std::vector<char>& legal_mask) {
    Nucleus nucleus = build_nucleus(dist, config_, legal_mask);
    if (nucleus.fallback_uniform) ++fallback_count_;
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    double cum = 0.0;
    for (std::size_t i = 0; i < nucleus.indices.size(); ++i) {
      cum += nucleus.probs[i];
      if (u <= cum) return nucleus.indices[i];
    }
    return nucleus.indices.back();
  }

 private:
  SamplerConfig config_;
  std::mt19937_64 rng_;
  int fallback_count_ = 0;
};

/// One-shot variant over a caller-owned generator.
inline int nucleus_sample(const std::vector<double>& dist, const SamplerConfig& config,
                          const std::vector<char>& legal_mask, std::mt19937_64& rng) {
  Nucleus nucleus = build_nucleus(dist, config, legal_mask);
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double cum = 0.0;
  for (std::size_t i = 0; i < nucleus.indices.size(); ++i) {
    cum += nucleus.probs[i];
    if (u <= cum) return nucleus.indices[i];
  }
  return nucleus.indices.back();
}

}  // namespace leadsheet

#endif  // LEADSHEET_SAMPLER_HPP
