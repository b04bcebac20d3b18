#ifndef LEADSHEET_STATS_HPP
#define LEADSHEET_STATS_HPP

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "leadsheet/codec.hpp"
#include "leadsheet/metrics.hpp"

namespace leadsheet {

struct StatsReport {
  int num_clips = 0;
  double mean_bars = 0.0;
  std::map<std::string, double> mean_events;  // per representation
  std::map<Emotion, std::array<int, 24>> key_hist;
};

/// Clip count, mean bars, mean encoded-event count per representation, and
/// the per-emotion key histogram.
inline StatsReport compute_stats(const std::vector<LeadSheet>& corpus) {
  StatsReport report;
  report.num_clips = static_cast<int>(corpus.size());
  report.key_hist = key_histogram(corpus);
  if (corpus.empty()) return report;
  double bars = 0.0;
  std::map<std::string, double> events;
  for (const LeadSheet& ls : corpus) {
    bars += ls.num_bars;
    for (auto tag : {Representation::Remi, Representation::Functional,
                     Representation::FunctionalAblated}) {
      auto policy = DegreePolicy::always_lower();
      events[representation_name(tag)] += static_cast<double>(encode(ls, tag, policy).tokens.size());
    }
  }
  report.mean_bars = bars / report.num_clips;
  for (auto& [tag, total] : events) report.mean_events[tag] = total / report.num_clips;
  return report;
}

inline nlohmann::json stats_to_json(const StatsReport& report) {
  nlohmann::json j;
  j["num_clips"] = report.num_clips;
  j["mean_bars"] = report.mean_bars;
  j["mean_events"] = report.mean_events;
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [emotion, counts] : report.key_hist) {
    nlohmann::json row = nlohmann::json::object();
    for (int t = 0; t < 12; ++t) {
      for (Mode m : {Mode::Major, Mode::Minor}) {
        row[key_name(Key{t, m})] = counts[t * 2 + (m == Mode::Minor ? 1 : 0)];
      }
    }
    hist[emotion_name(emotion)] = std::move(row);
  }
  j["key_histogram"] = std::move(hist);
  return j;
}

}  // namespace leadsheet

#endif  // LEADSHEET_STATS_HPP
