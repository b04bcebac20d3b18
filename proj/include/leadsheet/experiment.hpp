#ifndef LEADSHEET_EXPERIMENT_HPP
#define LEADSHEET_EXPERIMENT_HPP

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "leadsheet/codec.hpp"
#include "leadsheet/harmonizer.hpp"
#include "leadsheet/io.hpp"
#include "leadsheet/metrics.hpp"
#include "leadsheet/model.hpp"

namespace leadsheet {

struct VariantSpec {
  Representation representation = Representation::Functional;
  KeyPolicy key_policy = KeyPolicy::KeepOriginal;

  std::string name() const {
    std::string n = representation_name(representation);
    if (key_policy != KeyPolicy::KeepOriginal) n += std::string(" (") + key_policy_name(key_policy) + ")";
    return n;
  }
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  int repeats = 1;
  double lambda = 0.7;
  int ngram_order = 3;
  double temperature = 1.1;
  double top_p = 0.99;
  std::string corpus_manifest;    // labeled clips, train + validation splits
  std::string pretrain_manifest;  // optional unlabeled clips (Emotion_None)
  std::vector<VariantSpec> variants;
  std::string output_dir;

  static ExperimentConfig from_json(const nlohmann::json& j, const std::string& base_dir = "") {
    ExperimentConfig c;
    c.seed = j.value("seed", std::uint64_t(0));
    c.repeats = j.value("repeats", 1);
    c.lambda = j.value("lambda", 0.7);
    c.ngram_order = j.value("ngram_order", 3);
    c.temperature = j.value("temperature", 1.1);
    c.top_p = j.value("top_p", 0.99);
    auto resolve = [&](const std::string& p) {
      return p.empty() || p.starts_with('/') ? p : base_dir + p;
    };
    c.corpus_manifest = resolve(j.at("corpus_manifest").get<std::string>());
    c.pretrain_manifest = resolve(j.value("pretrain_manifest", ""));
    c.output_dir = resolve(j.value("output_dir", "experiment-out"));
    for (const auto& v : j.at("variants")) {
      VariantSpec spec;
      auto rep = representation_from_name(v.at("representation").get<std::string>());
      if (!rep) throw IoError("unknown representation in variant");
      spec.representation = *rep;
      auto policy = key_policy_from_name(v.value("key_policy", "keep"));
      if (!policy) throw IoError("unknown key_policy in variant");
      spec.key_policy = *policy;
      c.variants.push_back(spec);
    }
    return c;
  }

  static ExperimentConfig from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open");
    nlohmann::json j;
    in >> j;
    auto slash = path.find_last_of('/');
    return from_json(j, slash == std::string::npos ? "" : path.substr(0, slash + 1));
  }
};

struct ClipFailure {
  std::string variant;
  int clip_index;
  Emotion emotion;
  int repeat;
  std::string message;
};

struct VariantResult {
  std::string name;
  MetricReport metrics;
  std::optional<double> qd;
  std::optional<double> pd;
  std::vector<MetricReport> per_clip;
  int generated = 0;
};

struct ExperimentResult {
  std::vector<VariantResult> variants;
  MetricReport real_row;
  std::vector<MetricReport> real_per_clip;
  std::vector<ClipFailure> failures;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::string format_metric(const std::optional<double>& v) {
  if (!v) return "n/a";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(4) << *v;
  return ss.str();
}

}  // namespace detail

/// Harmonizes every validation melody under positive and negative emotion,
/// `repeats` times per variant, then aggregates harmonicity/key metrics and
/// QD/PD against the validation ground truth. One bad clip is recorded and
/// skipped, never fatal. Byte-identical outputs for a fixed master seed.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  CorpusManifest manifest = load_manifest(config.corpus_manifest);
  std::vector<LeadSheet> train_clips = load_corpus(manifest, Split::Train);
  std::vector<LeadSheet> validation = load_corpus(manifest, Split::Validation);
  if (train_clips.empty()) throw IoError("empty train split");
  if (validation.empty()) throw IoError("empty validation split");

  std::vector<LeadSheet> pretrain_clips;
  if (!config.pretrain_manifest.empty()) {
    CorpusManifest pm = load_manifest(config.pretrain_manifest);
    for (Split s : {Split::Train, Split::Validation}) {
      for (LeadSheet& ls : load_corpus(pm, s)) {
        ls.emotion = Emotion::None;
        pretrain_clips.push_back(std::move(ls));
      }
    }
  }

  ExperimentResult result;
  for (const LeadSheet& ls : validation) result.real_per_clip.push_back(evaluate_clip(ls));
  result.real_row = aggregate_reports(result.real_per_clip);

  // one trained model per representation
  std::map<Representation, NGramModel> models;
  for (const VariantSpec& variant : config.variants) {
    const Representation rep = variant.representation;
    if (models.count(rep)) continue;
    auto policy = DegreePolicy::seeded(detail::mix_seed(config.seed, static_cast<int>(rep)));
    auto prep = [&](const LeadSheet& ls) {
      return rep == Representation::RemiTrans ? transpose_to_c(ls) : ls;
    };
    std::vector<TokenSequence> labeled, unlabeled;
    for (const LeadSheet& ls : train_clips) labeled.push_back(encode(prep(ls), rep, policy));
    for (const LeadSheet& ls : pretrain_clips) unlabeled.push_back(encode(prep(ls), rep, policy));
    NGramModel model(rep, config.ngram_order);
    train(model, unlabeled, labeled, unlabeled.empty() ? 1.0 : config.lambda);
    models.emplace(rep, std::move(model));
  }

  int variant_index = 0;
  for (const VariantSpec& variant : config.variants) {
    const NGramModel& model = models.at(variant.representation);
    VariantResult vr;
    vr.name = variant.name();
    std::vector<LeadSheet> generated;
    for (int clip_index = 0; clip_index < static_cast<int>(validation.size()); ++clip_index) {
      const LeadSheet base = variant.representation == Representation::RemiTrans
                                 ? transpose_to_c(validation[clip_index])
                                 : validation[clip_index];
      for (Emotion e : {Emotion::Positive, Emotion::Negative}) {
        for (int repeat = 0; repeat < config.repeats; ++repeat) {
          const std::uint64_t s = detail::mix_seed(
              config.seed, detail::mix_seed(variant_index,
                                            detail::mix_seed(clip_index * 4 + static_cast<int>(e),
                                                             repeat)));
          Sampler sampler(SamplerConfig{config.temperature, config.top_p, s});
          auto policy = DegreePolicy::seeded(s);
          try {
            LeadSheet out =
                harmonize(base, e, variant.key_policy, model, sampler, policy);
            vr.per_clip.push_back(evaluate_clip(out));
            generated.push_back(std::move(out));
            ++vr.generated;
          } catch (const std::exception& ex) {
            result.failures.push_back({vr.name, clip_index, e, repeat, ex.what()});
          }
        }
      }
    }
    vr.metrics = aggregate_reports(vr.per_clip);
    try {
      vr.qd = qd(generated, validation);
      vr.pd = pd(generated, validation);
    } catch (const std::invalid_argument&) {
      // validation ground truth lacks an emotion class; leave unset
    }
    result.variants.push_back(std::move(vr));
    ++variant_index;
  }
  return result;
}

/// Writes harmonization_table.tsv, controllability_table.tsv, report.json.
inline void write_experiment_outputs(const ExperimentResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  {
    std::ofstream out(dir + "/harmonization_table.tsv");
    out << "Methods\tCTnCTR\tPCS\tMCTD\tRR\tNR\n";
    auto row = [&](const std::string& name, const MetricReport& m) {
      out << name << '\t' << detail::format_metric(m.ctnctr) << '\t'
          << detail::format_metric(m.pcs) << '\t' << detail::format_metric(m.mctd) << '\t'
          << detail::format_metric(m.rr) << '\t' << detail::format_metric(m.nr) << '\n';
    };
    for (const VariantResult& v : result.variants) row(v.name, v.metrics);
    row("Real data", result.real_row);
  }
  {
    std::ofstream out(dir + "/controllability_table.tsv");
    out << "Methods\tQD\tPD\n";
    for (const VariantResult& v : result.variants) {
      out << v.name << '\t' << detail::format_metric(v.qd) << '\t'
          << detail::format_metric(v.pd) << '\n';
    }
  }
  {
    nlohmann::json j;
    auto report_json = [](const MetricReport& m) {
      nlohmann::json r;
      auto put = [&r](const char* key, const std::optional<double>& v) {
        if (v) r[key] = *v;
        else r[key] = nullptr;
      };
      put("ctnctr", m.ctnctr);
      put("pcs", m.pcs);
      put("mctd", m.mctd);
      put("rr", m.rr);
      put("nr", m.nr);
      return r;
    };
    j["real"] = {{"aggregate", report_json(result.real_row)}};
    for (const MetricReport& m : result.real_per_clip) j["real"]["per_clip"].push_back(report_json(m));
    for (const VariantResult& v : result.variants) {
      nlohmann::json vj;
      vj["name"] = v.name;
      vj["generated"] = v.generated;
      vj["aggregate"] = report_json(v.metrics);
      if (v.qd) vj["qd"] = *v.qd;
      if (v.pd) vj["pd"] = *v.pd;
      for (const MetricReport& m : v.per_clip) vj["per_clip"].push_back(report_json(m));
      j["variants"].push_back(std::move(vj));
    }
    for (const ClipFailure& f : result.failures) {
      j["failures"].push_back({{"variant", f.variant},
                               {"clip", f.clip_index},
                               {"emotion", emotion_name(f.emotion)},
                               {"repeat", f.repeat},
                               {"error", f.message}});
    }
    std::ofstream out(dir + "/report.json");
    out << canonical_json(j);
  }
}

}  // namespace leadsheet

#endif  // LEADSHEET_EXPERIMENT_HPP
