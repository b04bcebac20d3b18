// Command-line front end for the lead sheet toolkit.
//
// Exit codes: 0 success, 1 validation/usage error, 2 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "leadsheet/codec.hpp"
#include "leadsheet/demo.hpp"
#include "leadsheet/experiment.hpp"
#include "leadsheet/harmonizer.hpp"
#include "leadsheet/io.hpp"
#include "leadsheet/metrics.hpp"
#include "leadsheet/midi.hpp"
#include "leadsheet/model.hpp"
#include "leadsheet/sampler.hpp"
#include "leadsheet/stats.hpp"

namespace {

using namespace leadsheet;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

// Thrown for filesystem-level failures (open/read/write), exit code 2.
// Library IoError covering schema/content problems maps to exit code 1.
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path);
  if (!in) throw FileError(path + ": cannot open");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw FileError(path + ": cannot open for writing");
  out << text;
  if (!out) throw FileError(path + ": write failed");
}

LeadSheet read_clip(const std::string& path) {
  return lead_sheet_from_json(nlohmann::json::parse(read_text(path)));
}

void write_clip(const std::string& path, const LeadSheet& ls) {
  write_text(path, canonical_json(lead_sheet_to_json(ls)));
}

Representation parse_representation(const std::string& name) {
  auto rep = representation_from_name(name);
  if (!rep) throw std::invalid_argument("unknown representation: " + name);
  return *rep;
}

DegreePolicy make_policy(const std::string& name, std::uint64_t seed) {
  if (name == "random") return DegreePolicy::seeded(seed);
  if (name == "lower") return DegreePolicy::always_lower();
  if (name == "upper") return DegreePolicy::always_upper();
  throw std::invalid_argument("unknown degree policy: " + name);
}

struct CommonOptions {
  std::string input = "-";
  std::string output = "-";
  std::string representation = "functional";
  std::string degree_policy = "random";
  std::uint64_t seed = 0;
};

int run(int argc, char** argv) {
  CLI::App app{"Lead sheet codec, harmonizer, and evaluation toolkit"};
  app.require_subcommand(1);

  CommonOptions opt;

  auto add_io = [&](CLI::App* cmd, bool with_rep) {
    cmd->add_option("-i,--input", opt.input, "input file ('-' for stdin)");
    cmd->add_option("-o,--output", opt.output, "output file ('-' for stdout)");
    if (with_rep) {
      cmd->add_option("-r,--representation", opt.representation,
                      "remi | remi-trans | functional | functional-ablated");
      cmd->add_option("--degree-policy", opt.degree_policy, "random | lower | upper");
      cmd->add_option("--seed", opt.seed, "seed for the random degree policy");
    }
  };

  // encode: clip JSON -> token text
  auto* encode_cmd = app.add_subcommand("encode", "encode a clip JSON file to token text");
  add_io(encode_cmd, true);
  encode_cmd->callback([&] {
    LeadSheet ls = read_clip(opt.input);
    const Representation rep = parse_representation(opt.representation);
    if (rep == Representation::RemiTrans) ls = transpose_to_c(ls);
    DegreePolicy policy = make_policy(opt.degree_policy, opt.seed);
    write_text(opt.output, token_sequence_to_text(encode(ls, rep, policy)));
  });

  // decode: token text -> clip JSON
  auto* decode_cmd = app.add_subcommand("decode", "decode token text to a clip JSON file");
  add_io(decode_cmd, true);
  decode_cmd->callback([&] {
    const Representation rep = parse_representation(opt.representation);
    TokenSequence ts = token_sequence_from_text(read_text(opt.input), rep);
    write_clip(opt.output, decode(ts));
  });

  // transpose: clip JSON -> clip JSON in C major / c minor
  auto* transpose_cmd =
      app.add_subcommand("transpose", "transpose a clip to C major / c minor");
  add_io(transpose_cmd, false);
  transpose_cmd->callback([&] { write_clip(opt.output, transpose_to_c(read_clip(opt.input))); });

  // train
  std::string corpus_manifest, pretrain_manifest;
  int order = 3;
  double lambda = 0.7;
  auto* train_cmd = app.add_subcommand("train", "train an n-gram model on a corpus");
  train_cmd->add_option("--corpus", corpus_manifest, "labeled corpus manifest (train split)")
      ->required();
  train_cmd->add_option("--pretrain", pretrain_manifest,
                        "optional unlabeled corpus manifest (emotions ignored)");
  train_cmd->add_option("-r,--representation", opt.representation,
                        "remi | remi-trans | functional | functional-ablated");
  train_cmd->add_option("--order", order, "n-gram order");
  train_cmd->add_option("--lambda", lambda, "labeled-data mixture weight in [0,1]");
  train_cmd->add_option("--seed", opt.seed, "seed for the random degree policy");
  train_cmd->add_option("-o,--output", opt.output, "model file ('-' for stdout)");
  train_cmd->callback([&] {
    const Representation rep = parse_representation(opt.representation);
    DegreePolicy policy = DegreePolicy::seeded(opt.seed);
    auto prep = [&](const LeadSheet& ls) {
      return rep == Representation::RemiTrans ? transpose_to_c(ls) : ls;
    };
    std::vector<TokenSequence> labeled, unlabeled;
    for (const LeadSheet& ls : load_corpus(load_manifest(corpus_manifest), Split::Train)) {
      labeled.push_back(encode(prep(ls), rep, policy));
    }
    if (!pretrain_manifest.empty()) {
      CorpusManifest pm = load_manifest(pretrain_manifest);
      for (Split s : {Split::Train, Split::Validation}) {
        for (LeadSheet ls : load_corpus(pm, s)) {
          ls.emotion = Emotion::None;
          unlabeled.push_back(encode(prep(ls), rep, policy));
        }
      }
    }
    NGramModel model(rep, order);
    train(model, unlabeled, labeled, unlabeled.empty() ? 1.0 : lambda);
    write_text(opt.output, canonical_json(model.to_json()));
  });

  // harmonize
  std::string emotion_name_opt = "positive";
  std::string key_policy_opt = "rule";
  std::string model_path;
  double temperature = 1.1;
  double top_p = 0.99;
  auto* harmonize_cmd =
      app.add_subcommand("harmonize", "generate chords for a melody under a target emotion");
  add_io(harmonize_cmd, false);
  harmonize_cmd->add_option("--emotion", emotion_name_opt, "positive | negative")->required();
  harmonize_cmd->add_option("--key-policy", key_policy_opt, "keep | rule | model");
  harmonize_cmd->add_option("--model", model_path, "trained model file")->required();
  harmonize_cmd->add_option("--seed", opt.seed, "seed for sampling and degree choices");
  harmonize_cmd->add_option("--temperature", temperature, "sampling temperature");
  harmonize_cmd->add_option("--top-p", top_p, "nucleus sampling mass");
  harmonize_cmd->callback([&] {
    auto emotion = emotion_from_name(emotion_name_opt);
    if (!emotion || *emotion == Emotion::None) {
      throw std::invalid_argument("--emotion must be positive or negative");
    }
    auto key_policy = key_policy_from_name(key_policy_opt);
    if (!key_policy) throw std::invalid_argument("--key-policy must be keep, rule, or model");
    NGramModel model = NGramModel::from_json(nlohmann::json::parse(read_text(model_path)));
    LeadSheet ls = read_clip(opt.input);
    if (model.vocab().tag() == Representation::RemiTrans) ls = transpose_to_c(ls);
    Sampler sampler(SamplerConfig{temperature, top_p, opt.seed});
    DegreePolicy policy = DegreePolicy::seeded(opt.seed);
    write_clip(opt.output, harmonize(ls, *emotion, *key_policy, model, sampler, policy));
  });

  // evaluate
  std::string reference_manifest;
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "harmonicity/key metrics for a clip or corpus, plus QD/PD vs a reference");
  evaluate_cmd->add_option("-i,--input", opt.input, "clip JSON file ('-' for stdin)");
  evaluate_cmd->add_option("--corpus", corpus_manifest, "corpus manifest (all splits evaluated)");
  evaluate_cmd->add_option("--reference", reference_manifest,
                           "ground-truth manifest for QD/PD (requires --corpus)");
  evaluate_cmd->add_option("-o,--output", opt.output, "report JSON ('-' for stdout)");
  evaluate_cmd->callback([&] {
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
    nlohmann::json out;
    if (!corpus_manifest.empty()) {
      CorpusManifest m = load_manifest(corpus_manifest);
      std::vector<LeadSheet> clips;
      for (Split s : {Split::Train, Split::Validation}) {
        for (LeadSheet& ls : load_corpus(m, s)) clips.push_back(std::move(ls));
      }
      std::vector<MetricReport> per_clip;
      for (const LeadSheet& ls : clips) per_clip.push_back(evaluate_clip(ls));
      out["aggregate"] = report_json(aggregate_reports(per_clip));
      for (const MetricReport& r : per_clip) out["per_clip"].push_back(report_json(r));
      if (!reference_manifest.empty()) {
        CorpusManifest rm = load_manifest(reference_manifest);
        std::vector<LeadSheet> reference;
        for (Split s : {Split::Train, Split::Validation}) {
          for (LeadSheet& ls : load_corpus(rm, s)) reference.push_back(std::move(ls));
        }
        out["qd"] = qd(clips, reference);
        out["pd"] = pd(clips, reference);
      }
    } else {
      if (!reference_manifest.empty()) {
        throw std::invalid_argument("--reference requires --corpus");
      }
      out = report_json(evaluate_clip(read_clip(opt.input)));
    }
    write_text(opt.output, canonical_json(out));
  });

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "corpus summary: clips, bars, events, keys");
  stats_cmd->add_option("--corpus", corpus_manifest, "corpus manifest")->required();
  stats_cmd->add_option("-o,--output", opt.output, "report JSON ('-' for stdout)");
  stats_cmd->callback([&] {
    CorpusManifest m = load_manifest(corpus_manifest);
    std::vector<LeadSheet> clips;
    for (Split s : {Split::Train, Split::Validation}) {
      for (LeadSheet& ls : load_corpus(m, s)) clips.push_back(std::move(ls));
    }
    write_text(opt.output, canonical_json(stats_to_json(compute_stats(clips))));
  });

  // export-midi
  auto* midi_cmd = app.add_subcommand("export-midi", "write a clip as a Standard MIDI File");
  midi_cmd->add_option("-i,--input", opt.input, "clip JSON file ('-' for stdin)");
  midi_cmd->add_option("-o,--output", opt.output, "MIDI output path")->required();
  midi_cmd->callback([&] {
    try {
      export_midi(read_clip(opt.input), opt.output);
    } catch (const IoError& e) {
      throw FileError(e.what());  // export failures are filesystem-level
    }
  });

  // run-experiment
  std::string config_path, demo_dir;
  auto* experiment_cmd =
      app.add_subcommand("run-experiment", "train, harmonize, and tabulate metrics per config");
  auto* config_opt =
      experiment_cmd->add_option("--config", config_path, "experiment config JSON file");
  experiment_cmd->add_option(
      "--demo", demo_dir,
      "write a bundled synthetic corpus plus default config into DIR and run that instead");
  experiment_cmd->callback([&] {
    if (demo_dir.empty() && config_path.empty()) {
      throw std::invalid_argument("run-experiment needs --config or --demo");
    }
    if (!demo_dir.empty()) {
      write_demo_corpus(demo_dir + "/corpus");
      nlohmann::json cfg;  // paths are relative to the config file's directory
      cfg["seed"] = opt.seed;
      cfg["repeats"] = 2;
      cfg["corpus_manifest"] = "corpus/manifest.json";
      cfg["output_dir"] = "out";
      cfg["variants"] = nlohmann::json::array(
          {{{"representation", "remi"}},
           {{"representation", "remi-trans"}},
           {{"representation", "functional-ablated"}, {"key_policy", "rule"}},
           {{"representation", "functional"}, {"key_policy", "rule"}},
           {{"representation", "functional"}, {"key_policy", "model"}}});
      config_path = demo_dir + "/config.json";
      write_text(config_path, canonical_json(cfg));
    }
    (void)config_opt;
    ExperimentConfig config = ExperimentConfig::from_file(config_path);
    ExperimentResult result = run_experiment(config);
    write_experiment_outputs(result, config.output_dir);
    std::cout << "wrote " << config.output_dir << "/harmonization_table.tsv, "
              << "controllability_table.tsv, report.json\n";
    if (!result.failures.empty()) {
      std::cerr << result.failures.size() << " clip(s) failed; see report.json\n";
    }
  });
  experiment_cmd->add_option("--seed", opt.seed, "master seed for --demo runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    const std::string what = e.what();
    std::cerr << "error: " << what << '\n';
    // library IoError spells filesystem failures with "cannot open"
    if (what.find("cannot open") != std::string::npos) return kExitIo;
    return kExitValidation;
  }
}
