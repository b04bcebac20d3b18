#ifndef LEADSHEET_MODEL_HPP
#define LEADSHEET_MODEL_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "leadsheet/events.hpp"

namespace leadsheet {

/// Closed token alphabet for one representation, with stable ids.
class Vocabulary {
 public:
  explicit Vocabulary(Representation tag) : tag_(tag), tokens_(vocabulary(tag)) {
    for (std::size_t i = 0; i < tokens_.size(); ++i) index_[tokens_[i]] = static_cast<int>(i);
  }

  Representation tag() const { return tag_; }
  int size() const { return static_cast<int>(tokens_.size()); }

  int id_of(const Event& e) const {
    auto it = index_.find(e);
    if (it == index_.end()) {
      throw std::invalid_argument("token not in vocabulary: " + event_to_string(e));
    }
    return it->second;
  }

  const Event& event_of(int id) const { return tokens_.at(id); }

  std::vector<int> encode_ids(const TokenSequence& ts) const {
    if (ts.tag != tag_) throw std::invalid_argument("representation tag mismatch");
    std::vector<int> ids;
    ids.reserve(ts.tokens.size());
    for (const Event& e : ts.tokens) ids.push_back(id_of(e));
    return ids;
  }

  /// FNV-1a over the spelled-out token list; embedded in model files.
  std::uint64_t hash() const {
    std::uint64_t h = 14695981039346656037ull;
    for (const Event& e : tokens_) {
      for (char c : event_to_string(e)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
      }
      h ^= '\n';
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  Representation tag_;
  std::vector<Event> tokens_;
  std::map<Event, int> index_;
};

/// Trainable conditional next-token distribution over a fixed vocabulary.
class SequenceModel {
 public:
  virtual ~SequenceModel() = default;
  virtual const Vocabulary& vocab() const = 0;
  /// Sums to 1 over the vocabulary for any prefix.
  virtual std::vector<double> next_token_distribution(const std::vector<int>& prefix) const = 0;
};

/// Interpolated n-gram over the interleaved token stream. Each order backs
/// off to the next shorter context with additive weight alpha; the unigram
/// floor is Lidstone-smoothed so every token keeps nonzero mass.
class NGramModel : public SequenceModel {
 public:
  explicit NGramModel(Representation tag, int order = 3, double alpha = 1.0, double beta = 0.1)
      : vocab_(tag), order_(order), alpha_(alpha), beta_(beta), counts_(order) {
    if (order < 1) throw std::invalid_argument("order must be >= 1");
  }

  const Vocabulary& vocab() const override { return vocab_; }
  int order() const { return order_; }

  void add_sequence(const std::vector<int>& ids, double weight) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (int o = 0; o < order_; ++o) {
        if (static_cast<std::size_t>(o) > i) break;
        std::vector<int> ctx(ids.begin() + (i - o), ids.begin() + i);
        counts_[o][ctx][ids[i]] += weight;
      }
    }
  }

  std::vector<double> next_token_distribution(const std::vector<int>& prefix) const override {
    const int vocab_size = vocab_.size();
    // unigram floor
    std::vector<double> probs(vocab_size, 0.0);
    double total0 = 0.0;
    const auto* uni = find_counts(0, {});
    if (uni) {
      for (const auto& [id, c] : *uni) total0 += c;
    }
    for (int t = 0; t < vocab_size; ++t) {
      double c = 0.0;
      if (uni) {
        auto it = uni->find(t);
        if (it != uni->end()) c = it->second;
      }
      probs[t] = (c + beta_) / (total0 + beta_ * vocab_size);
    }
    // interpolate up through longer contexts
    for (int o = 1; o < order_; ++o) {
      if (static_cast<std::size_t>(o) > prefix.size()) break;
      std::vector<int> ctx(prefix.end() - o, prefix.end());
      const auto* table = find_counts(o, ctx);
      double total = 0.0;
      if (table) {
        for (const auto& [id, c] : *table) total += c;
      }
      if (total == 0.0) continue;
      for (int t = 0; t < vocab_size; ++t) {
        double c = 0.0;
        auto it = table->find(t);
        if (it != table->end()) c = it->second;
        probs[t] = (c + alpha_ * probs[t]) / (total + alpha_);
      }
    }
    return probs;
  }

  // --- serialization: versioned JSON with embedded vocabulary hash ---------

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["format"] = "leadsheet-ngram";
    j["version"] = 1;
    j["representation"] = representation_name(vocab_.tag());
    j["vocab_hash"] = vocab_.hash();
    j["order"] = order_;
    j["alpha"] = alpha_;
    j["beta"] = beta_;
    nlohmann::json orders = nlohmann::json::array();
    for (int o = 0; o < order_; ++o) {
      nlohmann::json table = nlohmann::json::object();
      for (const auto& [ctx, dist] : counts_[o]) {
        std::string key;
        for (std::size_t i = 0; i < ctx.size(); ++i) {
          if (i) key += ' ';
          key += std::to_string(ctx[i]);
        }
        nlohmann::json row = nlohmann::json::object();
        for (const auto& [id, c] : dist) row[std::to_string(id)] = c;
        table[key] = std::move(row);
      }
      orders.push_back(std::move(table));
    }
    j["counts"] = std::move(orders);
    return j;
  }

  static NGramModel from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "leadsheet-ngram") {
      throw std::invalid_argument("not a leadsheet-ngram model file");
    }
    if (j.value("version", 0) != 1) throw std::invalid_argument("unsupported model version");
    auto tag = representation_from_name(j.at("representation").get<std::string>());
    if (!tag) throw std::invalid_argument("unknown representation in model file");
    NGramModel model(*tag, j.at("order").get<int>(), j.at("alpha").get<double>(),
                     j.at("beta").get<double>());
    if (j.at("vocab_hash").get<std::uint64_t>() != model.vocab_.hash()) {
      throw std::invalid_argument("model vocabulary hash mismatch");
    }
    const auto& orders = j.at("counts");
    for (int o = 0; o < model.order_; ++o) {
      for (const auto& [key, row] : orders.at(o).items()) {
        std::vector<int> ctx;
        if (!key.empty()) {
          std::size_t pos = 0;
          while (pos < key.size()) {
            std::size_t sp = key.find(' ', pos);
            if (sp == std::string::npos) sp = key.size();
            ctx.push_back(std::stoi(key.substr(pos, sp - pos)));
            pos = sp + 1;
          }
        }
        for (const auto& [id, c] : row.items()) {
          model.counts_[o][ctx][std::stoi(id)] = c.get<double>();
        }
      }
    }
    return model;
  }

 private:
  using CountTable = std::map<int, double>;

  const CountTable* find_counts(int order, const std::vector<int>& ctx) const {
    auto it = counts_[order].find(ctx);
    return it == counts_[order].end() ? nullptr : &it->second;
  }

  Vocabulary vocab_;
  int order_;
  double alpha_;
  double beta_;
  std::vector<std::map<std::vector<int>, CountTable>> counts_;
};

/// Accumulates both corpora with mixture weight lambda toward labeled data.
/// Unlabeled sequences must carry Emotion_None.
inline void train(NGramModel& model, const std::vector<TokenSequence>& unlabeled,
                  const std::vector<TokenSequence>& labeled, double lambda = 0.7) {
  if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must be in [0,1]");
  const double w_unlabeled = 1.0 - lambda;
  if ((labeled.empty() || lambda == 0.0) && (unlabeled.empty() || w_unlabeled == 0.0)) {
    throw std::invalid_argument("no effective training data");
  }
  for (const TokenSequence& ts : unlabeled) {
    if (ts.tokens.empty() || ts.tokens.front() != Event::emotion(Emotion::None)) {
      throw std::invalid_argument("unlabeled sequence must start with Emotion_None");
    }
    if (w_unlabeled > 0.0) model.add_sequence(model.vocab().encode_ids(ts), w_unlabeled);
  }
  for (const TokenSequence& ts : labeled) {
    if (lambda > 0.0) model.add_sequence(model.vocab().encode_ids(ts), lambda);
  }
}

}  // namespace leadsheet

#endif  // LEADSHEET_MODEL_HPP
