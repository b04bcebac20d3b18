#include "leadsheet/model.hpp"

#include <gtest/gtest.h>

#include <random>

#include "leadsheet/codec.hpp"
#include "leadsheet/sampler.hpp"
#include "test_util.hpp"

namespace leadsheet {
namespace {

TokenSequence encode_clip(const LeadSheet& ls, Representation tag = Representation::Functional) {
  auto policy = DegreePolicy::always_lower();
  return encode(ls, tag, policy);
}

std::vector<TokenSequence> random_corpus(int n, std::uint64_t seed, Emotion force_emotion,
                                         Representation tag = Representation::Functional) {
  std::mt19937_64 rng(seed);
  std::vector<TokenSequence> out;
  for (int i = 0; i < n; ++i) {
    LeadSheet ls = testutil::random_lead_sheet(rng, 2);
    ls.emotion = force_emotion;
    out.push_back(encode_clip(ls, tag));
  }
  return out;
}

TEST(NGram, DistributionSumsToOne) {
  NGramModel model(Representation::Functional, 3);
  train(model, random_corpus(5, 1, Emotion::None), random_corpus(5, 2, Emotion::Positive), 0.7);
  std::mt19937_64 rng(3);
  auto corpus = random_corpus(3, 4, Emotion::Negative);
  for (const auto& ts : corpus) {
    auto ids = model.vocab().encode_ids(ts);
    for (std::size_t cut : {std::size_t(0), ids.size() / 2, ids.size() - 1}) {
      std::vector<int> prefix(ids.begin(), ids.begin() + cut);
      auto dist = model.next_token_distribution(prefix);
      double sum = 0.0;
      for (double p : dist) sum += p;
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
  (void)rng;
}

TEST(NGram, LambdaOneIgnoresUnlabeled) {
  auto unlabeled = random_corpus(6, 10, Emotion::None);
  auto labeled = random_corpus(6, 11, Emotion::Positive);

  NGramModel with_unlabeled(Representation::Functional, 3);
  train(with_unlabeled, unlabeled, labeled, 1.0);
  NGramModel labeled_only(Representation::Functional, 3);
  train(labeled_only, {}, labeled, 1.0);

  auto ids = labeled_only.vocab().encode_ids(labeled[0]);
  for (std::size_t cut : {std::size_t(1), std::size_t(4), ids.size() - 1}) {
    std::vector<int> prefix(ids.begin(), ids.begin() + cut);
    auto a = with_unlabeled.next_token_distribution(prefix);
    auto b = labeled_only.next_token_distribution(prefix);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  }
}

TEST(NGram, GreedyReproducesSingleTrainingSequence) {
  // Crafted so every length-3 context occurs once: greedy continuation of
  // the training prefix must replay the sequence token for token.
  LeadSheet ls;
  ls.emotion = Emotion::Positive;
  ls.key = Key{0, Mode::Major};
  ls.num_bars = 1;
  ls.melody = {Note{0, 60, 2}, Note{4, 64, 4}};
  ls.chords = {BeatChord{ChordLabel{0, ChordQuality::Major}},
               BeatChord{ChordLabel{5, ChordQuality::Major}},
               BeatChord{ChordLabel{7, ChordQuality::Minor7}}, BeatChord{}};
  std::vector<TokenSequence> labeled = {encode_clip(ls)};
  NGramModel model(Representation::Functional, 4);
  train(model, {}, labeled, 1.0);
  auto ids = model.vocab().encode_ids(labeled[0]);
  for (std::size_t i = 1; i < ids.size(); ++i) {
    std::vector<int> prefix(ids.begin(), ids.begin() + i);
    auto dist = model.next_token_distribution(prefix);
    int argmax = 0;
    for (std::size_t t = 1; t < dist.size(); ++t) {
      if (dist[t] > dist[argmax]) argmax = static_cast<int>(t);
    }
    EXPECT_EQ(argmax, ids[i]) << "position " << i;
  }
}

// Hand-tallied counts on two tiny id sequences, checked against the
// interpolation formula directly.
TEST(NGram, HandTalliedToyCounts) {
  NGramModel model(Representation::Functional, 2, /*alpha=*/1.0, /*beta=*/0.1);
  model.add_sequence({0, 1, 0, 1}, 1.0);
  model.add_sequence({0, 2}, 1.0);
  const int vocab_size = model.vocab().size();

  // unigram: c(0)=3, c(1)=2, c(2)=1, N=6
  auto p0 = model.next_token_distribution({});
  EXPECT_NEAR(p0[0], (3 + 0.1) / (6 + 0.1 * vocab_size), 1e-12);
  EXPECT_NEAR(p0[1], (2 + 0.1) / (6 + 0.1 * vocab_size), 1e-12);
  EXPECT_NEAR(p0[2], (1 + 0.1) / (6 + 0.1 * vocab_size), 1e-12);

  // after context [0]: c(0->1)=2, c(0->2)=1, total 3, alpha=1
  auto p1 = model.next_token_distribution({0});
  EXPECT_NEAR(p1[1], (2 + p0[1]) / (3 + 1.0), 1e-12);
  EXPECT_NEAR(p1[2], (1 + p0[2]) / (3 + 1.0), 1e-12);
  EXPECT_NEAR(p1[0], (0 + p0[0]) / (3 + 1.0), 1e-12);
}

TEST(NGram, MixtureWeightsApplied) {
  // One unlabeled and one labeled sequence over disjoint follow-ups of a
  // shared context; the count ratio must equal lambda : (1 - lambda).
  NGramModel model(Representation::Functional, 2, 1.0, 0.0);
  auto unlabeled = random_corpus(1, 20, Emotion::None);
  auto labeled = unlabeled;
  labeled[0].tokens[0] = Event::emotion(Emotion::Positive);
  const double lambda = 0.7;
  train(model, unlabeled, labeled, lambda);
  auto dist = model.next_token_distribution({});
  int none_id = model.vocab().id_of(Event::emotion(Emotion::None));
  int pos_id = model.vocab().id_of(Event::emotion(Emotion::Positive));
  EXPECT_NEAR(dist[pos_id] / dist[none_id], lambda / (1.0 - lambda), 1e-9);
}

TEST(NGram, TrainErrors) {
  NGramModel model(Representation::Functional, 3);
  EXPECT_THROW(train(model, {}, {}, 0.7), std::invalid_argument);
  auto remi = random_corpus(1, 30, Emotion::Positive, Representation::Remi);
  EXPECT_THROW(train(model, {}, remi, 1.0), std::invalid_argument);
  auto mislabeled = random_corpus(1, 31, Emotion::Positive);
  EXPECT_THROW(train(model, mislabeled, {}, 0.0), std::invalid_argument);
}

TEST(NGram, SerializationRoundTrip) {
  NGramModel model(Representation::Functional, 3);
  train(model, random_corpus(4, 40, Emotion::None), random_corpus(4, 41, Emotion::Negative), 0.5);
  NGramModel restored = NGramModel::from_json(model.to_json());
  auto ids = model.vocab().encode_ids(random_corpus(1, 42, Emotion::Positive)[0]);
  for (std::size_t cut : {std::size_t(0), std::size_t(3), ids.size() - 1}) {
    std::vector<int> prefix(ids.begin(), ids.begin() + cut);
    auto a = model.next_token_distribution(prefix);
    auto b = restored.next_token_distribution(prefix);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_DOUBLE_EQ(a[i], b[i]);
  }
}

TEST(NGram, SerializationRejectsTamperedVocabHash) {
  NGramModel model(Representation::Functional, 2);
  train(model, {}, random_corpus(1, 43, Emotion::Positive), 1.0);
  auto j = model.to_json();
  j["vocab_hash"] = j["vocab_hash"].get<std::uint64_t>() ^ 1;
  EXPECT_THROW(NGramModel::from_json(j), std::invalid_argument);
}

// --- nucleus sampler -------------------------------------------------------

TEST(NucleusSampler, PointMassAlwaysWins) {
  std::vector<double> dist = {0.0, 1.0, 0.0, 0.0};
  std::vector<char> mask = {1, 1, 1, 1};
  for (double tau : {0.5, 1.0, 1.1, 2.0}) {
    for (double p : {0.1, 0.5, 0.99, 1.0}) {
      Sampler s(SamplerConfig{tau, p, 7});
      for (int i = 0; i < 20; ++i) EXPECT_EQ(s.sample(dist, mask), 1);
    }
  }
}

TEST(NucleusSampler, HalfMassNucleusSet) {
  // tau=1, p=0.5 on (0.4, 0.3, 0.2, 0.1): the top two tokens cover 0.7 >= 0.5.
  std::vector<double> dist = {0.4, 0.3, 0.2, 0.1};
  Nucleus n = build_nucleus(dist, SamplerConfig{1.0, 0.5, 0}, {1, 1, 1, 1});
  EXPECT_EQ(n.indices, (std::vector<int>{0, 1}));
  EXPECT_NEAR(n.probs[0], 0.4 / 0.7, 1e-12);
  EXPECT_NEAR(n.probs[1], 0.3 / 0.7, 1e-12);
}

TEST(NucleusSampler, MaskZeroesIllegalTokens) {
  std::vector<double> dist = {0.9, 0.05, 0.05};
  std::vector<char> mask = {0, 1, 1};
  Sampler s(SamplerConfig{1.0, 1.0, 1});
  for (int i = 0; i < 50; ++i) EXPECT_NE(s.sample(dist, mask), 0);
}

TEST(NucleusSampler, ZeroMassFallsBackToUniformOverLegal) {
  std::vector<double> dist = {0.5, 0.5, 0.0, 0.0};
  std::vector<char> mask = {0, 0, 1, 1};
  Sampler s(SamplerConfig{1.0, 1.0, 2});
  int seen[4] = {0, 0, 0, 0};
  for (int i = 0; i < 200; ++i) ++seen[s.sample(dist, mask)];
  EXPECT_EQ(seen[0] + seen[1], 0);
  EXPECT_GT(seen[2], 0);
  EXPECT_GT(seen[3], 0);
  EXPECT_EQ(s.fallback_count(), 200);
}

TEST(NucleusSampler, EmptyLegalSetThrows) {
  std::vector<double> dist = {1.0};
  std::vector<char> mask = {0};
  Sampler s(SamplerConfig{});
  EXPECT_THROW(s.sample(dist, mask), std::invalid_argument);
}

TEST(NucleusSampler, SeededDeterminism) {
  std::vector<double> dist = {0.3, 0.25, 0.2, 0.15, 0.1};
  std::vector<char> mask = {1, 1, 1, 1, 1};
  std::vector<int> a, b;
  for (int run = 0; run < 2; ++run) {
    Sampler s(SamplerConfig{1.1, 0.99, 1234});
    auto& out = run ? b : a;
    for (int i = 0; i < 100; ++i) out.push_back(s.sample(dist, mask));
  }
  EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace leadsheet
