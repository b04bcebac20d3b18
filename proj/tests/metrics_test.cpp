#include "leadsheet/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "leadsheet/codec.hpp"
#include "metric_oracle.hpp"
#include "test_util.hpp"

namespace leadsheet {
namespace {


LeadSheet clip_with(const Key& key, std::vector<Note> melody,
                    std::vector<std::optional<ChordLabel>> chords) {
  LeadSheet ls;
  ls.emotion = Emotion::Positive;
  ls.key = key;
  ls.num_bars = static_cast<int>(chords.size()) / 4;
  ls.melody = std::move(melody);
  for (auto& c : chords) ls.chords.push_back(BeatChord{c});
  return ls;
}

TEST(Ctnctr, AllChordTonesIsOne) {
  auto ls = clip_with(Key{0, Mode::Major}, {{0, 60, 4}, {4, 64, 4}, {8, 67, 4}},
                      {ChordLabel{0, ChordQuality::Major}, ChordLabel{0, ChordQuality::Major},
                       ChordLabel{0, ChordQuality::Major}, ChordLabel{0, ChordQuality::Major}});
  EXPECT_DOUBLE_EQ(ctnctr(ls).value(), 1.0);
}

TEST(Ctnctr, PassingToneCounted) {
  // C, D, E over Cmaj: D is a non-chord tone resolved by E within 2 semitones.
  auto ls = clip_with(Key{0, Mode::Major}, {{0, 60, 2}, {2, 62, 2}, {4, 64, 4}},
                      {ChordLabel{0, ChordQuality::Major}, ChordLabel{0, ChordQuality::Major},
                       ChordLabel{0, ChordQuality::Major}, ChordLabel{0, ChordQuality::Major}});
  EXPECT_DOUBLE_EQ(ctnctr(ls).value(), 1.0);  // (2 + 1) / (2 + 1)
}

TEST(Ctnctr, NoEligibleNotesIsNoValue) {
  auto ls = clip_with(Key{0, Mode::Major}, {{0, 60, 4}},
                      {std::nullopt, std::nullopt, std::nullopt, std::nullopt});
  EXPECT_FALSE(ctnctr(ls).has_value());
}

TEST(Pcs, RootOverMajorTriad) {
  auto ls = clip_with(Key{0, Mode::Major}, {{0, 60, 4}},
                      {ChordLabel{0, ChordQuality::Major}, std::nullopt, std::nullopt,
                       std::nullopt});
  // intervals vs {C,E,G}: 0 -> +1, 8 -> +1, 5 -> 0
  EXPECT_NEAR(pcs(ls).value(), 2.0 / 3.0, 1e-12);
}

TEST(Pcs, AllDissonantIsMinusOne) {
  // F# against Cmaj: intervals 6, 2, 11 are all dissonant.
  auto ls = clip_with(Key{0, Mode::Major}, {{0, 66, 4}},
                      {ChordLabel{0, ChordQuality::Major}, std::nullopt, std::nullopt,
                       std::nullopt});
  EXPECT_DOUBLE_EQ(pcs(ls).value(), -1.0);
}

TEST(Mctd, IdenticalVectorsAtZero) {
  std::array<double, 12> v{};
  v[3] = 1.0;
  EXPECT_DOUBLE_EQ(tonal_distance(v, v), 0.0);
}

TEST(Mctd, Symmetric) {
  std::array<double, 12> a{}, b{};
  a[0] = 1.0;
  b[4] = 1.0;
  b[7] = 1.0;
  EXPECT_DOUBLE_EQ(tonal_distance(a, b), tonal_distance(b, a));
  EXPECT_GT(tonal_distance(a, b), 0.0);
}

TEST(RootRatio, DiatonicIsOne) {
  auto ls = clip_with(Key{0, Mode::Major}, {},
                      {ChordLabel{0, ChordQuality::Major}, ChordLabel{5, ChordQuality::Major},
                       ChordLabel{7, ChordQuality::Major}, ChordLabel{9, ChordQuality::Minor}});
  EXPECT_DOUBLE_EQ(root_ratio(ls).value(), 1.0);
  EXPECT_DOUBLE_EQ(note_ratio(ls).value(), 1.0);
}

TEST(RootRatio, OneAccidentalRoot) {
  auto ls = clip_with(Key{0, Mode::Major}, {},
                      {ChordLabel{0, ChordQuality::Major}, ChordLabel{7, ChordQuality::Major},
                       ChordLabel{6, ChordQuality::Diminish}, ChordLabel{5, ChordQuality::Major}});
  EXPECT_DOUBLE_EQ(root_ratio(ls).value(), 3.0 / 4.0);
}

TEST(NoteRatio, OneAccidentalTone) {
  // C, F, G major diatonic plus D major whose F# is out of scale: 11/12.
  auto ls = clip_with(Key{0, Mode::Major}, {},
                      {ChordLabel{0, ChordQuality::Major}, ChordLabel{5, ChordQuality::Major},
                       ChordLabel{7, ChordQuality::Major}, ChordLabel{2, ChordQuality::Major}});
  EXPECT_DOUBLE_EQ(note_ratio(ls).value(), 11.0 / 12.0);
}

TEST(QualityDistribution, PointMassOnMajor) {
  auto ls = clip_with(Key{0, Mode::Major}, {},
                      {ChordLabel{0, ChordQuality::Major}, ChordLabel{5, ChordQuality::Major},
                       ChordLabel{7, ChordQuality::Major}, ChordLabel{0, ChordQuality::Major}});
  auto dist = quality_distribution({ls});
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    if (dist.support[i] == "major") {
      EXPECT_GT(dist.probs[i], 0.999);
    } else {
      EXPECT_LT(dist.probs[i], 1e-4);
    }
  }
}

TEST(ProgressionDistribution, DmajToFminIsThree) {
  auto ls = clip_with(Key{0, Mode::Major}, {},
                      {ChordLabel{2, ChordQuality::Major}, ChordLabel{5, ChordQuality::Minor},
                       std::nullopt, std::nullopt});
  auto dist = progression_distribution({ls});
  EXPECT_GT(dist.probs[3], 0.999);
}

TEST(ProgressionDistribution, StaticProgressionIsPointMassAtZero) {
  auto ls = clip_with(Key{0, Mode::Major}, {},
                      std::vector<std::optional<ChordLabel>>(
                          4, ChordLabel{4, ChordQuality::Minor}));
  auto dist = progression_distribution({ls});
  EXPECT_GT(dist.probs[0], 0.999);
}

TEST(ProgressionDistribution, FourChordCadence) {
  // I-IV-V-I in C: intervals 5, 2, 5.
  auto ls = clip_with(Key{0, Mode::Major}, {},
                      {ChordLabel{0, ChordQuality::Major}, ChordLabel{5, ChordQuality::Major},
                       ChordLabel{7, ChordQuality::Major}, ChordLabel{0, ChordQuality::Major}});
  auto dist = progression_distribution({ls});
  EXPECT_NEAR(dist.probs[5], 2.0 / 3.0, 1e-4);
  EXPECT_NEAR(dist.probs[2], 1.0 / 3.0, 1e-4);
}

TEST(KlDivergence, SelfIsZeroAndNonNegative) {
  Distribution p{{"a", "b"}, {0.75, 0.25}};
  Distribution q{{"a", "b"}, {0.5, 0.5}};
  EXPECT_DOUBLE_EQ(kl_divergence(p, p), 0.0);
  EXPECT_GE(kl_divergence(p, q), 0.0);
  EXPECT_GE(kl_divergence(q, p), 0.0);
}

TEST(KlDivergence, HandComputedTwoPoint) {
  Distribution p{{"a", "b"}, {0.75, 0.25}};
  Distribution q{{"a", "b"}, {0.5, 0.5}};
  const double expected = 0.75 * std::log(1.5) + 0.25 * std::log(0.5);
  EXPECT_NEAR(kl_divergence(p, q), expected, 1e-15);
}

TEST(KlDivergence, SupportMismatchThrows) {
  Distribution p{{"a", "b"}, {0.5, 0.5}};
  Distribution q{{"a", "c"}, {0.5, 0.5}};
  EXPECT_THROW(kl_divergence(p, q), std::invalid_argument);
}

TEST(QdPd, IdenticalCorporaNearZero) {
  std::mt19937_64 rng(3);
  std::vector<LeadSheet> corpus;
  for (int i = 0; i < 8; ++i) {
    auto ls = testutil::random_lead_sheet(rng);
    ls.emotion = i % 2 ? Emotion::Positive : Emotion::Negative;
    corpus.push_back(ls);
  }
  EXPECT_NEAR(qd(corpus, corpus), 0.0, 1e-12);
  EXPECT_NEAR(pd(corpus, corpus), 0.0, 1e-12);
}

TEST(QdPd, MissingEmotionThrows) {
  std::mt19937_64 rng(4);
  auto ls = testutil::random_lead_sheet(rng);
  ls.emotion = Emotion::Positive;
  EXPECT_THROW(qd({ls}, {ls}), std::invalid_argument);
}

TEST(KeyHistogram, CountsPerEmotionAndKey) {
  LeadSheet a = clip_with(Key{0, Mode::Major}, {}, {std::nullopt, std::nullopt, std::nullopt, std::nullopt});
  a.emotion = Emotion::Positive;
  LeadSheet b = a;
  b.key = Key{9, Mode::Minor};
  b.emotion = Emotion::Negative;
  auto hist = key_histogram({a, b, b});
  EXPECT_EQ(hist[Emotion::Positive][0], 1);
  EXPECT_EQ(hist[Emotion::Negative][9 * 2 + 1], 2);
  int total = 0;
  for (auto& [e, arr] : hist) {
    for (int c : arr) total += c;
  }
  EXPECT_EQ(total, 3);
}

TEST(OracleEquivalence, RandomClips) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    LeadSheet ls = testutil::random_lead_sheet(rng, 2);
    auto check = [](std::optional<double> got, std::optional<double> want) {
      ASSERT_EQ(got.has_value(), want.has_value());
      if (got) {
        double tol = 1e-9 * std::max(1.0, std::abs(*want));
        EXPECT_NEAR(*got, *want, tol);
      }
    };
    check(ctnctr(ls), oracle::ctnctr(ls));
    check(pcs(ls), oracle::pcs(ls));
    check(mctd(ls), oracle::mctd(ls));
    check(root_ratio(ls), oracle::rr(ls));
    check(note_ratio(ls), oracle::nr(ls));
  }
}

TEST(Invariance, AllMetricsStableUnderTransposeToC) {
  std::mt19937_64 rng(100);
  for (int i = 0; i < 200; ++i) {
    LeadSheet ls = testutil::random_lead_sheet(rng, 2);
    // keep pitches clear of the fold boundary so transposition is a pure shift
    bool skip = false;
    for (const Note& n : ls.melody) {
      if (n.pitch < kMinPitch + 6 || n.pitch > kMaxPitch - 6) skip = true;
    }
    if (skip) continue;
    LeadSheet t = transpose_to_c(ls);
    auto eq = [](std::optional<double> a, std::optional<double> b) {
      ASSERT_EQ(a.has_value(), b.has_value());
      if (a) EXPECT_NEAR(*a, *b, 1e-9);
    };
    eq(ctnctr(ls), ctnctr(t));
    eq(pcs(ls), pcs(t));
    eq(mctd(ls), mctd(t));
    eq(root_ratio(ls), root_ratio(t));
    eq(note_ratio(ls), note_ratio(t));
  }
}

TEST(Invariance, ProgressionDistributionTranspositionInvariant) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 50; ++i) {
    LeadSheet ls = testutil::random_lead_sheet(rng, 2);
    try {
      auto base = progression_distribution({ls});
      auto shifted = progression_distribution({transpose_to_c(ls)});
      for (int b = 0; b < 12; ++b) EXPECT_NEAR(base.probs[b], shifted.probs[b], 1e-12);
    } catch (const std::invalid_argument&) {
      // no bigrams in this random clip
    }
  }
}

}  // namespace
}  // namespace leadsheet
