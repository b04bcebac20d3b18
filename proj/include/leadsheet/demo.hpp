#ifndef LEADSHEET_DEMO_HPP
#define LEADSHEET_DEMO_HPP

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "leadsheet/io.hpp"
#include "leadsheet/score.hpp"
#include "leadsheet/theory.hpp"

namespace leadsheet {

/// Deterministic 20-clip synthetic corpus: diatonic melodies over cadential
/// progressions, positive clips in major keys and negative ones in minor.
/// Stands in for real lead sheet data in demos and the experiment harness.
inline std::vector<LeadSheet> make_demo_corpus() {
  std::mt19937_64 rng(20240707);
  std::vector<LeadSheet> corpus;
  static constexpr RomanDegree progressions[4][4] = {
      {RomanDegree::I, RomanDegree::IV, RomanDegree::V, RomanDegree::I},
      {RomanDegree::I, RomanDegree::VI, RomanDegree::IV, RomanDegree::V},
      {RomanDegree::I, RomanDegree::V, RomanDegree::VI, RomanDegree::IV},
      {RomanDegree::II, RomanDegree::V, RomanDegree::I, RomanDegree::I}};
  static constexpr int melody_degrees[7] = {0, 1, 2, 3, 4, 5, 6};  // scale positions

  for (int i = 0; i < 20; ++i) {
    LeadSheet ls;
    ls.emotion = i % 2 ? Emotion::Negative : Emotion::Positive;
    ls.key = Key{(i * 5) % 12, ls.emotion == Emotion::Positive ? Mode::Major : Mode::Minor};
    ls.num_bars = 4;
    auto scale = scale_pcs(ls.key);
    std::uniform_int_distribution<int> degree_pick(0, 6);
    std::uniform_int_distribution<int> rhythm_pick(0, 2);
    for (int bar = 0; bar < ls.num_bars; ++bar) {
      int onset = bar * kSubBeatsPerBar;
      const int step = rhythm_pick(rng) == 0 ? 2 : 4;
      while (onset < (bar + 1) * kSubBeatsPerBar) {
        const int deg = melody_degrees[degree_pick(rng)];
        const int pitch = 60 + scale[deg] - ls.key.tonic + (deg >= 4 ? 0 : 12 * (rng() % 2));
        ls.melody.push_back(Note{onset, pitch, step});
        onset += step * (1 + static_cast<int>(rng() % 2));
      }
    }
    const auto& prog = progressions[i % 4];
    for (int bar = 0; bar < ls.num_bars; ++bar) {
      for (int beat = 0; beat < kBeatsPerBar; ++beat) {
        const RomanDegree deg = prog[(bar + beat / 2) % 4];
        ChordQuality quality;
        if (ls.key.mode == Mode::Major) {
          quality = (deg == RomanDegree::II || deg == RomanDegree::VI) ? ChordQuality::Minor
                    : deg == RomanDegree::V && beat == 3              ? ChordQuality::Dominant7
                                                                       : ChordQuality::Major;
        } else {
          quality = (deg == RomanDegree::I || deg == RomanDegree::IV) ? ChordQuality::Minor
                    : deg == RomanDegree::V                            ? ChordQuality::Minor7
                                                                       : ChordQuality::Major;
        }
        ls.chords.push_back(BeatChord{ChordLabel{degree_to_pc(deg, ls.key), quality}});
      }
    }
    check_lead_sheet(ls);
    corpus.push_back(std::move(ls));
  }
  return corpus;
}

/// Writes the demo corpus as clip JSON files plus a manifest: 16 train
/// clips, 4 validation clips, both emotions in each split.
inline std::string write_demo_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto corpus = make_demo_corpus();
  nlohmann::json manifest;
  manifest["files"] = nlohmann::json::array();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "clip_%02zu.json", i);
    save_lead_sheet(dir + "/" + name, corpus[i]);
    manifest["files"].push_back(
        {{"path", name}, {"split", i < 16 ? "train" : "validation"}});
  }
  const std::string manifest_path = dir + "/manifest.json";
  std::ofstream out(manifest_path);
  out << canonical_json(manifest);
  return manifest_path;
}

}  // namespace leadsheet

#endif  // LEADSHEET_DEMO_HPP
