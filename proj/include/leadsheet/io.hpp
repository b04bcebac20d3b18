#ifndef LEADSHEET_IO_HPP
#define LEADSHEET_IO_HPP

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "leadsheet/events.hpp"
#include "leadsheet/score.hpp"

namespace leadsheet {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- lead sheet JSON files -------------------------------------------------

inline nlohmann::json lead_sheet_to_json(const LeadSheet& ls) {
  nlohmann::json j;
  j["emotion"] = emotion_name(ls.emotion);
  j["key"] = {{"tonic", ls.key.tonic}, {"mode", ls.key.mode == Mode::Major ? "major" : "minor"}};
  j["num_bars"] = ls.num_bars;
  j["melody"] = nlohmann::json::array();
  for (const Note& n : ls.melody) {
    j["melody"].push_back({{"onset", n.onset}, {"pitch", n.pitch}, {"duration", n.duration}});
  }
  j["chords"] = nlohmann::json::array();
  for (const BeatChord& bc : ls.chords) {
    if (bc.chord) {
      j["chords"].push_back({{"root", bc.chord->root}, {"quality", quality_name(bc.chord->quality)}});
    } else {
      j["chords"].push_back(nullptr);
    }
  }
  return j;
}

inline LeadSheet lead_sheet_from_json(const nlohmann::json& j) {
  LeadSheet ls;
  auto emotion = emotion_from_name(j.at("emotion").get<std::string>());
  if (!emotion) throw IoError("field 'emotion': unknown value");
  ls.emotion = *emotion;
  const auto& key = j.at("key");
  ls.key.tonic = key.at("tonic").get<int>();
  if (ls.key.tonic < 0 || ls.key.tonic > 11) throw IoError("field 'key.tonic': out of [0,11]");
  const std::string mode = key.at("mode").get<std::string>();
  if (mode == "major") ls.key.mode = Mode::Major;
  else if (mode == "minor") ls.key.mode = Mode::Minor;
  else throw IoError("field 'key.mode': must be 'major' or 'minor'");
  ls.num_bars = j.at("num_bars").get<int>();
  for (const auto& n : j.at("melody")) {
    ls.melody.push_back(Note{n.at("onset").get<int>(), n.at("pitch").get<int>(),
                             n.at("duration").get<int>()});
  }
  for (const auto& c : j.at("chords")) {
    if (c.is_null()) {
      ls.chords.push_back(BeatChord{});
    } else {
      auto quality = quality_from_name(c.at("quality").get<std::string>());
      if (!quality) throw IoError("field 'chords[].quality': unknown value");
      const int root = c.at("root").get<int>();
      if (root < 0 || root > 11) throw IoError("field 'chords[].root': out of [0,11]");
      ls.chords.push_back(BeatChord{ChordLabel{root, *quality}});
    }
  }
  try {
    check_lead_sheet(ls);
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }
  return ls;
}

/// Canonical serialization: two-space indent, sorted object keys, trailing
/// newline. Byte-stable across save/load cycles.
inline std::string canonical_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline LeadSheet load_lead_sheet(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  nlohmann::json j;
  try {
    in >> j;
    return lead_sheet_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

inline void save_lead_sheet(const std::string& path, const LeadSheet& ls) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << canonical_json(lead_sheet_to_json(ls));
}

// --- corpus manifests ------------------------------------------------------

enum class Split : std::uint8_t { Train, Validation };

struct CorpusManifest {
  std::vector<std::pair<std::string, Split>> files;  // path, split
  std::string base_dir;  // resolved relative to the manifest location
};

inline CorpusManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  CorpusManifest m;
  auto slash = path.find_last_of('/');
  m.base_dir = slash == std::string::npos ? "" : path.substr(0, slash + 1);
  std::map<std::string, Split> seen;
  for (const auto& entry : j.at("files")) {
    const std::string file = entry.at("path").get<std::string>();
    const std::string split = entry.at("split").get<std::string>();
    Split s;
    if (split == "train") s = Split::Train;
    else if (split == "validation") s = Split::Validation;
    else throw IoError(path + ": field 'split': must be 'train' or 'validation'");
    auto it = seen.find(file);
    if (it != seen.end() && it->second != s) {
      throw IoError(path + ": " + file + " appears in both splits");
    }
    seen[file] = s;
    m.files.emplace_back(file, s);
  }
  return m;
}

/// Loads every clip of one split, in manifest order. Per-file failures are
/// reported with the offending path.
inline std::vector<LeadSheet> load_corpus(const CorpusManifest& manifest, Split split) {
  std::vector<LeadSheet> out;
  for (const auto& [file, s] : manifest.files) {
    if (s != split) continue;
    const std::string full = file.starts_with('/') ? file : manifest.base_dir + file;
    out.push_back(load_lead_sheet(full));
  }
  return out;
}

// --- chord quality simplification ------------------------------------------

/// Folds raw chord-quality labels onto the 11-type alphabet. Unknown tension
/// extensions reduce to their base triad or seventh class.
inline ChordQuality simplify_quality(const std::string& raw) {
  static const std::map<std::string, ChordQuality> aliases = {
      {"major", ChordQuality::Major},     {"maj", ChordQuality::Major},
      {"M", ChordQuality::Major},         {"", ChordQuality::Major},
      {"5", ChordQuality::Major},         {"6", ChordQuality::Major},
      {"add9", ChordQuality::Major},      {"minor", ChordQuality::Minor},
      {"min", ChordQuality::Minor},       {"m", ChordQuality::Minor},
      {"-", ChordQuality::Minor},         {"m6", ChordQuality::Minor},
      {"madd9", ChordQuality::Minor},     {"augment", ChordQuality::Augment},
      {"aug", ChordQuality::Augment},     {"+", ChordQuality::Augment},
      {"diminish", ChordQuality::Diminish}, {"dim", ChordQuality::Diminish},
      {"o", ChordQuality::Diminish},      {"suspend2", ChordQuality::Suspend2},
      {"sus2", ChordQuality::Suspend2},   {"suspend4", ChordQuality::Suspend4},
      {"sus4", ChordQuality::Suspend4},   {"sus", ChordQuality::Suspend4},
      {"7sus4", ChordQuality::Suspend4},  {"major7", ChordQuality::Major7},
      {"maj7", ChordQuality::Major7},     {"M7", ChordQuality::Major7},
      {"maj9", ChordQuality::Major7},     {"maj11", ChordQuality::Major7},
      {"maj13", ChordQuality::Major7},    {"minor7", ChordQuality::Minor7},
      {"min7", ChordQuality::Minor7},     {"m7", ChordQuality::Minor7},
      {"-7", ChordQuality::Minor7},       {"m9", ChordQuality::Minor7},
      {"m11", ChordQuality::Minor7},      {"m13", ChordQuality::Minor7},
      {"minmaj7", ChordQuality::Minor7},  {"dominant7", ChordQuality::Dominant7},
      {"dom7", ChordQuality::Dominant7},  {"7", ChordQuality::Dominant7},
      {"9", ChordQuality::Dominant7},     {"11", ChordQuality::Dominant7},
      {"13", ChordQuality::Dominant7},    {"7b9", ChordQuality::Dominant7},
      {"7#9", ChordQuality::Dominant7},   {"diminish7", ChordQuality::Diminish7},
      {"dim7", ChordQuality::Diminish7},  {"o7", ChordQuality::Diminish7},
      {"half-diminish7", ChordQuality::HalfDiminish7},
      {"m7b5", ChordQuality::HalfDiminish7},
      {"halfdim7", ChordQuality::HalfDiminish7},
      {"0", ChordQuality::HalfDiminish7}};
  auto it = aliases.find(raw);
  if (it != aliases.end()) return it->second;
  // fold unknown tensions onto a base class
  auto has_seventh_digit = [](const std::string& s) {
    return s.find('7') != std::string::npos || s.find('9') != std::string::npos ||
           s.find("11") != std::string::npos || s.find("13") != std::string::npos;
  };
  if (raw.rfind("maj", 0) == 0) return has_seventh_digit(raw) ? ChordQuality::Major7 : ChordQuality::Major;
  if (raw.rfind("dim", 0) == 0) return has_seventh_digit(raw) ? ChordQuality::Diminish7 : ChordQuality::Diminish;
  if (raw.rfind("aug", 0) == 0) return ChordQuality::Augment;
  if (raw.rfind("sus2", 0) == 0) return ChordQuality::Suspend2;
  if (raw.find("sus") != std::string::npos) return ChordQuality::Suspend4;
  if (raw.rfind("min", 0) == 0 || raw.rfind("m", 0) == 0) {
    return has_seventh_digit(raw) ? ChordQuality::Minor7 : ChordQuality::Minor;
  }
  if (!raw.empty() && std::isdigit(static_cast<unsigned char>(raw[0]))) return ChordQuality::Dominant7;
  throw IoError("unmappable chord quality label: '" + raw + "'");
}

// --- token text files ------------------------------------------------------

inline std::string token_sequence_to_text(const TokenSequence& ts) {
  std::string out;
  for (const Event& e : ts.tokens) {
    out += event_to_string(e);
    out += '\n';
  }
  return out;
}

inline TokenSequence token_sequence_from_text(const std::string& text, Representation tag) {
  TokenSequence ts;
  ts.tag = tag;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto e = event_from_string(line);
    if (!e) throw IoError("line " + std::to_string(line_no) + ": unknown token '" + line + "'");
    ts.tokens.push_back(*e);
  }
  return ts;
}

}  // namespace leadsheet

#endif  // LEADSHEET_IO_HPP
