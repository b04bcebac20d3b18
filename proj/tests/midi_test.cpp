#include "leadsheet/midi.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>

#include "test_util.hpp"

namespace leadsheet {
namespace {

struct ParsedEvent {
  int tick;
  std::uint8_t status;
  std::uint8_t data1;
  std::uint8_t data2;
};

struct ParsedTrack {
  std::vector<ParsedEvent> events;
  int end_tick = 0;
};

struct ParsedFile {
  int format = -1;
  int division = 0;
  std::vector<ParsedTrack> tracks;
};

// Minimal SMF reader, just enough to audit the writer's output.
ParsedFile parse_midi(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in.good());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), {});
  ParsedFile file;
  std::size_t pos = 0;
  auto u32 = [&] {
    std::uint32_t v = (bytes[pos] << 24) | (bytes[pos + 1] << 16) | (bytes[pos + 2] << 8) |
                      bytes[pos + 3];
    pos += 4;
    return v;
  };
  auto u16 = [&] {
    std::uint16_t v = static_cast<std::uint16_t>((bytes[pos] << 8) | bytes[pos + 1]);
    pos += 2;
    return v;
  };
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "MThd");
  pos = 4;
  EXPECT_EQ(u32(), 6u);
  file.format = u16();
  const int num_tracks = u16();
  file.division = u16();
  for (int t = 0; t < num_tracks; ++t) {
    EXPECT_EQ(std::string(bytes.begin() + pos, bytes.begin() + pos + 4), "MTrk");
    pos += 4;
    const std::size_t len = u32();
    const std::size_t end = pos + len;
    ParsedTrack track;
    int tick = 0;
    while (pos < end) {
      std::uint32_t delta = 0;
      while (bytes[pos] & 0x80) delta = (delta << 7) | (bytes[pos++] & 0x7f);
      delta = (delta << 7) | bytes[pos++];
      tick += static_cast<int>(delta);
      const std::uint8_t status = bytes[pos++];
      if (status == 0xff) {
        const std::uint8_t type = bytes[pos++];
        const std::uint8_t len2 = bytes[pos++];
        track.events.push_back({tick, status, type, len2});
        if (type == 0x2f) track.end_tick = tick;
        pos += len2;
      } else {
        const std::uint8_t d1 = bytes[pos++];
        const std::uint8_t d2 = bytes[pos++];
        track.events.push_back({tick, status, d1, d2});
      }
    }
    EXPECT_EQ(pos, end);
    file.tracks.push_back(std::move(track));
  }
  EXPECT_EQ(pos, bytes.size());
  return file;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

TEST(ExportMidi, SingleNoteTickArithmetic) {
  LeadSheet ls;
  ls.emotion = Emotion::Positive;
  ls.key = Key{0, Mode::Major};
  ls.num_bars = 1;
  ls.melody = {Note{0, 60, 4}};
  ls.chords.assign(4, BeatChord{});
  const std::string path = temp_path("leadsheet_midi_single.mid");
  export_midi(ls, path);
  ParsedFile file = parse_midi(path);
  EXPECT_EQ(file.format, 1);
  EXPECT_EQ(file.division, 480);
  ASSERT_EQ(file.tracks.size(), 3u);
  const auto& melody = file.tracks[1];
  ASSERT_EQ(melody.events.size(), 3u);  // on, off, end-of-track
  EXPECT_EQ(melody.events[0].status, 0x90);
  EXPECT_EQ(melody.events[0].tick, 0);
  EXPECT_EQ(melody.events[0].data1, 60);
  EXPECT_EQ(melody.events[1].status, 0x80);
  EXPECT_EQ(melody.events[1].tick, 480);
  std::filesystem::remove(path);
}

TEST(ExportMidi, TempoMetaAt110Bpm) {
  LeadSheet ls;
  ls.key = Key{0, Mode::Major};
  ls.num_bars = 1;
  ls.chords.assign(4, BeatChord{});
  const std::string path = temp_path("leadsheet_midi_tempo.mid");
  export_midi(ls, path);
  ParsedFile file = parse_midi(path);
  bool found = false;
  for (const auto& e : file.tracks[0].events) {
    if (e.status == 0xff && e.data1 == 0x51) found = true;
  }
  EXPECT_TRUE(found);
  std::filesystem::remove(path);
}

TEST(ExportMidi, EmptyMelodyChordBlocks) {
  LeadSheet ls;
  ls.key = Key{0, Mode::Major};
  ls.num_bars = 1;
  // two-beat C major block then two-beat G major block
  ls.chords = {BeatChord{ChordLabel{0, ChordQuality::Major}},
               BeatChord{ChordLabel{0, ChordQuality::Major}},
               BeatChord{ChordLabel{7, ChordQuality::Major}},
               BeatChord{ChordLabel{7, ChordQuality::Major}}};
  const std::string path = temp_path("leadsheet_midi_chords.mid");
  export_midi(ls, path);
  ParsedFile file = parse_midi(path);
  EXPECT_TRUE(file.tracks[1].events.size() == 1u);  // end-of-track only
  const auto& chords = file.tracks[2].events;
  int ons_at_0 = 0, offs_at_960 = 0, ons_at_960 = 0, offs_at_1920 = 0;
  for (const auto& e : chords) {
    if (e.status == 0x91 && e.tick == 0) ++ons_at_0;
    if (e.status == 0x81 && e.tick == 960) ++offs_at_960;
    if (e.status == 0x91 && e.tick == 960) ++ons_at_960;
    if (e.status == 0x81 && e.tick == 1920) ++offs_at_1920;
  }
  EXPECT_EQ(ons_at_0, 3);
  EXPECT_EQ(offs_at_960, 3);
  EXPECT_EQ(ons_at_960, 3);
  EXPECT_EQ(offs_at_1920, 3);
  std::filesystem::remove(path);
}

TEST(ExportMidi, TickTotalsAndMatchedNoteOffs) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    LeadSheet ls = testutil::random_lead_sheet(rng, 3);
    const std::string path = temp_path("leadsheet_midi_rand.mid");
    export_midi(ls, path);
    ParsedFile file = parse_midi(path);
    for (const auto& track : file.tracks) {
      EXPECT_EQ(track.end_tick, ls.num_bars * 1920);
      std::map<int, int> open;  // pitch -> count
      for (const auto& e : track.events) {
        if ((e.status & 0xf0) == 0x90) ++open[e.data1];
        if ((e.status & 0xf0) == 0x80) {
          EXPECT_GT(open[e.data1], 0) << "unmatched note-off";
          --open[e.data1];
        }
      }
      for (const auto& [pitch, count] : open) EXPECT_EQ(count, 0) << "unclosed note " << pitch;
    }
    std::filesystem::remove(path);
  }
}

}  // namespace
}  // namespace leadsheet
