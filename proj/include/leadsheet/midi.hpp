#ifndef LEADSHEET_MIDI_HPP
#define LEADSHEET_MIDI_HPP

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "leadsheet/score.hpp"
#include "leadsheet/theory.hpp"

namespace leadsheet {

inline constexpr int kTicksPerQuarter = 480;
inline constexpr int kTicksPerStep = kTicksPerQuarter / 4;  // 16th-note step
inline constexpr int kTempoBpm = 110;

namespace midi_detail {

struct TimedEvent {
  int tick;
  std::vector<std::uint8_t> bytes;
  int order;  // stable tie-break: note-offs before note-ons at the same tick
};

inline void write_var_len(std::vector<std::uint8_t>& out, std::uint32_t value) {
  std::uint8_t buf[4];
  int n = 0;
  buf[n++] = value & 0x7f;
  while (value >>= 7) buf[n++] = 0x80 | (value & 0x7f);
  while (n--) out.push_back(buf[n]);
}

inline void write_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(v >> 24);
  out.push_back((v >> 16) & 0xff);
  out.push_back((v >> 8) & 0xff);
  out.push_back(v & 0xff);
}

inline void write_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(v >> 8);
  out.push_back(v & 0xff);
}

inline std::vector<std::uint8_t> build_track(std::vector<TimedEvent> events, int end_tick) {
  std::stable_sort(events.begin(), events.end(), [](const TimedEvent& a, const TimedEvent& b) {
    return a.tick != b.tick ? a.tick < b.tick : a.order < b.order;
  });
  std::vector<std::uint8_t> data;
  int tick = 0;
  for (const TimedEvent& e : events) {
    write_var_len(data, static_cast<std::uint32_t>(e.tick - tick));
    tick = e.tick;
    data.insert(data.end(), e.bytes.begin(), e.bytes.end());
  }
  write_var_len(data, static_cast<std::uint32_t>(end_tick - tick));
  data.insert(data.end(), {0xff, 0x2f, 0x00});  // end of track
  std::vector<std::uint8_t> out;
  out.insert(out.end(), {'M', 'T', 'r', 'k'});
  write_u32(out, static_cast<std::uint32_t>(data.size()));
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

}  // namespace midi_detail

/// SMF format 1, 480 ticks per quarter, fixed 110 BPM. Track 0 carries
/// tempo/meter, track 1 the melody, track 2 block chords (one block per run
/// of identical BeatChords). Fixed velocities; no performance events.
inline void export_midi(const LeadSheet& ls, const std::string& path) {
  using namespace midi_detail;
  check_lead_sheet(ls);
  const int end_tick = ls.num_bars * kSubBeatsPerBar * kTicksPerStep;  // num_bars * 1920

  std::vector<TimedEvent> conductor;
  const std::uint32_t usec_per_quarter = 60000000u / kTempoBpm;
  conductor.push_back({0,
                       {0xff, 0x51, 0x03, static_cast<std::uint8_t>(usec_per_quarter >> 16),
                        static_cast<std::uint8_t>((usec_per_quarter >> 8) & 0xff),
                        static_cast<std::uint8_t>(usec_per_quarter & 0xff)},
                       0});
  conductor.push_back({0, {0xff, 0x58, 0x04, 4, 2, 24, 8}, 1});  // 4/4

  std::vector<TimedEvent> melody;
  constexpr std::uint8_t melody_velocity = 80;
  for (const Note& n : ls.melody) {
    const int on = n.onset * kTicksPerStep;
    const int off = (n.onset + n.duration) * kTicksPerStep;
    melody.push_back({on, {0x90, static_cast<std::uint8_t>(n.pitch), melody_velocity}, 1});
    melody.push_back({std::min(off, end_tick), {0x80, static_cast<std::uint8_t>(n.pitch), 0}, 0});
  }

  std::vector<TimedEvent> chords;
  constexpr std::uint8_t chord_velocity = 60;
  constexpr int chord_octave_base = 48;  // root voiced from C3
  std::size_t i = 0;
  while (i < ls.chords.size()) {
    std::size_t j = i + 1;
    while (j < ls.chords.size() && ls.chords[j].chord == ls.chords[i].chord) ++j;
    if (ls.chords[i].chord) {
      const int on = static_cast<int>(i) * 4 * kTicksPerStep;
      const int off = static_cast<int>(j) * 4 * kTicksPerStep;
      for (PitchClass pc : chord_tones(*ls.chords[i].chord)) {
        const int pitch = chord_octave_base + ((pc - ls.chords[i].chord->root + 12) % 12) +
                          ((ls.chords[i].chord->root + 12) % 12);
        chords.push_back({on, {0x91, static_cast<std::uint8_t>(pitch), chord_velocity}, 1});
        chords.push_back({off, {0x81, static_cast<std::uint8_t>(pitch), 0}, 0});
      }
    }
    i = j;
  }

  std::vector<std::uint8_t> file;
  file.insert(file.end(), {'M', 'T', 'h', 'd'});
  write_u32(file, 6);
  write_u16(file, 1);  // format 1
  write_u16(file, 3);  // tracks
  write_u16(file, kTicksPerQuarter);
  for (auto* track : {&conductor, &melody, &chords}) {
    auto bytes = build_track(*track, end_tick);
    file.insert(file.end(), bytes.begin(), bytes.end());
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(file.data()), static_cast<std::streamsize>(file.size()));
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace leadsheet

#endif  // LEADSHEET_MIDI_HPP
