#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace phonon {

enum class Channel : std::uint8_t { S, D1, D2 };

const char* channel_name(Channel c);
Channel channel_from_name(const std::string& name);

// One detector click, indexed by laser repetition (pulse), not wall clock.
struct TimeTagRecord {
    std::uint64_t pulse_index = 0;
    Channel channel = Channel::S;

    friend bool operator==(const TimeTagRecord&, const TimeTagRecord&) = default;
};

using TimeTagStream = std::vector<TimeTagRecord>;

// Text format v1: header line "# phonon-herald timetag v1", then one record
// per line as "pulse_index,channel" with channel in {S, D1, D2}. Round-trips
// bit-exactly.
void write_stream(std::span<const TimeTagRecord> records, const std::filesystem::path& path);

// Throws on malformed lines (with the line number); non-monotone pulse
// indices within a channel are reported via *warnings when provided.
TimeTagStream read_stream(const std::filesystem::path& path,
                          std::vector<std::string>* warnings = nullptr);

// Coincidence counts binned by the signed pulse-index offset between start
// and stop events. Offsets in the exclusion window are kept in the bins but
// skipped by the histogram statistics downstream.
struct StartStopHistogram {
    std::map<std::int64_t, std::uint64_t> bins;
    Channel start_channel = Channel::S;
    Channel stop_channel = Channel::D1;
    std::set<std::int64_t> exclusion_window;

    std::uint64_t total() const;
};

// For each start-channel event, increments the bin at the pulse offset of
// every stop-channel event within +/- max_offset. All offsets in range are
// present in the result (zero-filled where no pairs occurred). When start and
// stop channels coincide, a record is never paired with itself.
StartStopHistogram build_histogram(std::span<const TimeTagRecord> records, Channel start,
                                   Channel stop, std::int64_t max_offset);

}  // namespace phonon
