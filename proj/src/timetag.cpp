#include "phonon/timetag.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace phonon {

namespace {
constexpr const char* kHeader = "# phonon-herald timetag v1";
}

const char* channel_name(Channel c) {
    switch (c) {
        case Channel::S: return "S";
        case Channel::D1: return "D1";
        case Channel::D2: return "D2";
    }
    throw std::invalid_argument("channel_name: unknown channel");
}

Channel channel_from_name(const std::string& name) {
    if (name == "S") return Channel::S;
    if (name == "D1") return Channel::D1;
    if (name == "D2") return Channel::D2;
    throw std::invalid_argument("unknown channel '" + name + "'");
}

void write_stream(std::span<const TimeTagRecord> records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no newline translation
    if (!out) throw std::runtime_error("write_stream: cannot open " + path.string());
    out << kHeader << '\n';
    for (const auto& r : records)
        out << r.pulse_index << ',' << channel_name(r.channel) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("write_stream: write failed for " + path.string());
}

TimeTagStream read_stream(const std::filesystem::path& path,
                          std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_stream: cannot open " + path.string());

    TimeTagStream records;
    std::array<std::uint64_t, 3> last_index{};
    std::array<bool, 3> seen{};

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != kHeader)
                throw std::runtime_error("read_stream: " + path.string() +
                                         ":1: bad or missing header");
            continue;
        }
        if (line.empty()) continue;
        const auto comma = line.find(',');
        const auto fail = [&](const char* what) {
            throw std::runtime_error("read_stream: " + path.string() + ":" +
                                     std::to_string(line_no) + ": " + what);
        };
        if (comma == std::string::npos) fail("malformed line (missing comma)");

        TimeTagRecord rec;
        const char* first = line.data();
        const char* last = line.data() + comma;
        auto [ptr, ec] = std::from_chars(first, last, rec.pulse_index);
        if (ec != std::errc{} || ptr != last) fail("malformed pulse index");
        try {
            rec.channel = channel_from_name(line.substr(comma + 1));
        } catch (const std::invalid_argument&) {
            fail("unknown channel");
        }

        const auto ch = static_cast<std::size_t>(rec.channel);
        if (seen[ch] && rec.pulse_index < last_index[ch] && warnings)
            warnings->push_back(path.string() + ":" + std::to_string(line_no) +
                                ": non-monotone pulse index on channel " +
                                channel_name(rec.channel));
        last_index[ch] = rec.pulse_index;
        seen[ch] = true;
        records.push_back(rec);
    }
    return records;
}

std::uint64_t StartStopHistogram::total() const {
    std::uint64_t sum = 0;
    for (const auto& [offset, count] : bins) sum += count;
    return sum;
}

StartStopHistogram build_histogram(std::span<const TimeTagRecord> records, Channel start,
                                   Channel stop, std::int64_t max_offset) {
    if (max_offset < 1)
        throw std::domain_error("build_histogram: max_offset must be >= 1");

    std::vector<std::uint64_t> starts, stops;
    for (const auto& r : records) {
        if (r.channel == start) starts.push_back(r.pulse_index);
        if (r.channel == stop) stops.push_back(r.pulse_index);
    }

    StartStopHistogram hist;
    hist.start_channel = start;
    hist.stop_channel = stop;
    for (std::int64_t k = -max_offset; k <= max_offset; ++k) hist.bins[k] = 0;

    // per-channel pulse order is nondecreasing, so a sliding window suffices
    std::size_t lo = 0;
    for (std::size_t si = 0; si < starts.size(); ++si) {
        const auto s = static_cast<std::int64_t>(starts[si]);
        while (lo < stops.size() && static_cast<std::int64_t>(stops[lo]) < s - max_offset)
            ++lo;
        for (std::size_t j = lo; j < stops.size(); ++j) {
            const auto t = static_cast<std::int64_t>(stops[j]);
            if (t > s + max_offset) break;
            if (start == stop && j == si) continue;  // never pair a click with itself
            ++hist.bins[t - s];
        }
    }
    return hist;
}

}  // namespace phonon
