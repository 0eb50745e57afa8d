#pragma once
// Deterministic CSV serialization. Doubles are written with std::to_chars
// (the shortest form that parses back to the same bits) and read with
// std::from_chars, so write -> read -> write is byte-identical and two runs
// of the same scenario produce identical files.

#include <array>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <ios>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sim.hpp"
#include "sweep.hpp"

namespace cpldamp {

inline std::string format_double(double v) {
    std::array<char, 64> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("malformed number '" + std::string(s) + "'");
    return v;
}

inline std::string time_series_csv_header() {
    std::string h;
    for (std::size_t i = 0; i < kTimeSeriesColumns.size(); ++i) {
        if (i) h += ',';
        h += kTimeSeriesColumns[i];
    }
    return h;
}

inline void write_time_series_csv(std::ostream& out, const TimeSeries& ts) {
    out << time_series_csv_header() << '\n';
    for (const SimRow& r : ts.rows) {
        const auto v = r.values();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out << ',';
            out << format_double(v[i]);
        }
        out << '\n';
    }
}

inline void write_time_series_csv(const std::string& path, const TimeSeries& ts) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    write_time_series_csv(f, ts);
    f.flush();
    if (!f) throw std::ios_base::failure("error writing '" + path + "'");
}

// Reads rows back; the run status is not part of the file format, so the
// result is marked completed. Throws on any malformed line.
inline TimeSeries read_time_series_csv(std::istream& in) {
    TimeSeries ts;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != time_series_csv_header())
        throw std::runtime_error("unexpected CSV header '" + line + "'");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<double, 11> v{};
        try {
            std::size_t pos = 0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                const bool last = i + 1 == v.size();
                const std::size_t comma = last ? line.size() : line.find(',', pos);
                if (comma == std::string::npos)
                    throw std::runtime_error("expected 11 fields");
                v[i] = parse_double(std::string_view(line).substr(pos, comma - pos));
                pos = comma + 1;
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("CSV line " + std::to_string(lineno) + ": " +
                                     e.what());
        }
        ts.rows.push_back(SimRow{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7],
                                 v[8], v[9], v[10]});
    }
    return ts;
}

inline TimeSeries read_time_series_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open '" + path + "' for reading");
    return read_time_series_csv(f);
}

inline std::string sweep_csv_header() {
    return "P,verdict,status,x2_end,x2_abs_err,Phat_end";
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& pts) {
    out << sweep_csv_header() << '\n';
    for (const SweepPoint& p : pts) {
        out << format_double(p.P) << ',' << to_string(p.verdict) << ',' << p.status
            << ',' << format_double(p.x2_end) << ',' << format_double(p.x2_abs_err)
            << ',' << format_double(p.Phat_end) << '\n';
    }
}

inline void write_sweep_csv(const std::string& path,
                            const std::vector<SweepPoint>& pts) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    write_sweep_csv(f, pts);
    f.flush();
    if (!f) throw std::ios_base::failure("error writing '" + path + "'");
}

} // namespace cpldamp
