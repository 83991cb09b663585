#include "timeseries.hpp"
#include "common.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace logwave {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_double(const std::string& cell, double& out) {
    const std::string t = trim(cell);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc() || res.ptr != last) return false;
    return std::isfinite(out);
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c); });
}

} // namespace

TimeSeries ingest_csv(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw InputError("empty file: " + path);

    const std::vector<std::string> header = split_csv_line(line);
    std::size_t col = 0;
    if (column.empty()) {
        col = header.size() >= 2 ? 1 : 0;
    } else if (all_digits(column)) {
        col = static_cast<std::size_t>(std::stoul(column));
        if (col >= header.size())
            throw InputError("column index " + column + " out of range (file has " +
                             std::to_string(header.size()) + " columns)");
    } else {
        bool found = false;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trim(header[i]) == column) {
                col = i;
                found = true;
                break;
            }
        }
        if (!found) throw InputError("column not found in header: " + column);
    }

    TimeSeries ts;
    std::size_t line_no = 1; // header was line 1
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (col >= cells.size())
            throw InputError("row " + std::to_string(line_no) + ": missing column " +
                             std::to_string(col));
        double v = 0.0;
        if (!parse_double(cells[col], v))
            throw InputError("row " + std::to_string(line_no) +
                             ": cannot parse value '" + trim(cells[col]) + "'");
        if (ts.values.empty() && !cells.empty() && col != 0)
            ts.start_label = trim(cells[0]);
        ts.values.push_back(v);
    }

    if (ts.values.empty()) throw InputError("no data rows in " + path);
    if (ts.values.size() < 2) throw InputError("series too short (need at least 2 rows)");
    return ts;
}

void save_csv(const TimeSeries& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path);
    out << "t,value\n";
    char buf[64];
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", s.values[i]);
        out << (i + 1) << ',' << buf << '\n';
    }
    if (!out) throw InputError("write failed: " + path);
}

TimeSeries first_difference(const TimeSeries& s) {
    if (s.values.size() < 2) throw ParamError("series too short to difference");
    TimeSeries out;
    out.start_label = s.start_label;
    out.values.resize(s.values.size() - 1);
    for (std::size_t i = 0; i + 1 < s.values.size(); ++i)
        out.values[i] = s.values[i + 1] - s.values[i];
    return out;
}

TimeSeries cumulative(const TimeSeries& s) {
    TimeSeries out;
    out.start_label = s.start_label;
    out.values.resize(s.values.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        acc += s.values[i];
        out.values[i] = acc;
    }
    return out;
}

FitReport fit_metrics(const TimeSeries& observed, const TimeSeries& predicted) {
    const std::size_t n = observed.values.size();
    if (n != predicted.values.size()) throw ParamError("length mismatch in fit_metrics");
    if (n < 2) throw ParamError("fit_metrics needs at least 2 points");

    double mean = 0.0;
    for (double v : observed.values) mean += v;
    mean /= static_cast<double>(n);

    FitReport rep;
    rep.residuals.resize(n);
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = observed.values[i] - predicted.values[i];
        rep.residuals[i] = r;
        ss_res += r * r;
        const double m = observed.values[i] - mean;
        ss_tot += m * m;
    }
    if (ss_tot == 0.0) throw ParamError("observed series is constant; R^2 undefined");
    rep.r_squared = 1.0 - ss_res / ss_tot;
    rep.rmse = std::sqrt(ss_res / static_cast<double>(n));
    return rep;
}

} // namespace logwave
