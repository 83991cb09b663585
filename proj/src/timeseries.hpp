#pragma once

#include <string>
#include <vector>

namespace logwave {

// Uniformly spaced observations; t = n for the n-th value, n starting at 1.
// start_label is informational only (e.g. the calendar tag of the first row).
struct TimeSeries {
    std::string start_label;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

struct FitReport {
    double r_squared = 0.0;
    double rmse = 0.0;
    std::vector<double> residuals; // observed - predicted
};

// CSV ingestion. `column` selects the value column by header name or by
// 0-based index (a string of digits). An empty `column` picks the second
// column when present, else the first. Rows must be chronological; every
// selected cell must parse as a finite real. Errors name the offending
// 1-based file line.
TimeSeries ingest_csv(const std::string& path, const std::string& column);

// Round-trip faithful serialization ("t,value", 17 significant digits).
void save_csv(const TimeSeries& s, const std::string& path);

TimeSeries first_difference(const TimeSeries& s);
TimeSeries cumulative(const TimeSeries& s);

FitReport fit_metrics(const TimeSeries& observed, const TimeSeries& predicted);

} // namespace logwave
