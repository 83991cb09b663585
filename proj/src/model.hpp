#pragma once

#include "timeseries.hpp"

#include <cstdint>
#include <vector>

namespace logwave {

// One solitary-wave component: a (slope/scale), b (center time), y_sat
// (signed saturation level of the cumulative series). Its peak contribution
// to the monthly series is y_sat/(4a) at t = b.
struct LogisticWave {
    double a = 1.0;
    double b = 0.0;
    double y_sat = 0.0;
    bool edge = false; // wavelet support [b-5a, b+5a] leaves the observed range
};

struct MultilogisticModel {
    double c = 0.0; // intercept of the cumulative series
    double d = 0.0; // linear drift rate
    std::vector<LogisticWave> waves;
};

// Cumulative-space evaluation: c + d*t + sum y_sat/(1+exp(-(t-b)/a)).
double eval_multilogistic(const MultilogisticModel& m, double t);

// Derivative-space evaluation: d + sum y_sat/(4a) / cosh^2((t-b)/(2a)).
// Independent of c by construction.
double eval_multilogistic_derivative(const MultilogisticModel& m, double t);

// Single-wave derivative-space term.
double wave_term(const LogisticWave& w, double t);

// Signed derivative-space peak y_sat/(4a).
double amplitude(const LogisticWave& w);

// Remove one wave from a cumulative-space series (t = n).
TimeSeries subtract_wave_cumulative(const TimeSeries& s, const LogisticWave& w);
// Remove one wave's derivative-space term from a monthly-value series.
TimeSeries subtract_wave_derivative(const TimeSeries& s, const LogisticWave& w);

// Set edge flags for a series of the given length (t = 1..n).
void flag_edges(std::vector<LogisticWave>& waves, std::size_t series_len);
void flag_edges(MultilogisticModel& m, std::size_t series_len);

// Sample the derivative-space model at t = 1..n and add N(0, sigma^2) noise.
// The generator (mt19937-64 + Box-Muller) is fixed here so runs are
// bit-identical for a given seed regardless of the standard library.
TimeSeries synthesize(const MultilogisticModel& m, std::size_t n,
                      double noise_sigma, std::uint64_t seed);

} // namespace logwave
