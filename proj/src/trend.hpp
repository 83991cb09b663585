#pragma once

#include "model.hpp"

#include <cstddef>
#include <vector>

namespace logwave {

// A same-sign run of waves ordered by shift b, with a straight line fitted
// through the peak points (b_i, y_sat_i/(4 a_i)).
struct WaveChain {
    std::vector<std::size_t> member_ids; // indices into the source wave list
    double line_slope = 0.0;
    double line_intercept = 0.0;
    double residual_rms = 0.0;
    std::vector<double> ratios;  // amplitude/b per member, chain order
    bool reversal_flag = false;  // three or more members
};

// Least-squares line through the members' (b, amplitude) points. Members are
// reordered by ascending b. Throws on fewer than two members, an out-of-range
// index, or mixed amplitude signs.
WaveChain fit_chain(const std::vector<LogisticWave>& waves,
                    const std::vector<std::size_t>& member_ids);

// The fitted line evaluated at b_next; nothing else.
double extrapolate_next(const WaveChain& chain, double b_next);

// Deterministic chain candidates: split the waves by amplitude sign, order
// each group by b, and cut the run wherever the consecutive amplitude/b ratio
// jumps by at least `tol` (relative). Runs shorter than two are dropped.
// Output depends only on the wave values, not their input order.
std::vector<WaveChain> auto_group(const std::vector<LogisticWave>& waves,
                                  double tol = 0.30);

} // namespace logwave
