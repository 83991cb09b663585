#pragma once

#include "model.hpp"
#include "timeseries.hpp"

#include <vector>

namespace logwave {

struct DecompositionConfig {
    int max_waves = 22;
    double stop_r2 = 0.9939;
    double min_abs_cwt = 0.0; // <= 0: automatic, 3x median |scalogram value|
    bool refine = true;
    double detail_alpha_max = 30.0;
    double carrier_alpha_max = 120.0;
};

struct DecompositionResult {
    MultilogisticModel model;
    FitReport fit; // derivative-space fit of the input series
};

// Single-pass detection: scalogram extrema of the differenced signal become
// waves with (a, b) = (alpha, beta) and y_sat from the inversion formula,
// ordered by descending |y_sat|/(4a). `carrier_pass` selects the wide-scale
// grid (alpha up to cfg.carrier_alpha_max, step 1) over the detail grid
// (up to cfg.detail_alpha_max, step 0.5).
std::vector<LogisticWave> detect_waves(const TimeSeries& signal_diff,
                                       const DecompositionConfig& cfg,
                                       bool carrier_pass = false);

// Bounded derivative-free local refinement of the selected waves (all waves
// when `which` is empty) plus the drift d, against the monthly-value series.
// Bounds: a in [a0/2, 2*a0], b in [b0-3*a0, b0+3*a0], y_sat sign preserved.
// The sum of squared residuals never increases. `converged` (optional)
// reports whether the step sizes shrank below tolerance before the sweep cap.
MultilogisticModel refine_parameters(const TimeSeries& series,
                                     const MultilogisticModel& m,
                                     const std::vector<std::size_t>& which,
                                     bool* converged = nullptr);

// Full pipeline: difference, carrier-pass detection over a detail scaffold,
// alternating detail-pass/refinement rounds, cleanup (cull + re-anchoring),
// final scoring of the derivative-space fit. Deterministic for fixed inputs.
DecompositionResult decompose(const TimeSeries& series,
                              const DecompositionConfig& cfg);

} // namespace logwave
