#pragma once

#include "wavelet.hpp"

#include <string>
#include <vector>

namespace logwave {

// CWT values over a (scale, shift) grid. Row i holds scale alphas[i].
struct Scalogram {
    std::vector<double> alphas; // strictly increasing, > 0
    std::vector<double> betas;  // strictly increasing
    std::vector<double> values; // row-major, alphas.size() x betas.size()

    double at(std::size_t i, std::size_t j) const { return values[i * betas.size() + j]; }
};

struct ScalogramExtremum {
    double alpha = 0.0;
    double beta = 0.0;
    double cwt_value = 0.0;
    bool is_max = true; // false: minimum
};

// Riemann-sum CWT of a discrete signal against the un-normalized child
// wavelet: sum_n signal[n-1] * psi2((n - beta)/alpha), sample spacing 1.
// The sum runs over available samples only (no padding).
double cwt_point(const std::vector<double>& signal, const WaveletParams& p);

// Full grid evaluation; rows are computed in parallel, output is
// deterministic.
Scalogram compute_scalogram(const std::vector<double>& signal,
                            const std::vector<double>& alphas,
                            const std::vector<double>& betas);

// Extremum candidates: strict local maxima of the scale-normalized magnitude
// |value|/sqrt(alpha) over the 8-neighborhood (cells on the grid edge compare
// against their existing neighbors) with raw |value| >= min_abs, greedily
// pruned so no two results lie within the exclusion radius of each other
// (larger raw |value| wins). Sorted by descending raw |value|. The reported
// cwt_value is the raw matrix entry.
std::vector<ScalogramExtremum> find_extrema(const Scalogram& s, double min_abs,
                                            double excl_alpha = 2.0,
                                            double excl_beta = 6.0);

// Saturation level from an extremal CWT response: sqrt(30) * alpha * value.
double ysat_from_cwt(double alpha, double cwt_value);
double ysat_from_cwt(const ScalogramExtremum& e);

// CSV export: first row is the beta grid, first column the alpha grid,
// corner cell empty; full precision.
void save_scalogram_csv(const Scalogram& s, const std::string& path);

} // namespace logwave
