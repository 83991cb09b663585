#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace logwave {

// u sampled on a uniform (x, t) rectangle. values is row-major with one row
// per time: values[i * xs.size() + j] = u(xs[j], ts[i]).
struct GridFunction {
    std::vector<double> xs;
    std::vector<double> ts;
    std::vector<double> values;

    double at(std::size_t ti, std::size_t xj) const {
        return values[ti * xs.size() + xj];
    }
    double h() const { return xs[1] - xs[0]; }
    double tau() const { return ts[1] - ts[0]; }
};

struct KdvParams {
    double k = 1.0;           // soliton parameter, > 0
    double alpha_scale = 1.0; // the alpha of the generalized form
    double c1 = 0.0;          // additive constant of the generalized form
};

// -2k^2 / cosh^2(kx - 4k^3 t); throws unless k > 0.
double soliton(double k, double x, double t);

// Soliton sampled on [x_lo, x_hi] x [t_lo, t_hi] with steps h and tau.
GridFunction sample_soliton(double k, double x_lo, double x_hi, double h,
                            double t_lo, double t_hi, double tau);

// max |u_T - 6 u u_x + u_xxx| over interior points, central differences only
// (2-point in t; 3- and 5-point in x). Boundary rows/columns that lack a
// stencil are excluded rather than one-sided.
double kdv_residual(const GridFunction& g);

// max |4 R_T - 2 alpha R R_X + R_XXX + C1| over the same interior.
double generalized_residual(const GridFunction& g, const KdvParams& p);

// For R(X,T) = (-6 k^2 / alpha) / cosh^2(kX - k^3 T) the generalized operator
// with C1 = 0 vanishes identically; this samples that exact solution.
GridFunction sample_generalized_soliton(double k, double alpha_scale,
                                        double x_lo, double x_hi, double h,
                                        double t_lo, double t_hi, double tau);

// Mean and max relative spread of A_i/T_i over a chain of (A, T) pairs.
// Throws on fewer than two entries or any zero T. A zero mean falls back to
// the absolute max deviation for the spread.
std::pair<double, double>
amplitude_shift_ratio(const std::vector<std::pair<double, double>>& chain);

// CSV matrix: first row the x grid (corner empty), first column the t grid.
void save_grid_csv(const GridFunction& g, const std::string& path);
GridFunction load_grid_csv(const std::string& path);

} // namespace logwave
