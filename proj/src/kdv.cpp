#include "kdv.hpp"

#include "common.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace logwave {
namespace {

void check_grid(const GridFunction& g) {
    const std::size_t nx = g.xs.size(), nt = g.ts.size();
    if (nx < 2 || nt < 2) throw InputError("grid needs at least 2 points per axis");
    if (g.values.size() != nx * nt)
        throw InputError("grid values do not match the axes");
    const double h = g.xs[1] - g.xs[0], tau = g.ts[1] - g.ts[0];
    if (!(h > 0.0) || !(tau > 0.0))
        throw InputError("grid axes must be strictly increasing");
    for (std::size_t j = 1; j < nx; ++j)
        if (std::fabs((g.xs[j] - g.xs[j - 1]) - h) > 1e-9 * std::max(1.0, std::fabs(h)))
            throw InputError("x grid is not uniform");
    for (std::size_t i = 1; i < nt; ++i)
        if (std::fabs((g.ts[i] - g.ts[i - 1]) - tau) > 1e-9 * std::max(1.0, std::fabs(tau)))
            throw InputError("t grid is not uniform");
}

std::vector<double> linspace_step(double lo, double hi, double step) {
    if (!(step > 0.0)) throw ParamError("grid step must be positive");
    if (!(hi > lo)) throw ParamError("grid range is empty");
    std::vector<double> out;
    const long long n = static_cast<long long>(std::floor((hi - lo) / step + 0.5)) + 1;
    out.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

double sech2(double z) {
    const double c = std::cosh(z);
    return 1.0 / (c * c);
}

// Shared residual walk; op combines the stencil values at one interior point.
template <typename Op>
double residual_max(const GridFunction& g, Op op) {
    check_grid(g);
    if (g.xs.size() < 5 || g.ts.size() < 3)
        throw InputError("grid too small for stencils");
    const std::size_t nx = g.xs.size(), nt = g.ts.size();
    const double h = g.h(), tau = g.tau();
    const double inv2t = 1.0 / (2.0 * tau);
    const double inv2h = 1.0 / (2.0 * h);
    const double inv2h3 = 1.0 / (2.0 * h * h * h);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < nt; ++i) {
        for (std::size_t j = 2; j + 2 < nx; ++j) {
            const double u = g.at(i, j);
            const double u_t = (g.at(i + 1, j) - g.at(i - 1, j)) * inv2t;
            const double u_x = (g.at(i, j + 1) - g.at(i, j - 1)) * inv2h;
            const double u_xxx = (g.at(i, j + 2) - 2.0 * g.at(i, j + 1) +
                                  2.0 * g.at(i, j - 1) - g.at(i, j - 2)) *
                                 inv2h3;
            const double r = std::fabs(op(u, u_t, u_x, u_xxx));
            if (r > worst) worst = r;
        }
    }
    return worst;
}

} // namespace

double soliton(double k, double x, double t) {
    if (!(k > 0.0)) throw ParamError("soliton parameter k must be positive");
    return -2.0 * k * k * sech2(k * x - 4.0 * k * k * k * t);
}

GridFunction sample_soliton(double k, double x_lo, double x_hi, double h,
                            double t_lo, double t_hi, double tau) {
    if (!(k > 0.0)) throw ParamError("soliton parameter k must be positive");
    GridFunction g;
    g.xs = linspace_step(x_lo, x_hi, h);
    g.ts = linspace_step(t_lo, t_hi, tau);
    g.values.resize(g.xs.size() * g.ts.size());
    for (std::size_t i = 0; i < g.ts.size(); ++i)
        for (std::size_t j = 0; j < g.xs.size(); ++j)
            g.values[i * g.xs.size() + j] = soliton(k, g.xs[j], g.ts[i]);
    return g;
}

double kdv_residual(const GridFunction& g) {
    return residual_max(g, [](double u, double u_t, double u_x, double u_xxx) {
        return u_t - 6.0 * u * u_x + u_xxx;
    });
}

double generalized_residual(const GridFunction& g, const KdvParams& p) {
    if (!(p.k > 0.0)) throw ParamError("soliton parameter k must be positive");
    const double a = p.alpha_scale, c1 = p.c1;
    return residual_max(g, [a, c1](double u, double u_t, double u_x, double u_xxx) {
        return 4.0 * u_t - 2.0 * a * u * u_x + u_xxx + c1;
    });
}

GridFunction sample_generalized_soliton(double k, double alpha_scale,
                                        double x_lo, double x_hi, double h,
                                        double t_lo, double t_hi, double tau) {
    if (!(k > 0.0)) throw ParamError("soliton parameter k must be positive");
    if (alpha_scale == 0.0) throw ParamError("alpha_scale must be nonzero");
    GridFunction g;
    g.xs = linspace_step(x_lo, x_hi, h);
    g.ts = linspace_step(t_lo, t_hi, tau);
    g.values.resize(g.xs.size() * g.ts.size());
    const double amp = -6.0 * k * k / alpha_scale;
    for (std::size_t i = 0; i < g.ts.size(); ++i)
        for (std::size_t j = 0; j < g.xs.size(); ++j)
            g.values[i * g.xs.size() + j] =
                amp * sech2(k * g.xs[j] - k * k * k * g.ts[i]);
    return g;
}

std::pair<double, double>
amplitude_shift_ratio(const std::vector<std::pair<double, double>>& chain) {
    if (chain.size() < 2)
        throw ParamError("ratio chain too short: need at least 2 entries");
    std::vector<double> r;
    r.reserve(chain.size());
    for (const auto& [A, T] : chain) {
        if (T == 0.0) throw ParamError("ratio chain has a zero time shift");
        r.push_back(A / T);
    }
    double mean = 0.0;
    for (double v : r) mean += v;
    mean /= static_cast<double>(r.size());
    double dev = 0.0;
    for (double v : r) dev = std::max(dev, std::fabs(v - mean));
    const double spread = mean == 0.0 ? dev : dev / std::fabs(mean);
    return {mean, spread};
}

void save_grid_csv(const GridFunction& g, const std::string& path) {
    check_grid(g);
    std::ofstream f(path);
    if (!f) throw InputError("cannot open " + path + " for writing");
    char buf[64];
    for (std::size_t j = 0; j < g.xs.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", g.xs[j]);
        f << ',' << buf;
    }
    f << '\n';
    for (std::size_t i = 0; i < g.ts.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", g.ts[i]);
        f << buf;
        for (std::size_t j = 0; j < g.xs.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", g.at(i, j));
            f << ',' << buf;
        }
        f << '\n';
    }
    if (!f) throw InputError("failed writing " + path);
}

GridFunction load_grid_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open " + path);
    GridFunction g;
    std::string line;
    std::size_t lineno = 0;
    auto parse_cell = [&](const std::string& cell) {
        try {
            std::size_t used = 0;
            const double v = std::stod(cell, &used);
            if (used != cell.size() || !std::isfinite(v)) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw InputError(path + ": unparseable number at line " +
                             std::to_string(lineno));
        }
    };
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (lineno == 1) {
            if (cells.size() < 2 || !cells[0].empty())
                throw InputError(path + ": first row must be an empty corner then the x grid");
            for (std::size_t j = 1; j < cells.size(); ++j)
                g.xs.push_back(parse_cell(cells[j]));
            continue;
        }
        if (cells.size() != g.xs.size() + 1)
            throw InputError(path + ": wrong cell count at line " +
                             std::to_string(lineno));
        g.ts.push_back(parse_cell(cells[0]));
        for (std::size_t j = 1; j < cells.size(); ++j)
            g.values.push_back(parse_cell(cells[j]));
    }
    if (g.ts.empty()) throw InputError(path + ": no grid rows");
    check_grid(g);
    return g;
}

} // namespace logwave
