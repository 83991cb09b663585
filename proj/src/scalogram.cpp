#include "scalogram.hpp"
#include "common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace logwave {

namespace {
constexpr double kSqrt30 = 5.477225575051661134569525;

void check_grid(const std::vector<double>& alphas, const std::vector<double>& betas) {
    if (alphas.empty() || betas.empty()) throw ParamError("scalogram: empty grid");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > 0.0)) throw ParamError("scalogram: alphas must be positive");
        if (i && !(alphas[i] > alphas[i - 1]))
            throw ParamError("scalogram: alphas must be strictly increasing");
    }
    for (std::size_t j = 1; j < betas.size(); ++j)
        if (!(betas[j] > betas[j - 1]))
            throw ParamError("scalogram: betas must be strictly increasing");
}
} // namespace

double cwt_point(const std::vector<double>& signal, const WaveletParams& p) {
    if (signal.empty()) throw ParamError("cwt_point: empty signal");
    if (!(p.alpha > 0.0)) throw ParamError("cwt_point: alpha must be positive");
    double acc = 0.0;
    const double inv = 1.0 / p.alpha;
    for (std::size_t k = 0; k < signal.size(); ++k) {
        const double t = static_cast<double>(k + 1);
        acc += signal[k] * psi2((t - p.beta) * inv);
    }
    return acc;
}

Scalogram compute_scalogram(const std::vector<double>& signal,
                            const std::vector<double>& alphas,
                            const std::vector<double>& betas) {
    if (signal.empty()) throw ParamError("scalogram: empty signal");
    check_grid(alphas, betas);
    Scalogram s;
    s.alphas = alphas;
    s.betas = betas;
    s.values.assign(alphas.size() * betas.size(), 0.0);

    const std::size_t rows = alphas.size();
    auto run_rows = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < rows; i += stride) {
            double* out = s.values.data() + i * betas.size();
            for (std::size_t j = 0; j < betas.size(); ++j)
                out[j] = cwt_point(signal, {alphas[i], betas[j]});
        }
    };
    const std::size_t nthreads =
        std::min<std::size_t>(rows, std::max(1u, std::thread::hardware_concurrency()));
    if (nthreads <= 1) {
        run_rows(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (std::size_t w = 0; w < nthreads; ++w) pool.emplace_back(run_rows, w, nthreads);
        for (auto& th : pool) th.join();
    }
    return s;
}

std::vector<ScalogramExtremum> find_extrema(const Scalogram& s, double min_abs,
                                            double excl_alpha, double excl_beta) {
    if (min_abs < 0.0) throw ParamError("find_extrema: min_abs must be >= 0");
    const std::size_t na = s.alphas.size(), nb = s.betas.size();
    // Localization runs on the scale-normalized magnitude |v|/sqrt(alpha):
    // the raw magnitude ridge drifts to larger scales (its alpha-argmax
    // overshoots the true scale), while the normalized surface is stationary
    // at the wave's own (a, b). Reported values stay raw.
    std::vector<double> wnorm(na * nb);
    for (std::size_t i = 0; i < na; ++i) {
        const double inv = 1.0 / std::sqrt(s.alphas[i]);
        for (std::size_t j = 0; j < nb; ++j)
            wnorm[i * nb + j] = std::fabs(s.at(i, j)) * inv;
    }
    struct Cand {
        double mag, alpha, beta, value;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            const double v = s.at(i, j);
            const double m = std::fabs(v);
            if (m < min_abs) continue;
            const double w = wnorm[i * nb + j];
            bool strict = true;
            for (int di = -1; di <= 1 && strict; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const auto ii = static_cast<long long>(i) + di;
                    const auto jj = static_cast<long long>(j) + dj;
                    if (ii < 0 || jj < 0 || ii >= static_cast<long long>(na) ||
                        jj >= static_cast<long long>(nb))
                        continue;
                    if (wnorm[static_cast<std::size_t>(ii) * nb +
                              static_cast<std::size_t>(jj)] >= w) {
                        strict = false;
                        break;
                    }
                }
            }
            if (strict) cands.push_back({m, s.alphas[i], s.betas[j], v});
        }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.mag != b.mag) return a.mag > b.mag;
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        return a.beta < b.beta;
    });
    std::vector<ScalogramExtremum> kept;
    for (const Cand& c : cands) {
        bool blocked = false;
        for (const ScalogramExtremum& k : kept) {
            if (std::fabs(c.alpha - k.alpha) <= excl_alpha &&
                std::fabs(c.beta - k.beta) <= excl_beta) {
                blocked = true;
                break;
            }
        }
        if (!blocked) kept.push_back({c.alpha, c.beta, c.value, c.value > 0.0});
    }
    return kept;
}

double ysat_from_cwt(double alpha, double cwt_value) {
    if (!(alpha > 0.0)) throw ParamError("ysat_from_cwt: alpha must be positive");
    return kSqrt30 * alpha * cwt_value;
}

double ysat_from_cwt(const ScalogramExtremum& e) {
    return ysat_from_cwt(e.alpha, e.cwt_value);
}

void save_scalogram_csv(const Scalogram& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path);
    char buf[64];
    for (double b : s.betas) {
        std::snprintf(buf, sizeof(buf), "%.17g", b);
        out << ',' << buf;
    }
    out << '\n';
    for (std::size_t i = 0; i < s.alphas.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", s.alphas[i]);
        out << buf;
        for (std::size_t j = 0; j < s.betas.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", s.at(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw InputError("write failed: " + path);
}

} // namespace logwave
