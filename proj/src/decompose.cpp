#include "decompose.hpp"

#include "bvls.hpp"
#include "common.hpp"
#include "scalogram.hpp"
#include "wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <thread>
#include <utility>

namespace logwave {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCarrierMinAlpha = 30.0;
constexpr double kCarrierLadder[] = {30.0, 42.0, 58.0, 80.0, 110.0, 150.0};
constexpr double kDetailLadder[] = {1.5, 2.5, 4.0, 6.5, 10.0, 16.0, 24.0};

// Internal wave record: parameters plus the fixed box the local search may
// roam in.
struct Rec {
    double a, b, ys;
    double alo, ahi, blo, bhi;
};

std::vector<Rec> live(const std::vector<Rec>& recs) {
    std::vector<Rec> out;
    out.reserve(recs.size());
    for (const Rec& r : recs)
        if (r.ys != 0.0) out.push_back(r);
    return out;
}

double median_abs(const std::vector<double>& v) {
    if (v.empty()) throw ParamError("median of empty range");
    std::vector<double> w;
    w.reserve(v.size());
    for (double x : v) w.push_back(std::fabs(x));
    std::sort(w.begin(), w.end());
    const std::size_t n = w.size();
    if (n % 2 == 1) return w[n / 2];
    return 0.5 * (w[n / 2 - 1] + w[n / 2]);
}

std::vector<double> arange(double lo, double hi_inclusive, double step) {
    std::vector<double> out;
    const long long count =
        static_cast<long long>(std::floor((hi_inclusive - lo) / step + 0.5)) + 1;
    out.reserve(static_cast<std::size_t>(std::max(0LL, count)));
    for (long long k = 0; k < count; ++k)
        out.push_back(lo + static_cast<double>(k) * step);
    return out;
}

double sech2_half(double z) {
    const double e = std::exp(-2.0 * std::fabs(z));
    const double den = 1.0 + e;
    return 4.0 * e / (den * den);
}

void parallel_rows(std::size_t nrows, const std::function<void(std::size_t)>& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned nt = static_cast<unsigned>(
        std::min<std::size_t>(hw, std::max<std::size_t>(1, nrows)));
    if (nt == 1) {
        for (std::size_t i = 0; i < nrows; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = t; i < nrows; i += nt) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Windowed scalogram for the internal scans: the wavelet's mass lives within
// ~12 scales of its center, so each coefficient only sums that slice.
std::vector<double> windowed_scalogram(const std::vector<double>& sig,
                                       const std::vector<double>& alphas,
                                       const std::vector<double>& betas) {
    const std::size_t n = sig.size();
    std::vector<double> S(alphas.size() * betas.size(), 0.0);
    parallel_rows(alphas.size(), [&](std::size_t i) {
        const double a = alphas[i];
        const double half = 12.0 * a;
        for (std::size_t j = 0; j < betas.size(); ++j) {
            const double b = betas[j];
            const long long lo =
                std::max(0LL, static_cast<long long>(b - half) - 1);
            const long long hi = std::min(static_cast<long long>(n),
                                          static_cast<long long>(b + half) + 1);
            double acc = 0.0;
            for (long long k = lo; k < hi; ++k)
                acc += sig[static_cast<std::size_t>(k)] *
                       psi2((static_cast<double>(k) + 1.0 - b) / a);
            S[i * betas.size() + j] = acc;
        }
    });
    return S;
}

double cwt_full(const std::vector<double>& sig, double a, double b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < sig.size(); ++k)
        acc += sig[k] * psi2((static_cast<double>(k) + 1.0 - b) / a);
    return acc;
}

struct ExtCand {
    double mag; // raw |S|
    double alpha, beta;
    double value; // signed S
};

// Strict local maxima of |S|/sqrt(alpha), thresholded and ordered on the raw
// magnitude, deduplicated with the (2, 6) exclusion box.
std::vector<ExtCand> find_extrema_norm(const std::vector<double>& S,
                                       const std::vector<double>& alphas,
                                       const std::vector<double>& betas,
                                       double min_abs) {
    const std::size_t na = alphas.size(), nb = betas.size();
    std::vector<double> W(S.size());
    for (std::size_t i = 0; i < na; ++i) {
        const double inv = 1.0 / std::sqrt(alphas[i]);
        for (std::size_t j = 0; j < nb; ++j)
            W[i * nb + j] = std::fabs(S[i * nb + j]) * inv;
    }
    std::vector<ExtCand> cands;
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            const double raw = std::fabs(S[i * nb + j]);
            if (raw < min_abs) continue;
            const double w = W[i * nb + j];
            bool ok = true;
            for (long long di = -1; di <= 1 && ok; ++di) {
                for (long long dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const long long ii = static_cast<long long>(i) + di;
                    const long long jj = static_cast<long long>(j) + dj;
                    if (ii < 0 || jj < 0 || ii >= static_cast<long long>(na) ||
                        jj >= static_cast<long long>(nb))
                        continue;
                    if (W[static_cast<std::size_t>(ii) * nb +
                          static_cast<std::size_t>(jj)] >= w) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) cands.push_back({raw, alphas[i], betas[j], S[i * nb + j]});
        }
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const ExtCand& x, const ExtCand& y) { return x.mag > y.mag; });
    std::vector<ExtCand> kept;
    for (const ExtCand& c : cands) {
        bool clear = true;
        for (const ExtCand& k : kept) {
            if (std::fabs(c.alpha - k.alpha) <= 2.0 &&
                std::fabs(c.beta - k.beta) <= 6.0) {
                clear = false;
                break;
            }
        }
        if (clear) kept.push_back(c);
    }
    return kept;
}

// Pattern-search polish of one extremum of |cwt|/sqrt(alpha); b is free to
// roam over the whole signal.
void refine_extremum(const std::vector<double>& sig, double a0, double b0,
                     double alo, double ahi, double& ra, double& rb,
                     double& rv) {
    double a = a0, b = b0;
    const double blo = 1.0, bhi = static_cast<double>(sig.size());
    auto f = [&](double aa, double bb) {
        return std::fabs(cwt_full(sig, aa, bb)) / std::sqrt(aa);
    };
    double cur = f(a, b);
    double sa = std::max(0.25, a0 * 0.15), sb = 0.5;
    for (int it = 0; it < 300; ++it) {
        bool imp = false;
        for (double da : {sa, -sa}) {
            const double aa = std::clamp(a + da, alo, ahi);
            const double v = f(aa, b);
            if (v > cur) {
                a = aa;
                cur = v;
                imp = true;
            }
        }
        for (double db : {sb, -sb}) {
            const double bb = std::clamp(b + db, blo, bhi);
            const double v = f(a, bb);
            if (v > cur) {
                b = bb;
                cur = v;
                imp = true;
            }
        }
        if (!imp) {
            sa *= 0.5;
            sb *= 0.5;
            if (sa < 1e-3 && sb < 1e-3) break;
        }
    }
    ra = a;
    rb = b;
    rv = cwt_full(sig, a, b);
}

struct Cand {
    double amp; // |y_sat| / (4a)
    double a, b, ysat;
};

std::vector<Cand> carrier_candidates(const std::vector<double>& sig,
                                     double alpha_hi) {
    const auto alphas = arange(1.0, alpha_hi, 1.0);
    const auto betas = arange(1.0, static_cast<double>(sig.size()), 1.0);
    const auto S = windowed_scalogram(sig, alphas, betas);
    const auto exts = find_extrema_norm(S, alphas, betas, 0.0);
    std::vector<Cand> out;
    for (const ExtCand& e : exts) {
        if (e.alpha < kCarrierMinAlpha) continue;
        double ra, rb, rv;
        refine_extremum(sig, e.alpha, e.beta, 1.0, alpha_hi, ra, rb, rv);
        if (ra < kCarrierMinAlpha) continue;
        const double ysat = ysat_from_cwt(ra, rv);
        out.push_back({std::fabs(ysat) / (4.0 * ra), ra, rb, ysat});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Cand& x, const Cand& y) { return x.amp > y.amp; });
    return out;
}

// Returns refined candidates below the carrier band, strongest first.
// abs_override > 0 replaces the median-based threshold.
std::vector<Cand> detail_scan(const std::vector<double>& sig, double alpha_hi,
                              double thresh_scale, double abs_override) {
    const auto alphas = arange(1.0, alpha_hi + 1e-4, 0.5);
    const auto betas = arange(1.0, static_cast<double>(sig.size()), 1.0);
    const auto S = windowed_scalogram(sig, alphas, betas);
    const double min_abs =
        abs_override > 0.0 ? abs_override : thresh_scale * median_abs(S);
    const auto exts = find_extrema_norm(S, alphas, betas, min_abs);
    std::vector<Cand> out;
    for (const ExtCand& e : exts) {
        double ra, rb, rv;
        refine_extremum(sig, e.alpha, e.beta, 1.0, alpha_hi, ra, rb, rv);
        if (ra >= 0.9 * alpha_hi) continue; // drifted into the carrier band
        bool dup = false;
        for (const Cand& c : out) {
            if (!(std::fabs(rb - c.b) > 6.0 || std::fabs(ra - c.a) > 2.0)) {
                dup = true;
                break;
            }
        }
        if (dup) continue;
        const double ysat = ysat_from_cwt(ra, rv);
        out.push_back({std::fabs(ysat) / (4.0 * ra), ra, rb, ysat});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Cand& x, const Cand& y) { return x.amp > y.amp; });
    return out;
}

// Bounded least squares over the amplitudes, intercept free. Columns and the
// Gram matrix are cached between calls; the local search mutates one wave at
// a time, so only the touched column is rebuilt.
class Fitter {
public:
    explicit Fitter(const std::vector<double>& x) : x_(x), n_(x.size()) {
        double mx = x_[0], mn = x_[0], s = 0.0;
        for (double v : x_) {
            mx = std::max(mx, v);
            mn = std::min(mn, v);
            s += v;
        }
        cap_amp_ = 1.5 * (mx - mn);
        mean_ = s / static_cast<double>(n_);
        sst_ = 0.0;
        for (double v : x_) sst_ += (v - mean_) * (v - mean_);
        sum_x_ = s;
    }

    double sst() const { return sst_; }
    std::size_t n() const { return n_; }
    const std::vector<double>& x() const { return x_; }

    struct Out {
        double d = 0.0;
        std::vector<double> ys;
        double ssr = 0.0;
    };

    Out obj(const std::vector<Rec>& recs) {
        const std::size_t k = recs.size();
        if (k == 0) {
            Out o;
            o.d = mean_;
            o.ssr = sst_;
            return o;
        }
        sync_slots(recs);
        const std::size_t dim = k + 1;
        std::vector<double> g(dim * dim), c(dim), lo(dim), hi(dim);
        g[0] = static_cast<double>(n_); // variable order: [d, w_0 .. w_{k-1}]
        c[0] = sum_x_;
        for (std::size_t i = 0; i < k; ++i) {
            g[i + 1] = slots_[i].dot_ones;
            g[(i + 1) * dim] = slots_[i].dot_ones;
            c[i + 1] = slots_[i].dot_x;
            for (std::size_t j = 0; j <= i; ++j) {
                const double v = cross_[i * k + j];
                g[(i + 1) * dim + (j + 1)] = v;
                g[(j + 1) * dim + (i + 1)] = v;
            }
        }
        lo[0] = -kInf;
        hi[0] = kInf;
        for (std::size_t i = 0; i < k; ++i) {
            const double cap = cap_amp_ * 4.0 * recs[i].a;
            if (recs[i].ys >= 0.0) {
                lo[i + 1] = 0.0;
                hi[i + 1] = cap;
            } else {
                lo[i + 1] = -cap;
                hi[i + 1] = 0.0;
            }
        }
        const std::vector<double> z = bvls_solve(g, c, lo, hi);
        Out o;
        o.d = z[0];
        o.ys.assign(z.begin() + 1, z.end());
        // Residual computed explicitly: the quadratic-form shortcut loses
        // ~10 digits to cancellation at these magnitudes.
        double ssr = 0.0;
        for (std::size_t t = 0; t < n_; ++t) {
            double m = z[0];
            for (std::size_t i = 0; i < k; ++i) m += z[i + 1] * slots_[i].col[t];
            const double r = x_[t] - m;
            ssr += r * r;
        }
        o.ssr = ssr;
        return o;
    }

    // Refit amplitudes in place; returns (d, ssr).
    std::pair<double, double> resolve(std::vector<Rec>& recs) {
        Out o = obj(recs);
        for (std::size_t i = 0; i < recs.size(); ++i) recs[i].ys = o.ys[i];
        return {o.d, o.ssr};
    }

    std::pair<double, double> r2_of(const std::vector<Rec>& recs,
                                    double d) const {
        double ss = 0.0;
        for (std::size_t t = 0; t < n_; ++t) {
            const double r = x_[t] - model_at(recs, d, static_cast<double>(t) + 1.0);
            ss += r * r;
        }
        return {1.0 - ss / sst_, std::sqrt(ss / static_cast<double>(n_))};
    }

    std::vector<double> model_values(const std::vector<Rec>& recs, double d) const {
        std::vector<double> m(n_, d);
        for (const Rec& w : recs) {
            if (w.ys == 0.0) continue;
            const double amp = w.ys / (4.0 * w.a);
            const double inv = 1.0 / (2.0 * w.a);
            for (std::size_t t = 0; t < n_; ++t)
                m[t] += amp * sech2_half((static_cast<double>(t) + 1.0 - w.b) * inv);
        }
        return m;
    }

private:
    static double model_at(const std::vector<Rec>& recs, double d, double tt) {
        double m = d;
        for (const Rec& w : recs)
            if (w.ys != 0.0)
                m += (w.ys / (4.0 * w.a)) * sech2_half((tt - w.b) / (2.0 * w.a));
        return m;
    }

    struct Slot {
        double a = std::numeric_limits<double>::quiet_NaN();
        double b = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> col;
        double dot_ones = 0.0, dot_x = 0.0;
    };

    void sync_slots(const std::vector<Rec>& recs) {
        const std::size_t k = recs.size();
        if (slots_.size() != k) {
            slots_.assign(k, Slot{});
            cross_.assign(k * k, 0.0);
        }
        std::vector<std::size_t> dirty;
        for (std::size_t i = 0; i < k; ++i) {
            if (slots_[i].a == recs[i].a && slots_[i].b == recs[i].b) continue;
            Slot& s = slots_[i];
            s.a = recs[i].a;
            s.b = recs[i].b;
            s.col.resize(n_);
            const double inv = 1.0 / (2.0 * recs[i].a);
            const double scale = 1.0 / (4.0 * recs[i].a);
            double dones = 0.0, dx = 0.0;
            for (std::size_t t = 0; t < n_; ++t) {
                const double v = scale *
                    sech2_half((static_cast<double>(t) + 1.0 - recs[i].b) * inv);
                s.col[t] = v;
                dones += v;
                dx += v * x_[t];
            }
            s.dot_ones = dones;
            s.dot_x = dx;
            dirty.push_back(i);
        }
        for (std::size_t p : dirty) {
            for (std::size_t j = 0; j < k; ++j) {
                const double* cp = slots_[p].col.data();
                const double* cj = slots_[j].col.data();
                double acc = 0.0;
                for (std::size_t t = 0; t < n_; ++t) acc += cp[t] * cj[t];
                cross_[p * k + j] = acc;
                cross_[j * k + p] = acc;
            }
        }
    }

    std::vector<double> x_;
    std::size_t n_;
    double cap_amp_, mean_, sst_, sum_x_;
    std::vector<Slot> slots_;
    std::vector<double> cross_;
};

Rec mk_wave(double a, double b, double ys, double alo, double ahi, double blo,
            double bhi, std::size_t n) {
    Rec r;
    r.a = a;
    r.b = b;
    r.ys = ys;
    r.alo = std::max(alo, 0.5);
    r.ahi = ahi;
    r.blo = std::max(blo, 1.0);
    r.bhi = std::min(bhi, static_cast<double>(n));
    return r;
}

Rec mk_carrier(double s, double b_seed, double ys, std::size_t n) {
    return mk_wave(s, b_seed, ys, 27.0, 240.0, b_seed - 4.0, b_seed + 4.0, n);
}

Rec mk_detail(const Cand& c, std::size_t n, double band_cap) {
    const double ahi = std::min(std::max(2.0 * c.a, c.a + 2.0), band_cap);
    const double bw = std::max(3.0 * c.a, 4.0);
    return mk_wave(c.a, c.b, c.ysat, 0.5 * c.a, ahi, c.b - bw, c.b + bw, n);
}

struct HjOut {
    double d;
    std::vector<Rec> waves;
    double ssr;
    bool converged;
};

// Hooke-Jeeves sweep over (a, b) of the selected waves (8 directions with a
// running best per wave, then a line extension along the winner), amplitudes
// refit by bounded least squares at every probe. Monotone in the objective.
HjOut hj_refine(Fitter& F, std::vector<Rec> waves,
                const std::vector<std::size_t>& which, int max_sweeps = 40) {
    const std::size_t k = waves.size();
    if (k == 0) {
        Fitter::Out o = F.obj(waves);
        return {o.d, std::move(waves), o.ssr, true};
    }
    std::vector<std::size_t> idxs = which;
    if (idxs.empty()) {
        idxs.resize(k);
        std::iota(idxs.begin(), idxs.end(), std::size_t{0});
    }
    for (Rec& w : waves) {
        w.a = std::clamp(w.a, w.alo, w.ahi);
        w.b = std::clamp(w.b, w.blo, w.bhi);
    }
    Fitter::Out start = F.obj(waves);
    double d = start.d, ssr = start.ssr;
    std::vector<double> ys = std::move(start.ys);

    std::vector<double> sa(k), sb(k);
    for (std::size_t i = 0; i < k; ++i) {
        sa[i] = std::max(0.05, waves[i].a * 0.08);
        sb[i] = std::max(0.5, waves[i].a * 0.08);
    }
    const double tol = 1e-9;
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool improved = false;
        for (std::size_t i : idxs) {
            const double dirs[8][2] = {
                {sa[i], 0.0},   {-sa[i], 0.0},  {0.0, sb[i]},   {0.0, -sb[i]},
                {sa[i], sb[i]}, {sa[i], -sb[i]}, {-sa[i], sb[i]}, {-sa[i], -sb[i]}};
            const double a0 = waves[i].a, b0 = waves[i].b;
            double bda = 0.0, bdb = 0.0, bd = d, bssr = ssr;
            std::vector<double> bys;
            bool found = false;
            for (const auto& st : dirs) {
                const double aa = std::clamp(a0 + st[0], waves[i].alo, waves[i].ahi);
                const double bb = std::clamp(b0 + st[1], waves[i].blo, waves[i].bhi);
                if (aa == a0 && bb == b0) continue;
                waves[i].a = aa;
                waves[i].b = bb;
                Fitter::Out p = F.obj(waves);
                waves[i].a = a0;
                waves[i].b = b0;
                if (p.ssr < bssr - tol) {
                    bda = st[0];
                    bdb = st[1];
                    bd = p.d;
                    bys = std::move(p.ys);
                    bssr = p.ssr;
                    found = true;
                }
            }
            if (!found) continue;
            waves[i].a = std::clamp(a0 + bda, waves[i].alo, waves[i].ahi);
            waves[i].b = std::clamp(b0 + bdb, waves[i].blo, waves[i].bhi);
            d = bd;
            ys = std::move(bys);
            ssr = bssr;
            improved = true;
            for (int ext = 0; ext < 60; ++ext) {
                const double pa = waves[i].a, pb = waves[i].b;
                const double na = std::clamp(pa + bda, waves[i].alo, waves[i].ahi);
                const double nb = std::clamp(pb + bdb, waves[i].blo, waves[i].bhi);
                if (na == pa && nb == pb) break;
                waves[i].a = na;
                waves[i].b = nb;
                Fitter::Out p = F.obj(waves);
                if (p.ssr < ssr - tol) {
                    d = p.d;
                    ys = std::move(p.ys);
                    ssr = p.ssr;
                } else {
                    waves[i].a = pa;
                    waves[i].b = pb;
                    break;
                }
            }
        }
        if (!improved) {
            double ma = 0.0, mb = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                sa[i] *= 0.5;
                sb[i] *= 0.5;
                ma = std::max(ma, sa[i]);
                mb = std::max(mb, sb[i]);
            }
            if (ma < 1e-3 && mb < 1e-3) {
                converged = true;
                break;
            }
        }
    }
    for (std::size_t i = 0; i < k; ++i) waves[i].ys = ys[i];
    return {d, std::move(waves), ssr, converged};
}

// Single pass: keep only waves whose removal (with the rest refit) costs at
// least tol of the total variance.
std::vector<Rec> cull(Fitter& F, const std::vector<Rec>& waves, double ssr,
                      double tol) {
    std::vector<Rec> keep;
    for (std::size_t i = 0; i < waves.size(); ++i) {
        std::vector<Rec> rest;
        rest.reserve(waves.size() - 1);
        for (std::size_t j = 0; j < waves.size(); ++j)
            if (j != i) rest.push_back(waves[j]);
        Fitter::Out o = F.obj(rest);
        if ((o.ssr - ssr) / F.sst() >= tol) keep.push_back(waves[i]);
    }
    return keep;
}

struct FitState {
    double d;
    std::vector<Rec> waves;
    double ssr;
};

// Merge near-duplicates: comparable scales, nearly identical centers. The
// smaller-amplitude twin is dropped, then amplitudes are refit.
FitState merge_guard(Fitter& F, std::vector<Rec> waves) {
    bool changed = true;
    while (changed && waves.size() > 1) {
        changed = false;
        for (std::size_t i = 0; i < waves.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < waves.size(); ++j) {
                const Rec& wi = waves[i];
                const Rec& wj = waves[j];
                const double ratio = std::max(wi.a, wj.a) /
                                     std::max(std::min(wi.a, wj.a), 1e-9);
                if (ratio < 2.0 &&
                    std::fabs(wi.b - wj.b) < 0.35 * std::min(wi.a, wj.a)) {
                    const double ai = std::fabs(wi.ys) / (4.0 * wi.a);
                    const double aj = std::fabs(wj.ys) / (4.0 * wj.a);
                    const std::size_t drop = ai < aj ? i : j;
                    waves.erase(waves.begin() + static_cast<std::ptrdiff_t>(drop));
                    changed = true;
                    break;
                }
            }
        }
    }
    auto [d, ssr] = F.resolve(waves);
    return {d, std::move(waves), ssr};
}

struct SweepOut {
    double d;
    std::vector<Rec> waves;
    double ssr;
    bool moved;
};

// Restart each wave's scale from a ladder of seeds; keep the best basin.
SweepOut remultistart(Fitter& F, std::vector<Rec> waves, double d, double ssr,
                      bool details_too) {
    bool moved = false;
    for (std::size_t i = 0; i < waves.size(); ++i) {
        const bool is_carrier = waves[i].a >= 27.0;
        if (!is_carrier && !details_too) continue;
        std::set<double> seeds;
        if (is_carrier)
            for (double s : kCarrierLadder) seeds.insert(s);
        else
            for (double s : kDetailLadder) seeds.insert(s);
        seeds.insert(waves[i].a);
        double bd = d, bssr = ssr;
        std::vector<Rec> bw;
        bool better = false;
        for (double s : seeds) {
            if (s < waves[i].alo || s > waves[i].ahi) continue;
            std::vector<Rec> trial = waves;
            trial[i].a = s;
            HjOut h = hj_refine(F, std::move(trial), {i});
            if (h.ssr < bssr - 1e-9) {
                bd = h.d;
                bw = std::move(h.waves);
                bssr = h.ssr;
                better = true;
            }
        }
        if (better && bssr < ssr - 1e-6 * std::max(ssr, 1.0)) {
            d = bd;
            waves = std::move(bw);
            ssr = bssr;
            moved = true;
        }
    }
    return {d, std::move(waves), ssr, moved};
}

// Re-derive each wave's anchor from its own partial residual (everything
// else subtracted out, then differenced); accept drift-tolerant moves.
FitState reanchor_guarded(Fitter& F, std::vector<Rec> waves) {
    const std::size_t n = F.n();
    waves = live(waves);
    double d, ssr;
    std::tie(d, ssr) = F.resolve(waves);
    for (int sweep = 0; sweep < 2; ++sweep) {
        double moved = 0.0;
        std::vector<std::size_t> order(waves.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t x, std::size_t y) {
                             return std::fabs(waves[x].ys) / (4.0 * waves[x].a) >
                                    std::fabs(waves[y].ys) / (4.0 * waves[y].a);
                         });
        for (std::size_t i : order) {
            const Rec w = waves[i];
            if (w.b > static_cast<double>(n) - 1.2 * w.a ||
                w.b < 1.0 + 1.2 * w.a)
                continue; // centered off the window edge; leave it alone
            std::vector<Rec> others;
            others.reserve(waves.size() - 1);
            for (std::size_t j = 0; j < waves.size(); ++j)
                if (j != i) others.push_back(waves[j]);
            const std::vector<double> mo = F.model_values(others, d);
            std::vector<double> part(n - 1);
            for (std::size_t t = 0; t + 1 < n; ++t)
                part[t] = (F.x()[t + 1] - mo[t + 1]) - (F.x()[t] - mo[t]);
            double ra, rb, rv;
            refine_extremum(part, w.a, w.b, w.alo, w.ahi, ra, rb, rv);
            rb = std::clamp(rb, w.blo, w.bhi);
            if (std::fabs(ra - w.a) / w.a < 0.02 && std::fabs(rb - w.b) < 0.25)
                continue;
            std::vector<Rec> trial = waves;
            trial[i].a = ra;
            trial[i].b = rb;
            auto [td, tssr] = F.resolve(trial);
            if (tssr <= ssr * 1.02) {
                moved = std::max(moved, std::fabs(ra - w.a) / w.a);
                waves = std::move(trial);
                d = td;
                ssr = tssr;
            }
        }
        FitState m = merge_guard(F, live(waves));
        waves = live(m.waves);
        std::tie(d, ssr) = F.resolve(waves);
        if (moved < 0.02) break;
    }
    return {d, std::move(waves), ssr};
}

struct GreedyOut {
    double d;
    std::vector<Rec> waves;
    double ssr;
    bool added;
};

// Detail passes: scan the differenced residual, trial each candidate with a
// local refinement of itself plus overlapping small waves.
GreedyOut greedy_details(Fitter& F, std::vector<Rec> waves, double d,
                         double ssr, std::size_t max_waves, double stop_r2,
                         double detail_alpha_max, double abs_override,
                         bool refine) {
    const std::size_t n = F.n();
    const double band_cap = 0.9 * detail_alpha_max;
    bool added_any = false;
    for (int scan = 0; scan < 3; ++scan) {
        {
            auto [r2, rmse] = F.r2_of(waves, d);
            (void)rmse;
            if (waves.size() >= max_waves || r2 >= stop_r2) break;
        }
        const std::vector<double> model = F.model_values(waves, d);
        std::vector<double> dresid(n - 1);
        for (std::size_t t = 0; t + 1 < n; ++t)
            dresid[t] = (F.x()[t + 1] - model[t + 1]) - (F.x()[t] - model[t]);
        std::vector<Cand> details =
            detail_scan(dresid, detail_alpha_max, 3.0, abs_override);
        {
            std::vector<Cand> filt;
            for (const Cand& c : details) {
                bool clear = true;
                for (const Rec& w : waves) {
                    if (!(std::fabs(c.b - w.b) > 6.0 || std::fabs(c.a - w.a) > 2.0)) {
                        clear = false;
                        break;
                    }
                }
                if (clear) filt.push_back(c);
            }
            details = std::move(filt);
        }
        if (details.empty()) break;
        bool added_this = false;
        for (const Cand& cand : details) {
            {
                auto [r2, rmse] = F.r2_of(waves, d);
                (void)rmse;
                if (waves.size() >= max_waves || r2 >= stop_r2) break;
            }
            std::vector<Rec> trial = waves;
            trial.push_back(mk_detail(cand, n, band_cap));
            const std::size_t newi = trial.size() - 1;
            double td, tssr;
            std::vector<Rec> tw;
            if (refine) {
                std::vector<std::size_t> which = {newi};
                for (std::size_t j = 0; j < newi; ++j)
                    if (trial[j].a < 27.0 &&
                        std::fabs(trial[j].b - cand.b) <=
                            3.0 * (trial[j].a + cand.a))
                        which.push_back(j);
                HjOut h = hj_refine(F, std::move(trial), which);
                td = h.d;
                tw = std::move(h.waves);
                tssr = h.ssr;
            } else {
                std::tie(td, tssr) = F.resolve(trial);
                tw = std::move(trial);
            }
            if ((ssr - tssr) / std::max(ssr, 1e-12) < 1e-4) continue;
            waves = live(tw);
            std::tie(d, ssr) = F.resolve(waves);
            (void)td;
            added_this = added_any = true;
        }
        if (!added_this) break;
    }
    return {d, std::move(waves), ssr, added_any};
}

FitState run_pipeline(const std::vector<double>& x,
                      const DecompositionConfig& cfg) {
    const std::size_t n = x.size();
    Fitter F(x);
    const double detail_alpha_max = cfg.detail_alpha_max;
    const double band_cap = 0.9 * detail_alpha_max;
    const double abs_override = cfg.min_abs_cwt;
    const std::size_t max_waves = static_cast<std::size_t>(cfg.max_waves);

    std::vector<double> dx(n - 1);
    for (std::size_t t = 0; t + 1 < n; ++t) dx[t] = x[t + 1] - x[t];

    double d, ssr;
    {
        std::vector<Rec> none;
        Fitter::Out o = F.obj(none);
        d = o.d;
        ssr = o.ssr;
    }

    // Scaffold: the strongest small-scale features, trialed alongside every
    // carrier so a carrier can't swallow their mass.
    std::vector<Rec> scaffold;
    {
        const double ov = abs_override > 0.0 ? 0.5 * abs_override : -1.0;
        std::vector<Cand> sc = detail_scan(dx, detail_alpha_max, 1.5, ov);
        if (sc.size() > 16) sc.resize(16);
        for (const Cand& c : sc) scaffold.push_back(mk_detail(c, n, band_cap));
    }
    const std::size_t ns = scaffold.size();

    // Carrier queue, strongest first, weak tail dropped.
    std::deque<Cand> queue;
    {
        std::vector<Cand> cc = carrier_candidates(dx, cfg.carrier_alpha_max);
        if (!cc.empty()) {
            const double floor_amp = 0.2 * cc[0].amp;
            for (const Cand& c : cc)
                if (c.amp >= floor_amp) queue.push_back(c);
        }
    }

    std::vector<Rec> carriers;
    std::deque<Cand> deferred;
    std::map<std::pair<long long, long long>, int> defer_ct;
    int rescans = 0;
    while (carriers.size() < max_waves) {
        {
            std::deque<Cand> q2;
            for (const Cand& c : queue) {
                bool clear = true;
                for (const Rec& w : carriers)
                    if (!(std::fabs(c.a - w.a) > 2.0 ||
                          std::fabs(c.b - w.b) > 6.0)) {
                        clear = false;
                        break;
                    }
                if (clear) q2.push_back(c);
            }
            queue = std::move(q2);
        }
        if (queue.empty()) {
            if (!deferred.empty()) {
                queue = std::move(deferred);
                deferred.clear();
                continue;
            }
            if (rescans >= 2) break;
            ++rescans;
            std::vector<Rec> cur = carriers;
            for (const Rec& s : scaffold) cur.push_back(s);
            const std::vector<double> model = F.model_values(cur, d);
            std::vector<double> dresid(n - 1);
            for (std::size_t t = 0; t + 1 < n; ++t)
                dresid[t] = (x[t + 1] - model[t + 1]) - (x[t] - model[t]);
            std::vector<Cand> cc =
                carrier_candidates(dresid, cfg.carrier_alpha_max);
            for (const Cand& c : cc) {
                bool clear = true;
                for (const Rec& w : carriers)
                    if (!(std::fabs(c.a - w.a) > 2.0 ||
                          std::fabs(c.b - w.b) > 6.0)) {
                        clear = false;
                        break;
                    }
                if (clear) queue.push_back(c);
            }
            if (queue.empty()) break;
        }
        const Cand cand = queue.front();
        queue.pop_front();
        const double b_seed = std::min(cand.b, static_cast<double>(n));

        std::set<double> ladder;
        for (double s : kCarrierLadder)
            if (s >= 30.0 && s <= 160.0) ladder.insert(s);
        if (cand.a >= 30.0 && cand.a <= 160.0) ladder.insert(cand.a);

        double best_d = 0.0, best_ssr = kInf;
        std::vector<Rec> best_trial;
        for (double rung : ladder) {
            std::vector<Rec> all = carriers;
            all.push_back(mk_carrier(rung, b_seed, cand.ysat, n));
            const std::size_t last = all.size() - 1;
            for (const Rec& s : scaffold) all.push_back(s);
            HjOut h;
            if (cfg.refine) {
                h = hj_refine(F, std::move(all), {last});
            } else {
                auto [rd, rs] = F.resolve(all);
                h = HjOut{rd, std::move(all), rs, true};
            }
            if (h.ssr < best_ssr) {
                best_d = h.d;
                best_ssr = h.ssr;
                best_trial.assign(h.waves.begin(),
                                  h.waves.begin() +
                                      static_cast<std::ptrdiff_t>(last + 1));
            }
        }
        const auto key = std::make_pair(
            static_cast<long long>(std::llround(cand.a * 10.0)),
            static_cast<long long>(std::llround(cand.b * 10.0)));
        if (!best_trial.empty() && best_trial.back().ys == 0.0 &&
            defer_ct[key] < 2) {
            // The solve zeroed the newcomer outright — likely shadowed by a
            // carrier not yet in the model. Park it; retry after the next
            // acceptance.
            ++defer_ct[key];
            deferred.push_back(cand);
            continue;
        }
        if ((ssr - best_ssr) / F.sst() < 1e-3) continue;
        carriers = std::move(best_trial);
        d = best_d;
        ssr = best_ssr;
        if (!deferred.empty()) {
            // Anything parked gets first crack at the enlarged model.
            while (!deferred.empty()) {
                queue.push_front(deferred.back());
                deferred.pop_back();
            }
        }
        {
            std::vector<Rec> all = live(carriers);
            for (const Rec& s : scaffold) all.push_back(s);
            FitState m = merge_guard(F, std::move(all));
            d = m.d;
            ssr = m.ssr;
            const std::size_t nc = m.waves.size() >= ns ? m.waves.size() - ns : 0;
            carriers.assign(m.waves.begin(),
                            m.waves.begin() + static_cast<std::ptrdiff_t>(nc));
        }
        if (cfg.refine && carriers.size() >= 2) {
            std::vector<Rec> all = live(carriers);
            for (const Rec& s : scaffold) all.push_back(s);
            SweepOut sw = remultistart(F, std::move(all), d, ssr, false);
            d = sw.d;
            ssr = sw.ssr;
            const std::size_t nc =
                sw.waves.size() >= ns ? sw.waves.size() - ns : 0;
            carriers.assign(sw.waves.begin(),
                            sw.waves.begin() + static_cast<std::ptrdiff_t>(nc));
        }
    }

    std::vector<Rec> waves = std::move(carriers);
    std::tie(d, ssr) = F.resolve(waves);

    // Alternating rounds: add details, polish everything, restart scales.
    for (int round = 0; round < 3; ++round) {
        GreedyOut g = greedy_details(F, std::move(waves), d, ssr, max_waves,
                                     cfg.stop_r2, detail_alpha_max,
                                     abs_override, cfg.refine);
        waves = std::move(g.waves);
        d = g.d;
        ssr = g.ssr;
        bool moved = false;
        if (cfg.refine) {
            for (int it = 0; it < 3; ++it) {
                const double prev = ssr;
                HjOut h = hj_refine(F, std::move(waves), {});
                FitState m = merge_guard(F, live(h.waves));
                waves = std::move(m.waves);
                d = m.d;
                ssr = m.ssr;
                if (prev - ssr < 1e-9 * std::max(ssr, 1.0)) break;
            }
            SweepOut sw = remultistart(F, std::move(waves), d, ssr, round >= 1);
            waves = std::move(sw.waves);
            d = sw.d;
            ssr = sw.ssr;
            moved = sw.moved;
        }
        if (!g.added && !moved) break;
    }

    // Cleanup: drop dead weight, then re-derive each anchor from its own
    // partial residual.
    waves = cull(F, waves, ssr, 1e-4);
    std::tie(d, ssr) = F.resolve(waves);
    if (cfg.refine) {
        FitState r = reanchor_guarded(F, std::move(waves));
        waves = std::move(r.waves);
        d = r.d;
        ssr = r.ssr;
    }
    waves = live(waves);
    std::stable_sort(waves.begin(), waves.end(), [](const Rec& u, const Rec& v) {
        return std::fabs(u.ys) / (4.0 * u.a) > std::fabs(v.ys) / (4.0 * v.a);
    });
    return {d, std::move(waves), ssr};
}

void validate_config(const DecompositionConfig& cfg) {
    if (cfg.max_waves < 1) throw ParamError("max_waves must be >= 1");
    if (!(cfg.stop_r2 > 0.0) || cfg.stop_r2 > 1.0)
        throw ParamError("stop_r2 must lie in (0, 1]");
    if (!(cfg.detail_alpha_max > 1.0))
        throw ParamError("detail_alpha_max must exceed 1");
    if (!(cfg.carrier_alpha_max > cfg.detail_alpha_max))
        throw ParamError("carrier_alpha_max must exceed detail_alpha_max");
}

} // namespace

std::vector<LogisticWave> detect_waves(const TimeSeries& signal_diff,
                                       const DecompositionConfig& cfg,
                                       bool carrier_pass) {
    validate_config(cfg);
    if (signal_diff.size() < 8)
        throw InputError("differenced signal too short for detection");
    const auto alphas = carrier_pass
                            ? arange(1.0, cfg.carrier_alpha_max, 1.0)
                            : arange(1.0, cfg.detail_alpha_max + 1e-4, 0.5);
    const auto betas =
        arange(1.0, static_cast<double>(signal_diff.size()), 1.0);
    const Scalogram S = compute_scalogram(signal_diff.values, alphas, betas);
    double min_abs = cfg.min_abs_cwt;
    if (min_abs <= 0.0) min_abs = 3.0 * median_abs(S.values);
    const auto exts = find_extrema(S, min_abs, 2.0, 6.0);
    std::vector<LogisticWave> waves;
    waves.reserve(exts.size());
    for (const ScalogramExtremum& e : exts) {
        LogisticWave w;
        w.a = e.alpha;
        w.b = e.beta;
        w.y_sat = ysat_from_cwt(e);
        w.edge = false;
        waves.push_back(w);
    }
    std::stable_sort(waves.begin(), waves.end(),
                     [](const LogisticWave& u, const LogisticWave& v) {
                         return std::fabs(amplitude(u)) > std::fabs(amplitude(v));
                     });
    flag_edges(waves, signal_diff.size() + 1);
    return waves;
}

MultilogisticModel refine_parameters(const TimeSeries& series,
                                     const MultilogisticModel& m,
                                     const std::vector<std::size_t>& which,
                                     bool* converged) {
    if (series.size() < 2) throw InputError("series too short to refine");
    for (std::size_t i : which)
        if (i >= m.waves.size())
            throw ParamError("refinement index out of range");
    const std::size_t n = series.size();
    std::vector<std::size_t> sel = which;
    if (sel.empty())
        for (std::size_t i = 0; i < m.waves.size(); ++i) sel.push_back(i);
    std::sort(sel.begin(), sel.end());
    sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
    // Waves outside the selection keep (a, b, y_sat) verbatim; their
    // contribution is removed from the target so the fit never touches it.
    std::vector<char> chosen(m.waves.size(), 0);
    for (std::size_t i : sel) chosen[i] = 1;
    std::vector<double> target = series.values;
    std::vector<Rec> recs;
    recs.reserve(sel.size());
    for (std::size_t i = 0; i < m.waves.size(); ++i) {
        const LogisticWave& w = m.waves[i];
        if (!(w.a > 0.0)) throw ParamError("wave scale must be positive");
        if (chosen[i]) {
            recs.push_back(mk_wave(w.a, w.b, w.y_sat, 0.5 * w.a, 2.0 * w.a,
                                   w.b - 3.0 * w.a, w.b + 3.0 * w.a, n));
        } else {
            for (std::size_t t = 0; t < n; ++t)
                target[t] -= wave_term(w, static_cast<double>(t + 1));
        }
    }
    Fitter F(target);
    HjOut h = hj_refine(F, std::move(recs), {});
    if (converged) *converged = h.converged;
    MultilogisticModel out;
    out.c = m.c;
    out.d = h.d;
    out.waves = m.waves;
    for (std::size_t k = 0; k < sel.size(); ++k) {
        const Rec& r = h.waves[k];
        out.waves[sel[k]] = LogisticWave{r.a, r.b, r.ys, false};
    }
    flag_edges(out.waves, n);
    return out;
}

DecompositionResult decompose(const TimeSeries& series,
                              const DecompositionConfig& cfg) {
    validate_config(cfg);
    if (series.size() < 20)
        throw InputError(
            "series too short to decompose (need at least 20 points)");
    FitState p = run_pipeline(series.values, cfg);
    DecompositionResult res;
    res.model.c = 0.0; // integration constant; invisible to the fitted values
    res.model.d = p.d;
    res.model.waves.reserve(p.waves.size());
    for (const Rec& r : p.waves)
        res.model.waves.push_back(LogisticWave{r.a, r.b, r.ys, false});
    flag_edges(res.model.waves, series.size());
    TimeSeries pred;
    pred.start_label = series.start_label;
    pred.values.resize(series.size());
    for (std::size_t t = 0; t < series.size(); ++t)
        pred.values[t] =
            eval_multilogistic_derivative(res.model, static_cast<double>(t) + 1.0);
    res.fit = fit_metrics(series, pred);
    return res;
}

} // namespace logwave
