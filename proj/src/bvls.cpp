#include "bvls.hpp"
#include "common.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

namespace logwave {

namespace {

// LDL^T solve for a small symmetric system; adds a tiny diagonal shift and
// retries when a pivot collapses (near-collinear columns).
bool ldlt_solve(std::vector<double> m, std::vector<double> b, std::size_t n,
                std::vector<double>& out) {
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(m[i * n + i]));
    if (scale == 0.0) scale = 1.0;
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<double> a = m;
        if (attempt == 1)
            for (std::size_t i = 0; i < n; ++i) a[i * n + i] += 1e-12 * scale;
        std::vector<double> diag(n);
        bool ok = true;
        for (std::size_t j = 0; j < n && ok; ++j) {
            double dj = a[j * n + j];
            for (std::size_t k = 0; k < j; ++k)
                dj -= a[j * n + k] * a[j * n + k] * diag[k];
            if (!(std::fabs(dj) > 1e-14 * scale)) {
                ok = false;
                break;
            }
            diag[j] = dj;
            for (std::size_t i = j + 1; i < n; ++i) {
                double v = a[i * n + j];
                for (std::size_t k = 0; k < j; ++k)
                    v -= a[i * n + k] * a[j * n + k] * diag[k];
                a[i * n + j] = v / dj;
            }
        }
        if (!ok) continue;
        // forward, diagonal, backward
        std::vector<double> z = b;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < i; ++k) z[i] -= a[i * n + k] * z[k];
        for (std::size_t i = 0; i < n; ++i) z[i] /= diag[i];
        for (std::size_t ii = n; ii-- > 0;)
            for (std::size_t k = ii + 1; k < n; ++k) z[ii] -= a[k * n + ii] * z[k];
        out = z;
        return true;
    }
    return false;
}

enum class State { Free, AtLo, AtUp };

} // namespace

std::vector<double> bvls_solve(const std::vector<double>& gram,
                               const std::vector<double>& rhs,
                               const std::vector<double>& lo,
                               const std::vector<double>& hi) {
    const std::size_t n = rhs.size();
    if (gram.size() != n * n || lo.size() != n || hi.size() != n)
        throw ParamError("bvls_solve: inconsistent dimensions");
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> z(n, 0.0);
    std::vector<State> st(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (lo[j] > hi[j]) throw ParamError("bvls_solve: lo > hi");
        if (lo[j] == -inf && hi[j] == inf) {
            st[j] = State::Free;
            z[j] = 0.0;
        } else if (0.0 <= lo[j]) {
            st[j] = State::AtLo;
            z[j] = lo[j];
        } else if (0.0 >= hi[j]) {
            st[j] = State::AtUp;
            z[j] = hi[j];
        } else {
            st[j] = State::Free;
            z[j] = 0.0;
        }
    }

    double gscale = 0.0;
    for (std::size_t j = 0; j < n; ++j) gscale = std::max(gscale, std::fabs(gram[j * n + j]));
    if (gscale == 0.0) gscale = 1.0;
    double rscale = 0.0;
    for (std::size_t j = 0; j < n; ++j) rscale = std::max(rscale, std::fabs(rhs[j]));
    const double kkt_tol = 1e-11 * std::max(gscale, rscale);

    const std::size_t max_outer = 24 * n + 48;
    for (std::size_t outer = 0; outer < max_outer; ++outer) {
        // Inner loop: solve LS on the free set, clip along the segment to
        // stay feasible, binding blockers, until the free solution fits.
        for (std::size_t inner = 0; inner <= n + 1; ++inner) {
            std::vector<std::size_t> freev;
            for (std::size_t j = 0; j < n; ++j)
                if (st[j] == State::Free) freev.push_back(j);
            if (freev.empty()) break;

            const std::size_t k = freev.size();
            std::vector<double> gff(k * k), cf(k);
            for (std::size_t p = 0; p < k; ++p) {
                double b = rhs[freev[p]];
                for (std::size_t j = 0; j < n; ++j)
                    if (st[j] != State::Free) b -= gram[freev[p] * n + j] * z[j];
                cf[p] = b;
                for (std::size_t q = 0; q < k; ++q)
                    gff[p * k + q] = gram[freev[p] * n + freev[q]];
            }
            std::vector<double> w;
            if (!ldlt_solve(gff, cf, k, w)) {
                // Degenerate free block: freeze the last-released variable
                // at its nearest bound and retry.
                std::size_t j = freev.back();
                if (lo[j] == -inf && hi[j] == inf) return z; // give up cleanly
                if (std::fabs(z[j] - lo[j]) <= std::fabs(z[j] - hi[j])) {
                    st[j] = State::AtLo;
                    z[j] = lo[j];
                } else {
                    st[j] = State::AtUp;
                    z[j] = hi[j];
                }
                continue;
            }

            bool feasible = true;
            double gamma = 1.0;
            for (std::size_t p = 0; p < k; ++p) {
                const std::size_t j = freev[p];
                if (w[p] < lo[j] || w[p] > hi[j]) {
                    feasible = false;
                    const double target = (w[p] < lo[j]) ? lo[j] : hi[j];
                    const double denom = w[p] - z[j];
                    const double g = (denom != 0.0) ? (target - z[j]) / denom : 0.0;
                    gamma = std::min(gamma, std::max(0.0, g));
                }
            }
            if (feasible) {
                for (std::size_t p = 0; p < k; ++p) z[freev[p]] = w[p];
                break;
            }
            for (std::size_t p = 0; p < k; ++p) {
                const std::size_t j = freev[p];
                z[j] += gamma * (w[p] - z[j]);
            }
            const double snap = 1e-12 * (1.0 + gscale);
            for (std::size_t p = 0; p < k; ++p) {
                const std::size_t j = freev[p];
                if (z[j] <= lo[j] + snap && lo[j] != -inf &&
                    (w[p] < lo[j] || z[j] <= lo[j])) {
                    st[j] = State::AtLo;
                    z[j] = lo[j];
                } else if (z[j] >= hi[j] - snap && hi[j] != inf &&
                           (w[p] > hi[j] || z[j] >= hi[j])) {
                    st[j] = State::AtUp;
                    z[j] = hi[j];
                }
            }
        }

        // KKT check at the bound variables; release the worst violator.
        double worst = kkt_tol;
        std::size_t worst_j = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (st[j] == State::Free) continue;
            double g = rhs[j];
            for (std::size_t i = 0; i < n; ++i) g -= gram[j * n + i] * z[i];
            // g > 0 means increasing z[j] lowers the residual.
            if (st[j] == State::AtLo && g > worst) {
                worst = g;
                worst_j = j;
            } else if (st[j] == State::AtUp && -g > worst) {
                worst = -g;
                worst_j = j;
            }
        }
        if (worst_j == n) return z; // optimal
        st[worst_j] = State::Free;
    }
    return z; // iteration cap: return best feasible point found
}

} // namespace logwave
