#include "trend.hpp"

#include "common.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace logwave {

WaveChain fit_chain(const std::vector<LogisticWave>& waves,
                    const std::vector<std::size_t>& member_ids) {
    if (member_ids.size() < 2) throw ParamError("chain too short: need at least 2 members");
    for (std::size_t id : member_ids)
        if (id >= waves.size()) throw ParamError("chain member index out of range");
    WaveChain c;
    c.member_ids = member_ids;
    std::stable_sort(c.member_ids.begin(), c.member_ids.end(),
                     [&](std::size_t u, std::size_t v) { return waves[u].b < waves[v].b; });
    bool pos = false, neg = false;
    for (std::size_t id : c.member_ids) {
        const double A = amplitude(waves[id]);
        if (A > 0.0) pos = true;
        if (A < 0.0) neg = true;
    }
    if (pos && neg) throw ParamError("chain members must share the amplitude sign");

    // Least squares A = slope*b + intercept.
    const std::size_t m = c.member_ids.size();
    double sb = 0.0, sA = 0.0, sbb = 0.0, sbA = 0.0;
    for (std::size_t id : c.member_ids) {
        const double b = waves[id].b, A = amplitude(waves[id]);
        sb += b;
        sA += A;
        sbb += b * b;
        sbA += b * A;
    }
    const double n = static_cast<double>(m);
    const double det = n * sbb - sb * sb;
    if (det == 0.0) throw NumericError("chain members share a single b; line is undetermined");
    c.line_slope = (n * sbA - sb * sA) / det;
    c.line_intercept = (sA * sbb - sb * sbA) / det;
    double ss = 0.0;
    c.ratios.reserve(m);
    for (std::size_t id : c.member_ids) {
        const double b = waves[id].b, A = amplitude(waves[id]);
        const double r = A - (c.line_slope * b + c.line_intercept);
        ss += r * r;
        c.ratios.push_back(A / b);
    }
    c.residual_rms = std::sqrt(ss / n);
    c.reversal_flag = m >= 3;
    return c;
}

double extrapolate_next(const WaveChain& chain, double b_next) {
    return chain.line_slope * b_next + chain.line_intercept;
}

std::vector<WaveChain> auto_group(const std::vector<LogisticWave>& waves,
                                  double tol) {
    if (!(tol > 0.0)) throw ParamError("grouping tolerance must be positive");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < waves.size(); ++i) {
        const double A = amplitude(waves[i]);
        if (A > 0.0) pos.push_back(i);
        else if (A < 0.0) neg.push_back(i);
    }
    // Value-based order so the result ignores input permutation.
    auto byval = [&](std::size_t u, std::size_t v) {
        if (waves[u].b != waves[v].b) return waves[u].b < waves[v].b;
        if (waves[u].a != waves[v].a) return waves[u].a < waves[v].a;
        return waves[u].y_sat < waves[v].y_sat;
    };
    std::vector<WaveChain> out;
    for (std::vector<std::size_t>* grp : {&neg, &pos}) {
        std::sort(grp->begin(), grp->end(), byval);
        std::vector<std::size_t> run;
        auto flush = [&]() {
            if (run.size() >= 2) out.push_back(fit_chain(waves, run));
            run.clear();
        };
        for (std::size_t id : *grp) {
            if (!run.empty()) {
                const LogisticWave& prev = waves[run.back()];
                const double rp = amplitude(prev) / prev.b;
                const double rc = amplitude(waves[id]) / waves[id].b;
                if (std::fabs(rc - rp) >= tol * std::fabs(rp)) flush();
            }
            run.push_back(id);
        }
        flush();
    }
    std::stable_sort(out.begin(), out.end(),
                     [&](const WaveChain& u, const WaveChain& v) {
                         return waves[u.member_ids.front()].b <
                                waves[v.member_ids.front()].b;
                     });
    return out;
}

} // namespace logwave
