#include "wavelet.hpp"
#include "common.hpp"

#include <cmath>
#include <vector>

namespace logwave {

namespace {
constexpr double kSqrt30 = 5.477225575051661134569525; // sqrt(30)
}

double logistic(double t) {
    // Evaluate via exp(-|t|) so neither branch overflows.
    if (t >= 0.0) {
        const double e = std::exp(-t);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double logistic_d2(double t) {
    const double x = logistic(t);
    return x * (1.0 - x) * (1.0 - 2.0 * x);
}

double psi2(double t) { return kSqrt30 * logistic_d2(t); }

double psi2_child(double t, const WaveletParams& p) {
    if (!(p.alpha > 0.0)) throw ParamError("psi2_child: alpha must be positive");
    return psi2((t - p.beta) / p.alpha);
}

double l2_norm_squared(const std::function<double(double)>& fn, double lo,
                       double hi, double step) {
    if (!(step > 0.0)) throw ParamError("l2_norm_squared: step must be positive");
    if (!(hi > lo)) throw ParamError("l2_norm_squared: empty support");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5));
    double sum = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = lo + static_cast<double>(k) * step;
        const double v = fn(t);
        const double w = (k == 0 || k == n) ? 0.5 : 1.0;
        sum += w * v * v;
    }
    return sum * step;
}

namespace {

// |fhat(xi)|^2 for the non-unitary transform, via trig recurrences over the
// sample grid (one sin/cos pair per frequency instead of per sample).
double fhat_sq(const std::vector<double>& f, double lo, double step, double xi) {
    const double dphi = xi * step;
    const double cd = std::cos(dphi), sd = std::sin(dphi);
    double c = std::cos(xi * lo), s = std::sin(xi * lo);
    double re = 0.0, im = 0.0;
    const std::size_t n = f.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
        re += w * f[k] * c;
        im -= w * f[k] * s;
        const double c2 = c * cd - s * sd;
        s = s * cd + c * sd;
        c = c2;
    }
    re *= step;
    im *= step;
    return re * re + im * im;
}

} // namespace

double admissibility_check(const std::function<double(double)>& fn, double lo,
                           double hi, double step) {
    if (!(step > 0.0)) throw ParamError("admissibility_check: step must be positive");
    if (!(hi > lo)) throw ParamError("admissibility_check: empty support");

    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5));
    std::vector<double> f(n + 1);
    for (std::size_t k = 0; k <= n; ++k) f[k] = fn(lo + static_cast<double>(k) * step);

    // With the unitary transform the target is 2*pi * int |fhat_u|^2/|xi|,
    // which equals int |fhat|^2/|xi| for the non-unitary one computed here.
    // fn real => |fhat(-xi)| = |fhat(xi)|, so integrate xi > 0 and double.
    const double xi_step = 0.01;
    const double xi_max = 50.0;
    auto strip = [&](double a, double b, double h) {
        // trapezoid over [a, b] with frequency step h
        const auto m = static_cast<std::size_t>(std::floor((b - a) / h + 0.5));
        double sum = 0.0;
        for (std::size_t k = 0; k <= m; ++k) {
            const double xi = a + static_cast<double>(k) * h;
            const double w = (k == 0 || k == m) ? 0.5 : 1.0;
            sum += w * fhat_sq(f, lo, step, xi) / xi;
        }
        return 2.0 * sum * h;
    };

    const double body = strip(xi_step, xi_max, xi_step);
    // Refine toward xi = 0; log-divergent inputs add a constant per halving.
    const double d1 = strip(xi_step / 2.0, xi_step, xi_step / 8.0);
    const double d2 = strip(xi_step / 4.0, xi_step / 2.0, xi_step / 16.0);
    const double total = body + d1 + d2;
    if (d2 > 0.5 * d1 && d2 > 1e-9 * std::max(total, 1e-300))
        throw NumericError("admissibility integral diverges near zero frequency "
                           "(input is not zero-mean)");
    return total;
}

} // namespace logwave
