#pragma once

#include <functional>

namespace logwave {

struct WaveletParams {
    double alpha = 1.0; // scale, > 0
    double beta = 0.0;  // shift
};

// Standard logistic function 1/(1+e^-t).
double logistic(double t);

// Second derivative of the logistic function, x''(t) = x(1-x)(1-2x).
double logistic_d2(double t);

// Normalized second-order logistic mother wavelet, sqrt(30) * x''(t).
double psi2(double t);

// Child wavelet psi2((t-beta)/alpha). Deliberately NOT energy-normalized:
// no 1/sqrt(alpha) prefactor. The saturation-recovery formula downstream
// (y_sat = sqrt(30)*alpha*cwt) is only consistent with this convention.
double psi2_child(double t, const WaveletParams& p);

// Trapezoid quadrature of fn^2 over [lo, hi] with the given step.
double l2_norm_squared(const std::function<double(double)>& fn, double lo,
                       double hi, double step);

// Admissibility integral 2*pi * int |xi|^-1 |fhat(xi)|^2 dxi with the
// unitary Fourier transform fhat(xi) = (2*pi)^-1/2 int fn(t) e^{-i xi t} dt,
// estimated by direct quadrature of the Fourier integral on [lo, hi].
// Throws NumericError when the integral grows without bound as the
// frequency cutoff approaches zero (non-zero-mean input).
double admissibility_check(const std::function<double(double)>& fn, double lo,
                           double hi, double step);

} // namespace logwave
