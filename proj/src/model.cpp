#include "model.hpp"
#include "common.hpp"
#include "wavelet.hpp"

#include <cmath>
#include <random>

namespace logwave {

namespace {

// sech^2(z) evaluated as 4 e^{-2|z|} / (1 + e^{-2|z|})^2; underflows to 0
// cleanly for large |z|.
double sech2(double z) {
    const double e = std::exp(-2.0 * std::fabs(z));
    const double denom = 1.0 + e;
    return 4.0 * e / (denom * denom);
}

} // namespace

double wave_term(const LogisticWave& w, double t) {
    if (!(w.a > 0.0)) throw ParamError("wave term: a must be positive");
    return w.y_sat / (4.0 * w.a) * sech2((t - w.b) / (2.0 * w.a));
}

double eval_multilogistic(const MultilogisticModel& m, double t) {
    double v = m.c + m.d * t;
    for (const LogisticWave& w : m.waves) {
        if (!(w.a > 0.0)) throw ParamError("model wave: a must be positive");
        v += w.y_sat * logistic((t - w.b) / w.a);
    }
    return v;
}

double eval_multilogistic_derivative(const MultilogisticModel& m, double t) {
    double v = m.d;
    for (const LogisticWave& w : m.waves) v += wave_term(w, t);
    return v;
}

double amplitude(const LogisticWave& w) {
    if (!(w.a > 0.0)) throw ParamError("amplitude: a must be positive");
    return w.y_sat / (4.0 * w.a);
}

TimeSeries subtract_wave_cumulative(const TimeSeries& s, const LogisticWave& w) {
    TimeSeries out = s;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double t = static_cast<double>(i + 1);
        out.values[i] -= w.y_sat * logistic((t - w.b) / w.a);
    }
    return out;
}

TimeSeries subtract_wave_derivative(const TimeSeries& s, const LogisticWave& w) {
    TimeSeries out = s;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] -= wave_term(w, static_cast<double>(i + 1));
    return out;
}

void flag_edges(std::vector<LogisticWave>& waves, std::size_t series_len) {
    const double n = static_cast<double>(series_len);
    for (LogisticWave& w : waves)
        w.edge = (w.b - 5.0 * w.a < 1.0) || (w.b + 5.0 * w.a > n);
}

void flag_edges(MultilogisticModel& m, std::size_t series_len) {
    flag_edges(m.waves, series_len);
}

namespace {

class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (have_) {
            have_ = false;
            return cached_;
        }
        // Box-Muller; u1 in (0,1] so the log is finite.
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(phi);
        have_ = true;
        return r * std::cos(phi);
    }

private:
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 eng_;
    bool have_ = false;
    double cached_ = 0.0;
};

} // namespace

TimeSeries synthesize(const MultilogisticModel& m, std::size_t n,
                      double noise_sigma, std::uint64_t seed) {
    if (n < 2) throw ParamError("synthesize: need n >= 2");
    if (noise_sigma < 0.0) throw ParamError("synthesize: negative noise sigma");
    TimeSeries out;
    out.start_label = "n=1";
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = eval_multilogistic_derivative(m, static_cast<double>(i + 1));
    if (noise_sigma > 0.0) {
        GaussianSource g(seed);
        for (std::size_t i = 0; i < n; ++i) out.values[i] += noise_sigma * g.next();
    }
    return out;
}

} // namespace logwave
