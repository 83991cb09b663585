#include "logwave.h"

#include "common.hpp"
#include "decompose.hpp"
#include "jsonio.hpp"
#include "kdv.hpp"
#include "model.hpp"
#include "scalogram.hpp"
#include "timeseries.hpp"
#include "trend.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

using namespace logwave;

struct lw_series {
    TimeSeries s;
};
struct lw_scalogram {
    Scalogram s;
};
struct lw_model {
    WaveTable t;
    std::vector<double> residuals;
};
struct lw_chains {
    std::vector<WaveChain> chains;
    std::vector<std::string> ids;
};
struct lw_dist {
    DiscreteDistribution d;
};

namespace {

thread_local std::string t_err;

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        t_err.clear();
        return LW_OK;
    } catch (const InputError& e) {
        t_err = e.what();
        return LW_E_INPUT;
    } catch (const ParamError& e) {
        t_err = e.what();
        return LW_E_PARAM;
    } catch (const NumericError& e) {
        t_err = e.what();
        return LW_E_NUMERIC;
    } catch (const std::exception& e) {
        t_err = e.what();
        return LW_E_NUMERIC;
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw ParamError(what);
}

std::vector<double> integer_betas(std::size_t n) {
    std::vector<double> betas(n);
    for (std::size_t i = 0; i < n; ++i) betas[i] = static_cast<double>(i + 1);
    return betas;
}

} // namespace

extern "C" {

const char* lw_version(void) { return "1.0.0"; }

const char* lw_last_error(void) { return t_err.c_str(); }

/* ---- time series ----------------------------------------------------- */

int lw_series_load_csv(const char* path, const char* column, lw_series** out) {
    return guarded([&] {
        require(path && out, "null argument");
        auto* h = new lw_series{ingest_csv(path, column ? column : "")};
        *out = h;
    });
}

int lw_series_from_values(const double* values, size_t n, lw_series** out) {
    return guarded([&] {
        require(values && out, "null argument");
        require(n > 0, "series must be nonempty");
        auto* h = new lw_series{};
        h->s.values.assign(values, values + n);
        *out = h;
    });
}

int lw_series_save_csv(const lw_series* s, const char* path) {
    return guarded([&] {
        require(s && path, "null argument");
        save_csv(s->s, path);
    });
}

size_t lw_series_len(const lw_series* s) { return s ? s->s.size() : 0; }

int lw_series_copy_values(const lw_series* s, double* buf, size_t cap) {
    return guarded([&] {
        require(s && buf, "null argument");
        require(cap >= s->s.size(), "buffer too small");
        std::copy(s->s.values.begin(), s->s.values.end(), buf);
    });
}

int lw_series_first_difference(const lw_series* s, lw_series** out) {
    return guarded([&] {
        require(s && out, "null argument");
        *out = new lw_series{first_difference(s->s)};
    });
}

int lw_series_cumulative(const lw_series* s, lw_series** out) {
    return guarded([&] {
        require(s && out, "null argument");
        *out = new lw_series{cumulative(s->s)};
    });
}

void lw_series_free(lw_series* s) { delete s; }

/* ---- scalogram -------------------------------------------------------- */

int lw_scalogram_compute(const lw_series* signal, double alpha_min,
                         double alpha_max, double alpha_step,
                         lw_scalogram** out) {
    return guarded([&] {
        require(signal && out, "null argument");
        require(alpha_step > 0.0, "alpha step must be positive");
        require(alpha_min > 0.0, "alpha grid must be positive");
        require(alpha_max >= alpha_min, "alpha range is empty");
        std::vector<double> alphas;
        for (double a = alpha_min; a <= alpha_max + 1e-12 * alpha_max;
             a += alpha_step)
            alphas.push_back(a);
        *out = new lw_scalogram{compute_scalogram(
            signal->s.values, alphas, integer_betas(signal->s.size()))};
    });
}

size_t lw_scalogram_rows(const lw_scalogram* s) {
    return s ? s->s.alphas.size() : 0;
}

size_t lw_scalogram_cols(const lw_scalogram* s) {
    return s ? s->s.betas.size() : 0;
}

int lw_scalogram_save_csv(const lw_scalogram* s, const char* path) {
    return guarded([&] {
        require(s && path, "null argument");
        save_scalogram_csv(s->s, path);
    });
}

int lw_scalogram_write_extrema_json(const lw_scalogram* s, double min_abs,
                                    const char* path) {
    return guarded([&] {
        require(s && path, "null argument");
        double floor_abs = min_abs;
        if (floor_abs <= 0.0) {
            std::vector<double> mags;
            mags.reserve(s->s.values.size());
            for (double v : s->s.values) mags.push_back(std::fabs(v));
            std::sort(mags.begin(), mags.end());
            const std::size_t n = mags.size();
            const double med = n % 2 ? mags[n / 2]
                                     : 0.5 * (mags[n / 2 - 1] + mags[n / 2]);
            floor_abs = 3.0 * med;
        }
        save_extrema_json(find_extrema(s->s, floor_abs), path);
    });
}

void lw_scalogram_free(lw_scalogram* s) { delete s; }

/* ---- models ------------------------------------------------------------ */

int lw_model_create(double c, double d, lw_model** out) {
    return guarded([&] {
        require(out, "null argument");
        auto* h = new lw_model{};
        h->t.model.c = c;
        h->t.model.d = d;
        *out = h;
    });
}

int lw_model_add_wave(lw_model* m, double a, double b, double y_sat) {
    return guarded([&] {
        require(m, "null argument");
        require(a > 0.0, "wave scale a must be positive");
        m->t.model.waves.push_back(LogisticWave{a, b, y_sat, false});
        m->t.ids.push_back(std::to_string(m->t.model.waves.size()));
    });
}

int lw_model_load_json(const char* path, lw_model** out) {
    return guarded([&] {
        require(path && out, "null argument");
        *out = new lw_model{load_wave_table_json(path), {}};
    });
}

int lw_model_save_json(const lw_model* m, const char* path) {
    return guarded([&] {
        require(m && path, "null argument");
        save_wave_table_json(m->t, path);
    });
}

int lw_model_save_csv(const lw_model* m, const char* path) {
    return guarded([&] {
        require(m && path, "null argument");
        save_wave_table_csv(m->t, path);
    });
}

size_t lw_model_wave_count(const lw_model* m) {
    return m ? m->t.model.waves.size() : 0;
}

int lw_model_get_wave(const lw_model* m, size_t index, double* a, double* b,
                      double* y_sat, int* edge) {
    return guarded([&] {
        require(m, "null argument");
        require(index < m->t.model.waves.size(), "wave index out of range");
        const LogisticWave& w = m->t.model.waves[index];
        if (a) *a = w.a;
        if (b) *b = w.b;
        if (y_sat) *y_sat = w.y_sat;
        if (edge) *edge = w.edge ? 1 : 0;
    });
}

int lw_model_get_baseline(const lw_model* m, double* c, double* d) {
    return guarded([&] {
        require(m, "null argument");
        if (c) *c = m->t.model.c;
        if (d) *d = m->t.model.d;
    });
}

int lw_model_get_fit(const lw_model* m, double* r_squared, double* rmse) {
    return guarded([&] {
        require(m, "null argument");
        require(m->t.has_fit, "model carries no fit report");
        if (r_squared) *r_squared = m->t.r_squared;
        if (rmse) *rmse = m->t.rmse;
    });
}

size_t lw_model_fit_len(const lw_model* m) {
    return m ? m->residuals.size() : 0;
}

int lw_model_copy_residuals(const lw_model* m, double* buf, size_t cap) {
    return guarded([&] {
        require(m && buf, "null argument");
        require(cap >= m->residuals.size(), "buffer too small");
        std::copy(m->residuals.begin(), m->residuals.end(), buf);
    });
}

int lw_model_synthesize(const lw_model* m, size_t n, double noise_sigma,
                        uint64_t seed, lw_series** out) {
    return guarded([&] {
        require(m && out, "null argument");
        *out = new lw_series{synthesize(m->t.model, n, noise_sigma, seed)};
    });
}

void lw_model_free(lw_model* m) { delete m; }

/* ---- decomposition ------------------------------------------------------ */

int lw_decompose(const lw_series* s, int max_waves, double stop_r2,
                 double min_abs_cwt, int refine, double detail_alpha_max,
                 double carrier_alpha_max, lw_model** out) {
    return guarded([&] {
        require(s && out, "null argument");
        DecompositionConfig cfg;
        cfg.max_waves = max_waves;
        cfg.stop_r2 = stop_r2;
        cfg.min_abs_cwt = min_abs_cwt;
        cfg.refine = refine != 0;
        cfg.detail_alpha_max = detail_alpha_max;
        cfg.carrier_alpha_max = carrier_alpha_max;
        DecompositionResult res = decompose(s->s, cfg);
        auto* h = new lw_model{to_wave_table(res.model), res.fit.residuals};
        h->t.has_fit = true;
        h->t.r_squared = res.fit.r_squared;
        h->t.rmse = res.fit.rmse;
        *out = h;
    });
}

/* ---- wave chains --------------------------------------------------------- */

int lw_chains_compute(const lw_model* m, double group_tol, lw_chains** out) {
    return guarded([&] {
        require(m && out, "null argument");
        auto* h = new lw_chains{auto_group(m->t.model.waves, group_tol),
                                m->t.ids};
        *out = h;
    });
}

size_t lw_chains_count(const lw_chains* c) { return c ? c->chains.size() : 0; }

int lw_chains_save_json(const lw_chains* c, const char* path) {
    return guarded([&] {
        require(c && path, "null argument");
        save_chains_json(c->chains, c->ids, path);
    });
}

void lw_chains_free(lw_chains* c) { delete c; }

/* ---- discrete distributions ---------------------------------------------- */

int lw_dist_load_json(const char* path, lw_dist** out) {
    return guarded([&] {
        require(path && out, "null argument");
        *out = new lw_dist{load_distribution_json(path)};
    });
}

int lw_dist_load_csv(const char* path, lw_dist** out) {
    return guarded([&] {
        require(path && out, "null argument");
        *out = new lw_dist{load_distribution_csv(path)};
    });
}

int lw_dist_measure(const lw_dist* d, const char* measure, double* out) {
    return guarded([&] {
        require(d && measure && out, "null argument");
        const std::string m = measure;
        if (m == "H") {
            std::vector<std::size_t> all(d->d.arity);
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            *out = shannon_entropy(d->d, all);
        } else if (m == "T2") {
            *out = mutual_information_2(d->d);
        } else if (m == "T3") {
            *out = configurational_information_3(d->d);
        } else if (m == "R") {
            *out = mutual_redundancy(d->d);
        } else {
            throw ParamError("unknown measure '" + m + "' (use H, T2, T3, R)");
        }
    });
}

void lw_dist_free(lw_dist* d) { delete d; }

/* ---- KdV verification ----------------------------------------------------- */

int lw_kdv_soliton_residual(double k, double h, double tau, double* out) {
    return guarded([&] {
        require(out, "null argument");
        const GridFunction g = sample_soliton(k, -20.0, 20.0, h, -1.0, 1.0, tau);
        *out = kdv_residual(g);
    });
}

} // extern "C"
