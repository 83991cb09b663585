// logwave CLI: thin front-end over the shared library's C interface.
// Every run writes a manifest.json beside its outputs so results can be
// reproduced from the recorded parameters alone.

#include <logwave.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// JSON config support for CLI11 (flag names as keys, one object per
// subcommand); command-line values win over file values.
class ConfigJSON : public CLI::Config {
  public:
    std::string to_config(const CLI::App* app, bool default_also, bool,
                          std::string) const override {
        json j;
        for (const CLI::Option* opt : app->get_options({})) {
            if (!opt->get_lnames().empty() && opt->get_configurable()) {
                const std::string name = opt->get_lnames()[0];
                if (opt->get_type_size() != 0) {
                    if (opt->count() == 1) j[name] = opt->results().at(0);
                    else if (opt->count() > 1) j[name] = opt->results();
                    else if (default_also && !opt->get_default_str().empty())
                        j[name] = opt->get_default_str();
                } else if (opt->count() > 0) {
                    j[name] = true;
                }
            }
        }
        for (const CLI::App* sub : app->get_subcommands({}))
            j[sub->get_name()] =
                json::parse(to_config(sub, default_also, false, ""));
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        try {
            j = json::parse(input);
        } catch (const json::parse_error& e) {
            throw CLI::FileError(std::string("config parse: ") + e.what());
        }
        return walk(j, "", {});
    }

  private:
    std::vector<CLI::ConfigItem> walk(const json& j, std::string name,
                                      std::vector<std::string> prefix) const {
        std::vector<CLI::ConfigItem> out;
        if (j.is_object()) {
            for (auto it = j.begin(); it != j.end(); ++it) {
                auto deeper = prefix;
                if (!name.empty()) deeper.push_back(name);
                auto sub = walk(it.value(), it.key(), deeper);
                out.insert(out.end(), sub.begin(), sub.end());
            }
        } else if (!name.empty()) {
            out.emplace_back();
            CLI::ConfigItem& item = out.back();
            item.name = name;
            item.parents = prefix;
            if (j.is_boolean()) {
                item.inputs = {j.get<bool>() ? "true" : "false"};
            } else if (j.is_string()) {
                item.inputs = {j.get<std::string>()};
            } else if (j.is_number()) {
                char buf[48];
                std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
                item.inputs = {buf};
            } else if (j.is_array()) {
                for (const json& e : j) item.inputs.push_back(e.dump());
            } else {
                throw CLI::ConversionError("config value for '" + name +
                                           "' must be a scalar");
            }
        } else {
            throw CLI::ConversionError("config root must be a JSON object");
        }
        return out;
    }
};

template <typename T, void (*FreeFn)(T*)>
struct Handle {
    T* p = nullptr;
    ~Handle() { FreeFn(p); }
    T** slot() { return &p; }
    operator T*() const { return p; }
};

using SeriesH = Handle<lw_series, lw_series_free>;
using ScalH = Handle<lw_scalogram, lw_scalogram_free>;
using ModelH = Handle<lw_model, lw_model_free>;
using ChainsH = Handle<lw_chains, lw_chains_free>;
using DistH = Handle<lw_dist, lw_dist_free>;

int fail(int code) {
    std::cerr << "error: " << lw_last_error() << "\n";
    return code;
}

// Returns LW_E_INPUT-style failure if the directory cannot be made.
int ensure_outdir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory " << dir << ": "
                  << ec.message() << "\n";
        return LW_E_INPUT;
    }
    return LW_OK;
}

int write_manifest(const std::string& dir, const json& j) {
    const std::string path = (fs::path(dir) / "manifest.json").string();
    std::ofstream f(path);
    if (!f) {
        std::cerr << "error: cannot write " << path << "\n";
        return LW_E_INPUT;
    }
    f << j.dump(2) << '\n';
    return LW_OK;
}

struct Common {
    std::string out = ".";
    bool verbose = false;
};

void note(const Common& c, const std::string& msg) {
    if (c.verbose) std::cerr << msg << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"logwave: drift + logistic solitary-wave decomposition of "
                 "time series, with scalogram, trend, entropy and KdV tools"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", lw_version());
    app.config_formatter(std::make_shared<ConfigJSON>());
    app.set_config("--config", "", "JSON file supplying any flag; "
                                   "command-line values take precedence");

    Common common;
    app.add_option("--out", common.out, "Output directory")
        ->capture_default_str();
    app.add_flag("--verbose", common.verbose, "Chatty progress on stderr");

    // scalogram ------------------------------------------------------------
    auto* sc = app.add_subcommand(
        "scalogram", "CWT scalogram of the differenced series plus extrema");
    std::string sc_input, sc_column;
    double sc_amin = 1.0, sc_amax = 30.0, sc_astep = 0.5, sc_minabs = 0.0;
    sc->add_option("input", sc_input, "Series CSV")->required();
    sc->add_option("--column", sc_column, "Value column (name or 0-based index)");
    sc->add_option("--alpha-min", sc_amin, "Smallest scale")->capture_default_str();
    sc->add_option("--alpha-max", sc_amax, "Largest scale")->capture_default_str();
    sc->add_option("--alpha-step", sc_astep, "Scale step")->capture_default_str();
    sc->add_option("--min-abs", sc_minabs,
                   "Extremum threshold on |CWT| (<=0: 3x median)")
        ->capture_default_str();

    // decompose ------------------------------------------------------------
    auto* dc = app.add_subcommand(
        "decompose", "Drift + solitary-wave decomposition of a series");
    std::string dc_input, dc_column;
    int dc_maxwaves = 22;
    double dc_stopr2 = 0.9939, dc_minabs = 0.0, dc_detail = 30.0,
           dc_carrier = 120.0;
    bool dc_norefine = false;
    dc->add_option("input", dc_input, "Series CSV")->required();
    dc->add_option("--column", dc_column, "Value column (name or 0-based index)");
    dc->add_option("--max-waves", dc_maxwaves, "Wave budget")->capture_default_str();
    dc->add_option("--stop-r2", dc_stopr2, "Stop adding waves at this R^2")
        ->capture_default_str();
    dc->add_option("--min-abs", dc_minabs,
                   "Detection threshold on |CWT| (<=0: 3x median)")
        ->capture_default_str();
    dc->add_flag("--no-refine", dc_norefine, "Skip local parameter refinement");
    dc->add_option("--detail-alpha-max", dc_detail, "Detail-pass scale ceiling")
        ->capture_default_str();
    dc->add_option("--carrier-alpha-max", dc_carrier, "Carrier-pass scale ceiling")
        ->capture_default_str();

    // synthesize -----------------------------------------------------------
    auto* sy = app.add_subcommand(
        "synthesize", "Sample a wave-table model into a series CSV");
    std::string sy_params;
    std::size_t sy_length = 514;
    double sy_sigma = 0.0;
    std::uint64_t sy_seed = 0;
    sy->add_option("params", sy_params, "Wave-table JSON")->required();
    sy->add_option("--length", sy_length, "Number of samples")->capture_default_str();
    sy->add_option("--noise-sigma", sy_sigma, "Gaussian noise level")
        ->capture_default_str();
    sy->add_option("--seed", sy_seed, "Noise RNG seed")->capture_default_str();

    // trend ----------------------------------------------------------------
    auto* tr = app.add_subcommand("trend", "Wave-chain trend report");
    std::string tr_input;
    double tr_tol = 0.30;
    tr->add_option("waves", tr_input, "Wave-table JSON")->required();
    tr->add_option("--group-tol", tr_tol,
                   "Relative amplitude/b ratio jump that splits a chain")
        ->capture_default_str();

    // entropy ----------------------------------------------------------------
    auto* en = app.add_subcommand(
        "entropy", "Information measure of a discrete distribution");
    std::string en_input, en_measure;
    en->add_option("dist", en_input, "Distribution JSON or CSV")->required();
    en->add_option("--measure", en_measure, "H, T2, T3 or R")->required();

    // kdv-check ----------------------------------------------------------------
    auto* kv = app.add_subcommand(
        "kdv-check", "Soliton residual of the KdV operator at two resolutions");
    // --h would collide with the short help alias; keep --help only here
    kv->set_help_flag("--help", "Print this help message and exit");
    double kv_k = 1.0, kv_h = 0.05, kv_tau = 0.001;
    kv->add_option("--k", kv_k, "Soliton parameter")->capture_default_str();
    kv->add_option("--h", kv_h, "Spatial step")->capture_default_str();
    kv->add_option("--tau", kv_tau, "Time step")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return LW_E_PARAM;
    }

    int rc = LW_OK;

    if (sc->parsed()) {
        SeriesH series, diff;
        ScalH scal;
        if ((rc = lw_series_load_csv(sc_input.c_str(), sc_column.c_str(),
                                     series.slot())))
            return fail(rc);
        if ((rc = lw_series_first_difference(series, diff.slot())))
            return fail(rc);
        note(common, "series loaded: " + std::to_string(lw_series_len(series)) +
                         " points");
        if ((rc = lw_scalogram_compute(diff, sc_amin, sc_amax, sc_astep,
                                       scal.slot())))
            return fail(rc);
        if ((rc = ensure_outdir(common.out))) return rc;
        const std::string mat = (fs::path(common.out) / "scalogram.csv").string();
        const std::string ext = (fs::path(common.out) / "extrema.json").string();
        if ((rc = lw_scalogram_save_csv(scal, mat.c_str()))) return fail(rc);
        if ((rc = lw_scalogram_write_extrema_json(scal, sc_minabs, ext.c_str())))
            return fail(rc);
        note(common, "grid " + std::to_string(lw_scalogram_rows(scal)) + "x" +
                         std::to_string(lw_scalogram_cols(scal)));
        return write_manifest(
            common.out,
            json{{"command", "scalogram"},
                 {"version", lw_version()},
                 {"input", sc_input},
                 {"column", sc_column},
                 {"alpha_min", sc_amin},
                 {"alpha_max", sc_amax},
                 {"alpha_step", sc_astep},
                 {"min_abs", sc_minabs},
                 {"grid_rows", lw_scalogram_rows(scal)},
                 {"grid_cols", lw_scalogram_cols(scal)},
                 {"outputs", {"scalogram.csv", "extrema.json"}}});
    }

    if (dc->parsed()) {
        SeriesH series;
        ModelH model;
        if ((rc = lw_series_load_csv(dc_input.c_str(), dc_column.c_str(),
                                     series.slot())))
            return fail(rc);
        note(common, "decomposing " + std::to_string(lw_series_len(series)) +
                         " points");
        if ((rc = lw_decompose(series, dc_maxwaves, dc_stopr2, dc_minabs,
                               dc_norefine ? 0 : 1, dc_detail, dc_carrier,
                               model.slot())))
            return fail(rc);
        if ((rc = ensure_outdir(common.out))) return rc;
        const std::string wj = (fs::path(common.out) / "waves.json").string();
        const std::string wc = (fs::path(common.out) / "waves.csv").string();
        const std::string fj = (fs::path(common.out) / "fit.json").string();
        if ((rc = lw_model_save_json(model, wj.c_str()))) return fail(rc);
        if ((rc = lw_model_save_csv(model, wc.c_str()))) return fail(rc);
        double r2 = 0.0, rmse = 0.0;
        if ((rc = lw_model_get_fit(model, &r2, &rmse))) return fail(rc);
        std::vector<double> resid(lw_model_fit_len(model));
        if (!resid.empty() &&
            (rc = lw_model_copy_residuals(model, resid.data(), resid.size())))
            return fail(rc);
        {
            std::ofstream f(fj);
            if (!f) {
                std::cerr << "error: cannot write " << fj << "\n";
                return LW_E_INPUT;
            }
            f << json{{"r_squared", r2}, {"rmse", rmse}, {"residuals", resid}}
                     .dump(2)
              << '\n';
        }
        note(common,
             "waves: " + std::to_string(lw_model_wave_count(model)) +
                 ", r_squared = " + std::to_string(r2));
        return write_manifest(
            common.out,
            json{{"command", "decompose"},
                 {"version", lw_version()},
                 {"input", dc_input},
                 {"column", dc_column},
                 {"max_waves", dc_maxwaves},
                 {"stop_r2", dc_stopr2},
                 {"min_abs", dc_minabs},
                 {"refine", !dc_norefine},
                 {"detail_alpha_max", dc_detail},
                 {"carrier_alpha_max", dc_carrier},
                 {"wave_count", lw_model_wave_count(model)},
                 {"r_squared", r2},
                 {"rmse", rmse},
                 {"outputs", {"waves.json", "waves.csv", "fit.json"}}});
    }

    if (sy->parsed()) {
        ModelH model;
        SeriesH series;
        if ((rc = lw_model_load_json(sy_params.c_str(), model.slot())))
            return fail(rc);
        if ((rc = lw_model_synthesize(model, sy_length, sy_sigma, sy_seed,
                                      series.slot())))
            return fail(rc);
        if ((rc = ensure_outdir(common.out))) return rc;
        const std::string out = (fs::path(common.out) / "series.csv").string();
        if ((rc = lw_series_save_csv(series, out.c_str()))) return fail(rc);
        return write_manifest(common.out,
                              json{{"command", "synthesize"},
                                   {"version", lw_version()},
                                   {"params", sy_params},
                                   {"length", sy_length},
                                   {"noise_sigma", sy_sigma},
                                   {"seed", sy_seed},
                                   {"outputs", {"series.csv"}}});
    }

    if (tr->parsed()) {
        ModelH model;
        ChainsH chains;
        if ((rc = lw_model_load_json(tr_input.c_str(), model.slot())))
            return fail(rc);
        if ((rc = lw_chains_compute(model, tr_tol, chains.slot())))
            return fail(rc);
        if ((rc = ensure_outdir(common.out))) return rc;
        const std::string out = (fs::path(common.out) / "chains.json").string();
        if ((rc = lw_chains_save_json(chains, out.c_str()))) return fail(rc);
        note(common, "chains: " + std::to_string(lw_chains_count(chains)));
        return write_manifest(common.out,
                              json{{"command", "trend"},
                                   {"version", lw_version()},
                                   {"input", tr_input},
                                   {"group_tol", tr_tol},
                                   {"chain_count", lw_chains_count(chains)},
                                   {"outputs", {"chains.json"}}});
    }

    if (en->parsed()) {
        DistH dist;
        const bool csv = en_input.size() > 4 &&
                         en_input.compare(en_input.size() - 4, 4, ".csv") == 0;
        rc = csv ? lw_dist_load_csv(en_input.c_str(), dist.slot())
                 : lw_dist_load_json(en_input.c_str(), dist.slot());
        if (rc) return fail(rc);
        double value = 0.0;
        if ((rc = lw_dist_measure(dist, en_measure.c_str(), &value)))
            return fail(rc);
        std::printf("%.12g\n", value);
        if ((rc = ensure_outdir(common.out))) return rc;
        return write_manifest(common.out, json{{"command", "entropy"},
                                               {"version", lw_version()},
                                               {"input", en_input},
                                               {"measure", en_measure},
                                               {"value", value},
                                               {"outputs", json::array()}});
    }

    if (kv->parsed()) {
        double coarse = 0.0, fine = 0.0;
        if ((rc = lw_kdv_soliton_residual(kv_k, kv_h, kv_tau, &coarse)))
            return fail(rc);
        if ((rc = lw_kdv_soliton_residual(kv_k, kv_h / 2.0, kv_tau / 2.0, &fine)))
            return fail(rc);
        const double ratio = coarse / fine;
        const double order = std::log2(ratio);
        std::printf("residual[h=%g, tau=%g]     = %.6e\n", kv_h, kv_tau, coarse);
        std::printf("residual[h=%g, tau=%g] = %.6e\n", kv_h / 2.0, kv_tau / 2.0,
                    fine);
        std::printf("ratio = %.4f    observed order = %.4f\n", ratio, order);
        if ((rc = ensure_outdir(common.out))) return rc;
        return write_manifest(common.out, json{{"command", "kdv-check"},
                                               {"version", lw_version()},
                                               {"k", kv_k},
                                               {"h", kv_h},
                                               {"tau", kv_tau},
                                               {"residual_coarse", coarse},
                                               {"residual_fine", fine},
                                               {"ratio", ratio},
                                               {"observed_order", order},
                                               {"outputs", json::array()}});
    }

    return rc;
}
