#include "jsonio.hpp"

#include "common.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace logwave {
namespace {

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot open " + path + " for writing");
    f << j.dump(2) << '\n';
    if (!f) throw InputError("failed writing " + path);
}

double need_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number())
        throw InputError(where + ": missing numeric field '" + key + "'");
    return j[key].get<double>();
}

} // namespace

WaveTable to_wave_table(const MultilogisticModel& m) {
    WaveTable t;
    t.model = m;
    t.ids.reserve(m.waves.size());
    for (std::size_t i = 0; i < m.waves.size(); ++i)
        t.ids.push_back(std::to_string(i + 1));
    return t;
}

void save_wave_table_json(const WaveTable& t, const std::string& path) {
    json j;
    j["c"] = t.model.c;
    j["d"] = t.model.d;
    j["waves"] = json::array();
    for (std::size_t i = 0; i < t.model.waves.size(); ++i) {
        const LogisticWave& w = t.model.waves[i];
        j["waves"].push_back({{"id", i < t.ids.size() ? t.ids[i] : std::to_string(i + 1)},
                              {"a", w.a},
                              {"b", w.b},
                              {"y_sat", w.y_sat},
                              {"edge", w.edge}});
    }
    if (t.has_fit) {
        j["r_squared"] = t.r_squared;
        j["rmse"] = t.rmse;
    }
    write_json_file(j, path);
}

WaveTable load_wave_table_json(const std::string& path) {
    const json j = read_json_file(path);
    if (!j.is_object()) throw InputError(path + ": expected a JSON object");
    WaveTable t;
    t.model.c = j.contains("c") ? need_number(j, "c", path) : 0.0;
    t.model.d = need_number(j, "d", path);
    if (!j.contains("waves") || !j["waves"].is_array())
        throw InputError(path + ": missing 'waves' array");
    std::size_t row = 0;
    for (const json& e : j["waves"]) {
        ++row;
        const std::string where = path + ": wave " + std::to_string(row);
        if (!e.is_object()) throw InputError(where + ": expected an object");
        LogisticWave w;
        w.a = need_number(e, "a", where);
        w.b = need_number(e, "b", where);
        w.y_sat = need_number(e, "y_sat", where);
        if (!(w.a > 0.0)) throw InputError(where + ": scale a must be positive");
        w.edge = e.value("edge", false);
        t.model.waves.push_back(w);
        t.ids.push_back(e.contains("id") && e["id"].is_string()
                            ? e["id"].get<std::string>()
                            : std::to_string(row));
    }
    if (j.contains("r_squared") && j.contains("rmse")) {
        t.has_fit = true;
        t.r_squared = need_number(j, "r_squared", path);
        t.rmse = need_number(j, "rmse", path);
    }
    return t;
}

void save_wave_table_csv(const WaveTable& t, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot open " + path + " for writing");
    f << "id,a,b,y_sat,edge\n";
    char buf[64];
    for (std::size_t i = 0; i < t.model.waves.size(); ++i) {
        const LogisticWave& w = t.model.waves[i];
        f << (i < t.ids.size() ? t.ids[i] : std::to_string(i + 1));
        for (double v : {w.a, w.b, w.y_sat}) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            f << ',' << buf;
        }
        f << ',' << (w.edge ? "true" : "false") << '\n';
    }
    if (!f) throw InputError("failed writing " + path);
}

void save_chains_json(const std::vector<WaveChain>& chains,
                      const std::vector<std::string>& ids,
                      const std::string& path) {
    json arr = json::array();
    for (std::size_t ci = 0; ci < chains.size(); ++ci) {
        const WaveChain& c = chains[ci];
        json members = json::array();
        for (std::size_t m : c.member_ids)
            members.push_back(m < ids.size() ? ids[m] : std::to_string(m + 1));
        arr.push_back({{"chain_id", ci + 1},
                       {"member_ids", members},
                       {"slope", c.line_slope},
                       {"intercept", c.line_intercept},
                       {"residual_rms", c.residual_rms},
                       {"ratios", c.ratios},
                       {"reversal_flag", c.reversal_flag}});
    }
    write_json_file(arr, path);
}

void save_extrema_json(const std::vector<ScalogramExtremum>& extrema,
                       const std::string& path) {
    json arr = json::array();
    for (const ScalogramExtremum& e : extrema)
        arr.push_back({{"alpha", e.alpha},
                       {"beta", e.beta},
                       {"cwt_value", e.cwt_value},
                       {"y_sat", ysat_from_cwt(e)}});
    write_json_file(arr, path);
}

DiscreteDistribution load_distribution_json(const std::string& path) {
    const json j = read_json_file(path);
    if (!j.is_array() || j.empty())
        throw InputError(path + ": expected a nonempty array of rows");
    std::size_t arity = 0;
    std::vector<std::array<int, 3>> outcomes;
    std::vector<double> probs;
    std::size_t row = 0;
    for (const json& e : j) {
        ++row;
        const std::string where = path + ": row " + std::to_string(row);
        if (!e.is_object() || !e.contains("outcome") || !e["outcome"].is_array())
            throw InputError(where + ": expected {\"outcome\": [...], \"p\": number}");
        const json& o = e["outcome"];
        if (row == 1) {
            arity = o.size();
            if (arity < 1 || arity > 3)
                throw InputError(where + ": outcome tuples must have 1 to 3 entries");
        } else if (o.size() != arity) {
            throw InputError(where + ": outcome tuple length differs from row 1");
        }
        std::array<int, 3> tup{0, 0, 0};
        for (std::size_t k = 0; k < arity; ++k) {
            if (!o[k].is_number_integer())
                throw InputError(where + ": outcome entries must be integers");
            tup[k] = o[k].get<int>();
        }
        outcomes.push_back(tup);
        probs.push_back(need_number(e, "p", where));
    }
    try {
        return make_distribution(arity, std::move(outcomes), std::move(probs));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

DiscreteDistribution load_distribution_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    std::size_t arity = 0;
    std::vector<std::array<int, 3>> outcomes;
    std::vector<double> probs;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (arity == 0 && lineno == 1) {
            if (cells.size() < 2 || cells.size() > 4)
                throw InputError(path + ": header must list 1-3 outcome columns and a probability column");
            arity = cells.size() - 1;
            continue;
        }
        const std::string where = path + ": line " + std::to_string(lineno);
        if (cells.size() != arity + 1)
            throw InputError(where + ": wrong cell count");
        std::array<int, 3> tup{0, 0, 0};
        for (std::size_t k = 0; k < arity; ++k) {
            try {
                std::size_t used = 0;
                tup[k] = std::stoi(cells[k], &used);
                if (used != cells[k].size()) throw std::invalid_argument("");
            } catch (...) {
                throw InputError(where + ": unparseable outcome value");
            }
        }
        double p = 0.0;
        try {
            std::size_t used = 0;
            p = std::stod(cells[arity], &used);
            if (used != cells[arity].size()) throw std::invalid_argument("");
        } catch (...) {
            throw InputError(where + ": unparseable probability");
        }
        outcomes.push_back(tup);
        probs.push_back(p);
    }
    if (outcomes.empty()) throw InputError(path + ": no distribution rows");
    try {
        return make_distribution(arity, std::move(outcomes), std::move(probs));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

} // namespace logwave
