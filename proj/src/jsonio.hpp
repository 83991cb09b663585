#pragma once

#include "info.hpp"
#include "model.hpp"
#include "scalogram.hpp"
#include "trend.hpp"

#include <string>
#include <vector>

namespace logwave {

// A model plus row labels and (optionally) the fit quality that produced it.
struct WaveTable {
    std::vector<std::string> ids; // one per wave, same order
    MultilogisticModel model;
    bool has_fit = false;
    double r_squared = 0.0;
    double rmse = 0.0;
};

// Row labels "1".."k" for a bare model.
WaveTable to_wave_table(const MultilogisticModel& m);

// JSON layout: {"c":, "d":, "waves":[{"id","a","b","y_sat","edge"}]} with
// top-level "r_squared"/"rmse" present when the fit is known. On load the
// ids default to "1".."k" and edge to false when absent.
void save_wave_table_json(const WaveTable& t, const std::string& path);
WaveTable load_wave_table_json(const std::string& path);

// CSV mirror of the wave rows: header id,a,b,y_sat,edge.
void save_wave_table_csv(const WaveTable& t, const std::string& path);

// [{"chain_id","member_ids","slope","intercept","residual_rms","ratios",
//   "reversal_flag"}]; member ids come from the wave-table labels.
void save_chains_json(const std::vector<WaveChain>& chains,
                      const std::vector<std::string>& ids,
                      const std::string& path);

// [{"alpha","beta","cwt_value","y_sat"}] per extremum.
void save_extrema_json(const std::vector<ScalogramExtremum>& extrema,
                       const std::string& path);

// Distribution files. JSON: array of {"outcome": [ints], "p": number}; the
// tuple length (1..3) must be uniform. CSV: header with the outcome columns
// then a final probability column; e.g. "x1,x2,p". Errors name the offending
// row or line.
DiscreteDistribution load_distribution_json(const std::string& path);
DiscreteDistribution load_distribution_csv(const std::string& path);

} // namespace logwave
