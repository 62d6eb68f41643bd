#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "episis/config.hpp"

namespace episis {

struct RunOptions {
    /// Multiplies the configured realization count (at least 1 is kept).
    double scale = 1.0;
    /// Overrides the config's output directory when non-empty.
    std::filesystem::path out;
    /// Progress lines go here when non-null.
    std::ostream* log = nullptr;
};

/// One `summary.csv` row.
struct SummaryRow {
    double x;
    std::size_t n;
    double dieout_formula;
    double dieout_ruin;  ///< NaN unless the graph is complete and ruin is requested
    double dieout_chain; ///< NaN unless chain is requested
    double dieout_mc;    ///< NaN unless mc is requested
    double mc_ci;
};

struct ExperimentResult {
    std::vector<std::filesystem::path> files;
    /// Per graph instance (label, rows).
    std::vector<std::pair<std::string, std::vector<SummaryRow>>> summaries;
};

/// Runs every (graph, x, n) combination of the config and writes one CSV per
/// method plus `summary.csv` with columns
/// `x,n,dieout_formula,dieout_ruin,dieout_chain,dieout_mc,mc_ci`.
/// Several graph instances get one subdirectory each.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Names of the built-in figure presets.
std::vector<std::string> preset_names();

/// Text of a built-in preset; throws InvalidArgument for unknown names.
std::string preset_text(const std::string& name);

} // namespace episis
