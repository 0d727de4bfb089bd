#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qps/config.hpp"
#include "qps/parallel.hpp"

#include <json.hpp>

namespace qps {

inline constexpr const char* version = "0.1.0";

struct RunOptions {
    std::string out_dir;  // empty: timestamped directory under cwd
    int workers = 0;      // 0 = library default
    std::optional<std::uint64_t> seed_override;
    par::Exec exec = par::Exec::openmp;
};

struct RunReport {
    bool ok = true;
    std::string out_dir;
    int n_rows = 0;
    std::vector<std::string> row_errors;
    std::vector<std::string> files;
    double wall_ms = 0.0;
    nlohmann::ordered_json summary;
    nlohmann::ordered_json json;  // full self-contained report
};

// Executes the experiment, writing config echo, CSVs, a gnuplot script and
// report.json into the run directory. Row failures are collected, not fatal.
RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

}  // namespace qps
