#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beamformers.hpp"

namespace relaybf {

enum class SweepAxis { SnrBcDb, SnrFcDb, K, ErrorPower, R };
enum class AverageDomain { LinearSinr, DbSinr, SumRate };

std::string_view axis_name(SweepAxis a);
SweepAxis parse_axis(std::string_view name);
std::string_view domain_name(AverageDomain d);
AverageDomain parse_domain(std::string_view name);

struct ExperimentSpec {
    std::string name = "custom";
    SystemConfig base_config;
    SweepAxis sweep_axis = SweepAxis::SnrBcDb;
    std::vector<double> sweep_values;
    std::vector<Scheme> schemes;
    /// Optional e1^2 = e2^2 variants run on the same realizations; rows are
    /// tagged "<scheme>@e2=<value>". Empty means the base config only.
    std::vector<double> error_branches;
    int trials = 10000;
    std::uint64_t master_seed = 1;
    AverageDomain average_domain = AverageDomain::LinearSinr;
    /// Worker threads; 0 picks the hardware concurrency. Never affects results.
    int threads = 0;

    /// Throws ConfigError on an empty or non-monotone grid, bad trial count,
    /// or a scheme that cannot run at some grid point.
    void validate() const;
};

/// Config at one grid point, optionally with an error-power branch applied.
SystemConfig config_at(const ExperimentSpec& spec, double sweep_value,
                       const double* branch_error_power = nullptr);

struct ResultRow {
    double sweep_value = 0.0;
    std::string scheme;
    double mean_metric = 0.0;    ///< reported units (dB for linear_sinr, see below)
    double stderr_metric = 0.0;
    int trials = 0;              ///< realizations included in the mean
    int excluded = 0;            ///< realizations whose design failed
    double alpha_bc_mean = 0.0;
    double alpha_fc_mean = 0.0;
    /// Mean and stderr before the dB conversion applied in linear_sinr mode.
    double raw_mean = 0.0;
    double raw_stderr = 0.0;
    bool failed = false;
    std::string reason;
};

/// In linear_sinr mode the per-user SINR is averaged linearly and then
/// reported in dB (stderr by the delta method). db_sinr averages dB values;
/// sum_rate averages 0.5 sum log2(1 + SINR_k).
struct ResultTable {
    ExperimentSpec spec;
    std::vector<ResultRow> rows;
};

ResultTable run_experiment(const ExperimentSpec& spec);

/// Per-trial metric samples for one (grid point, scheme), in trial order;
/// failed trials are omitted. Used by paired comparisons.
std::vector<double> trial_metrics(const ExperimentSpec& spec, std::size_t grid_index,
                                  Scheme scheme, const double* branch_error_power = nullptr);

ExperimentSpec preset(std::string_view name);
std::span<const std::string_view> preset_names();

/// Seed of trial `trial` at grid point `grid_index`. Shared by all schemes
/// and error branches so their comparisons are paired.
std::uint64_t realization_seed(std::uint64_t master_seed, std::size_t grid_index,
                               std::size_t trial);

}  // namespace relaybf
