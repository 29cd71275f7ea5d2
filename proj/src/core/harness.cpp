#include "harness.hpp"

#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

#include "metrics.hpp"

namespace relaybf {

namespace {

constexpr std::array<std::string_view, 6> kPresets = {"fig2", "fig3", "fig4",
                                                      "fig5", "fig6", "fig7"};

struct TrialOutcome {
    double metric = 0.0;
    double alpha_bc = 0.0;
    double alpha_fc = 0.0;
    bool ok = false;
    std::string reason;
};

double trial_metric(const RVector& sinr, AverageDomain domain) {
    switch (domain) {
        case AverageDomain::LinearSinr: return sinr.mean();
        case AverageDomain::DbSinr: {
            double s = 0.0;
            for (double v : sinr) {
                s += 10.0 * std::log10(v);
            }
            return s / static_cast<double>(sinr.size());
        }
        case AverageDomain::SumRate: return sum_rate(sinr);
    }
    return 0.0;
}

TrialOutcome run_trial(Scheme scheme, const ChannelRealization& real, const SystemConfig& cfg,
                       AverageDomain domain) {
    TrialOutcome out;
    try {
        const BeamformerDesign d = design(scheme, real, cfg);
        out.metric = trial_metric(sinr_exact(effective_link(d, real, cfg)), domain);
        out.alpha_bc = d.alpha_bc;
        out.alpha_fc = d.alpha_fc;
        out.ok = true;
    } catch (const DesignError& e) {
        out.reason = e.what();
    } catch (const NumericError& e) {
        out.reason = e.what();
    }
    return out;
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string row_label(Scheme s, const double* branch) {
    std::string label(scheme_name(s));
    if (branch != nullptr) {
        label += "@e2=" + format_number(*branch);
    }
    return label;
}

ResultRow reduce(const std::vector<TrialOutcome>& trials, AverageDomain domain) {
    ResultRow row;
    double sum = 0.0;
    double abc = 0.0;
    double afc = 0.0;
    for (const auto& t : trials) {
        if (t.ok) {
            ++row.trials;
            sum += t.metric;
            abc += t.alpha_bc;
            afc += t.alpha_fc;
        } else {
            ++row.excluded;
            if (row.reason.empty()) {
                row.reason = t.reason;
            }
        }
    }
    if (row.trials == 0) {
        row.failed = true;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.mean_metric = row.stderr_metric = row.raw_mean = row.raw_stderr = nan;
        row.alpha_bc_mean = row.alpha_fc_mean = nan;
        return row;
    }
    const double n = static_cast<double>(row.trials);
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& t : trials) {
        if (t.ok) {
            ss += (t.metric - mean) * (t.metric - mean);
        }
    }
    double se = row.trials > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    if (!std::isfinite(mean)) {
        se = std::numeric_limits<double>::infinity();
    }
    row.raw_mean = mean;
    row.raw_stderr = se;
    row.alpha_bc_mean = abc / n;
    row.alpha_fc_mean = afc / n;
    if (domain == AverageDomain::LinearSinr) {
        row.mean_metric = 10.0 * std::log10(mean);
        row.stderr_metric = std::isfinite(mean) && mean > 0.0 ? 10.0 / std::log(10.0) * se / mean
                                                              : std::numeric_limits<double>::infinity();
    } else {
        row.mean_metric = mean;
        row.stderr_metric = se;
    }
    return row;
}

void for_each_parallel(std::size_t count, int threads, const auto& fn) {
    unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count && !failed; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        if (!failed.exchange(true)) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::vector<double> linspace_step(double lo, double hi, double step) {
    std::vector<double> v;
    const int n = static_cast<int>(std::lround((hi - lo) / step));
    for (int i = 0; i <= n; ++i) {
        v.push_back(std::round((lo + step * i) * 1e12) / 1e12);
    }
    return v;
}

}  // namespace

std::string_view axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::SnrBcDb: return "snr_bc_db";
        case SweepAxis::SnrFcDb: return "snr_fc_db";
        case SweepAxis::K: return "K";
        case SweepAxis::ErrorPower: return "error_power";
        case SweepAxis::R: return "R";
    }
    return "unknown";
}

SweepAxis parse_axis(std::string_view name) {
    for (SweepAxis a : {SweepAxis::SnrBcDb, SweepAxis::SnrFcDb, SweepAxis::K,
                        SweepAxis::ErrorPower, SweepAxis::R}) {
        if (axis_name(a) == name) {
            return a;
        }
    }
    throw ParseError("unknown sweep axis '" + std::string(name) + "'");
}

std::string_view domain_name(AverageDomain d) {
    switch (d) {
        case AverageDomain::LinearSinr: return "linear_sinr";
        case AverageDomain::DbSinr: return "db_sinr";
        case AverageDomain::SumRate: return "sum_rate";
    }
    return "unknown";
}

AverageDomain parse_domain(std::string_view name) {
    for (AverageDomain d :
         {AverageDomain::LinearSinr, AverageDomain::DbSinr, AverageDomain::SumRate}) {
        if (domain_name(d) == name) {
            return d;
        }
    }
    throw ParseError("unknown average domain '" + std::string(name) + "'");
}

SystemConfig config_at(const ExperimentSpec& spec, double v, const double* branch) {
    SystemConfig c = spec.base_config;
    switch (spec.sweep_axis) {
        case SweepAxis::SnrBcDb: c.set_snr_bc_db(v); break;
        case SweepAxis::SnrFcDb: c.set_snr_fc_db(v); break;
        case SweepAxis::K: c.M = c.N = c.K = static_cast<int>(std::lround(v)); break;
        case SweepAxis::ErrorPower: c.e1_sq = c.e2_sq = v; break;
        case SweepAxis::R: c.R = static_cast<int>(std::lround(v)); break;
    }
    if (branch != nullptr) {
        c.e1_sq = c.e2_sq = *branch;
    }
    return c;
}

void ExperimentSpec::validate() const {
    if (sweep_values.empty()) {
        throw ConfigError("invalid experiment: sweep_values is empty");
    }
    const bool up = sweep_values.size() < 2 || sweep_values[1] > sweep_values[0];
    for (std::size_t i = 1; i < sweep_values.size(); ++i) {
        if (up ? !(sweep_values[i] > sweep_values[i - 1])
               : !(sweep_values[i] < sweep_values[i - 1])) {
            throw ConfigError("invalid experiment: sweep_values must be strictly monotone");
        }
    }
    if (sweep_axis == SweepAxis::K || sweep_axis == SweepAxis::R) {
        for (double v : sweep_values) {
            if (v != std::round(v)) {
                throw ConfigError("invalid experiment: integer axis with fractional value");
            }
        }
    }
    if (trials < 1) {
        throw ConfigError("invalid experiment: trials must be >= 1");
    }
    if (schemes.empty()) {
        throw ConfigError("invalid experiment: no schemes selected");
    }
    if (sweep_axis == SweepAxis::ErrorPower && !error_branches.empty()) {
        throw ConfigError("invalid experiment: error_branches conflict with an error_power sweep");
    }
    std::vector<std::optional<double>> branches;
    if (error_branches.empty()) {
        branches.emplace_back();
    }
    for (double b : error_branches) {
        branches.emplace_back(b);
    }
    for (double v : sweep_values) {
        for (const auto& b : branches) {
            const SystemConfig c = config_at(*this, v, b ? &*b : nullptr);
            for (Scheme s : schemes) {
                if (is_svd_scheme(s)) {
                    if (c.R > 1) {
                        throw ConfigError("invalid experiment: scheme " +
                                          std::string(scheme_name(s)) +
                                          " needs a single relay (R=1)");
                    }
                    c.require_single_relay_svd();
                } else {
                    c.require_square();
                }
            }
        }
    }
}

std::uint64_t realization_seed(std::uint64_t master_seed, std::size_t grid_index,
                               std::size_t trial) {
    return derive_seed(master_seed, 0x6772696400000000ULL + grid_index, trial);
}

ResultTable run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const std::size_t G = spec.sweep_values.size();
    const std::size_t B = std::max<std::size_t>(spec.error_branches.size(), 1);
    const std::size_t S = spec.schemes.size();
    const std::size_t T = static_cast<std::size_t>(spec.trials);

    // outcomes[((g * B + b) * S + s) * T + t]; each slot written by exactly one task.
    std::vector<TrialOutcome> outcomes(G * B * S * T);
    for_each_parallel(G * T, spec.threads, [&](std::size_t task) {
        const std::size_t g = task / T;
        const std::size_t t = task % T;
        const std::uint64_t seed = realization_seed(spec.master_seed, g, t);
        for (std::size_t b = 0; b < B; ++b) {
            const double* branch = spec.error_branches.empty() ? nullptr : &spec.error_branches[b];
            const SystemConfig cfg = config_at(spec, spec.sweep_values[g], branch);
            const ChannelRealization real = generate_realization(cfg, seed);
            for (std::size_t s = 0; s < S; ++s) {
                outcomes[((g * B + b) * S + s) * T + t] =
                    run_trial(spec.schemes[s], real, cfg, spec.average_domain);
            }
        }
    });

    ResultTable table;
    table.spec = spec;
    for (std::size_t g = 0; g < G; ++g) {
        for (std::size_t b = 0; b < B; ++b) {
            const double* branch = spec.error_branches.empty() ? nullptr : &spec.error_branches[b];
            for (std::size_t s = 0; s < S; ++s) {
                const auto first = outcomes.begin() + static_cast<std::ptrdiff_t>(((g * B + b) * S + s) * T);
                const std::vector<TrialOutcome> slice(first, first + static_cast<std::ptrdiff_t>(T));
                ResultRow row = reduce(slice, spec.average_domain);
                row.sweep_value = spec.sweep_values[g];
                row.scheme = row_label(spec.schemes[s], branch);
                table.rows.push_back(std::move(row));
            }
        }
    }
    return table;
}

std::vector<double> trial_metrics(const ExperimentSpec& spec, std::size_t grid_index,
                                  Scheme scheme, const double* branch) {
    const SystemConfig cfg = config_at(spec, spec.sweep_values.at(grid_index), branch);
    std::vector<double> out;
    for (std::size_t t = 0; t < static_cast<std::size_t>(spec.trials); ++t) {
        const ChannelRealization real =
            generate_realization(cfg, realization_seed(spec.master_seed, grid_index, t));
        const TrialOutcome o = run_trial(scheme, real, cfg, spec.average_domain);
        if (o.ok) {
            out.push_back(o.metric);
        }
    }
    return out;
}

std::span<const std::string_view> preset_names() { return kPresets; }

ExperimentSpec preset(std::string_view name) {
    using enum Scheme;
    ExperimentSpec spec;
    spec.name = std::string(name);
    spec.trials = 10000;
    spec.master_seed = 1;
    SystemConfig& c = spec.base_config;
    c.M = c.N = c.K = 4;
    c.R = 1;
    c.set_snr_bc_db(20.0);
    c.set_snr_fc_db(20.0);
    const std::vector<Scheme> single = {RobustSvdRzf, SvdZf, SvdMf, ZfZf, MmseRzfConventional,
                                        RobustMmseRzf};
    std::vector<Scheme> single_with_rzf = single;
    single_with_rzf.insert(single_with_rzf.begin() + 1, SvdRzf);
    const std::vector<double> error_grid = linspace_step(0.0, 0.3, 0.05);

    if (name == "fig2") {
        c.e1_sq = c.e2_sq = 0.2;
        spec.sweep_axis = SweepAxis::SnrBcDb;
        spec.sweep_values = {0, 5, 10, 15, 20};
        spec.schemes = single;
    } else if (name == "fig3") {
        c.e1_sq = c.e2_sq = 0.1;
        spec.sweep_axis = SweepAxis::SnrFcDb;
        spec.sweep_values = linspace_step(0.0, 40.0, 5.0);
        spec.schemes = single_with_rzf;
    } else if (name == "fig4") {
        c.e1_sq = c.e2_sq = 0.1;
        spec.sweep_axis = SweepAxis::K;
        spec.sweep_values = {2, 3, 4, 5, 6, 7, 8};
        spec.schemes = single_with_rzf;
    } else if (name == "fig5") {
        c.R = 10;
        spec.sweep_axis = SweepAxis::ErrorPower;
        spec.sweep_values = error_grid;
        spec.schemes = {RobustMmseRzf, MmseRzfConventional, ZfZf};
    } else if (name == "fig6") {
        c.R = 10;
        c.set_snr_bc_db(10.0);
        spec.sweep_axis = SweepAxis::ErrorPower;
        spec.sweep_values = error_grid;
        spec.schemes = {RobustMmseRzf, MmseRzfConventional};
    } else if (name == "fig7") {
        spec.sweep_axis = SweepAxis::R;
        spec.sweep_values = {2, 4, 6, 8, 10};
        spec.schemes = {RobustMmseRzf, MmseRzfConventional, ZfZf};
        spec.error_branches = {0.0, 0.2};
        spec.average_domain = AverageDomain::SumRate;
    } else {
        throw UnknownPresetError("unknown preset '" + std::string(name) +
                                 "' (expected fig2..fig7)");
    }
    return spec;
}

}  // namespace relaybf
