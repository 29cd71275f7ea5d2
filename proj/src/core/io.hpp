#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "harness.hpp"

namespace relaybf {

inline constexpr std::string_view kVersion = "relaybf 0.1.0";
inline constexpr std::string_view kCsvHeader =
    "sweep_value,scheme,mean_metric,stderr_metric,trials,alpha_bc_mean,alpha_fc_mean";

/// Applies one `key = value` setting. System keys: M N K R Ps Pr sigma1_sq
/// sigma2_sq e1_sq e2_sq snr_bc_db snr_fc_db error_power. Experiment keys:
/// name sweep_axis sweep_values schemes error_branches trials seed
/// average_domain threads. Unknown keys and malformed values raise ParseError,
/// unknown scheme names UnknownSchemeError.
void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value);

/// Parses `key=value` (the form used by --set).
void apply_override(ExperimentSpec& spec, std::string_view assignment);

/// Flat key-value text: one `key = value` per line, `#` starts a comment.
void apply_config_text(ExperimentSpec& spec, std::string_view text);
void apply_config_file(ExperimentSpec& spec, const std::string& path);

/// Shortest text that round-trips to the same double; "inf"/"-inf"/"nan".
std::string format_double(double v);

void write_csv(const ResultTable& table, std::ostream& out);
void write_json(const ResultTable& table, std::ostream& out);
std::string to_csv(const ResultTable& table);
std::string to_json(const ResultTable& table);

}  // namespace relaybf
