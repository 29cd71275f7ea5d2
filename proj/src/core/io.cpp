#include "io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace relaybf {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        if (!item.empty()) {
            out.push_back(item);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        s.remove_prefix(comma + 1);
    }
    return out;
}

double parse_double(std::string_view key, std::string_view v) {
    v = trim(v);
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ParseError("value of '" + std::string(key) + "' is not a number: '" +
                         std::string(v) + "'");
    }
    return out;
}

long long parse_integer(std::string_view key, std::string_view v) {
    v = trim(v);
    long long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ParseError("value of '" + std::string(key) + "' is not an integer: '" +
                         std::string(v) + "'");
    }
    return out;
}

int parse_int(std::string_view key, std::string_view v) {
    const long long x = parse_integer(key, v);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw ParseError("value of '" + std::string(key) + "' is out of range");
    }
    return static_cast<int>(x);
}

nlohmann::json json_number(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return format_double(v);
}

}  // namespace

void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    SystemConfig& c = spec.base_config;
    if (key == "M") {
        c.M = parse_int(key, value);
    } else if (key == "N") {
        c.N = parse_int(key, value);
    } else if (key == "K") {
        c.K = parse_int(key, value);
    } else if (key == "R") {
        c.R = parse_int(key, value);
    } else if (key == "Ps") {
        c.Ps = parse_double(key, value);
    } else if (key == "Pr") {
        c.Pr = parse_double(key, value);
    } else if (key == "sigma1_sq") {
        c.sigma1_sq = parse_double(key, value);
    } else if (key == "sigma2_sq") {
        c.sigma2_sq = parse_double(key, value);
    } else if (key == "e1_sq") {
        c.e1_sq = parse_double(key, value);
    } else if (key == "e2_sq") {
        c.e2_sq = parse_double(key, value);
    } else if (key == "snr_bc_db") {
        c.set_snr_bc_db(parse_double(key, value));
    } else if (key == "snr_fc_db") {
        c.set_snr_fc_db(parse_double(key, value));
    } else if (key == "error_power") {
        c.e1_sq = c.e2_sq = parse_double(key, value);
    } else if (key == "name") {
        spec.name = std::string(value);
    } else if (key == "sweep_axis") {
        spec.sweep_axis = parse_axis(value);
    } else if (key == "sweep_values") {
        spec.sweep_values.clear();
        for (auto item : split_list(value)) {
            spec.sweep_values.push_back(parse_double(key, item));
        }
    } else if (key == "error_branches") {
        spec.error_branches.clear();
        for (auto item : split_list(value)) {
            spec.error_branches.push_back(parse_double(key, item));
        }
    } else if (key == "schemes") {
        spec.schemes.clear();
        for (auto item : split_list(value)) {
            const auto s = parse_scheme(item);
            if (!s) {
                throw UnknownSchemeError("unknown scheme '" + std::string(item) + "'");
            }
            spec.schemes.push_back(*s);
        }
    } else if (key == "trials") {
        spec.trials = parse_int(key, value);
    } else if (key == "seed") {
        const long long s = parse_integer(key, value);
        if (s < 0) {
            throw ParseError("seed must be non-negative");
        }
        spec.master_seed = static_cast<std::uint64_t>(s);
    } else if (key == "average_domain") {
        spec.average_domain = parse_domain(value);
    } else if (key == "threads") {
        spec.threads = parse_int(key, value);
    } else {
        throw ParseError("unknown key '" + std::string(key) + "'");
    }
}

void apply_override(ExperimentSpec& spec, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ParseError("override must look like key=value: '" + std::string(assignment) + "'");
    }
    apply_setting(spec, assignment.substr(0, eq), assignment.substr(eq + 1));
}

void apply_config_text(ExperimentSpec& spec, std::string_view text) {
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
        }
        try {
            apply_setting(spec, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void apply_config_file(ExperimentSpec& spec, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(spec, ss.str());
}

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void write_csv(const ResultTable& table, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : table.rows) {
        out << format_double(r.sweep_value) << ',' << r.scheme << ',' << format_double(r.mean_metric)
            << ',' << format_double(r.stderr_metric) << ',' << r.trials << ','
            << format_double(r.alpha_bc_mean) << ',' << format_double(r.alpha_fc_mean) << '\n';
    }
}

void write_json(const ResultTable& table, std::ostream& out) {
    using nlohmann::json;
    const ExperimentSpec& spec = table.spec;
    const SystemConfig& c = spec.base_config;
    json schemes = json::array();
    for (Scheme s : spec.schemes) {
        schemes.push_back(std::string(scheme_name(s)));
    }
    json branches = json::array();
    for (double b : spec.error_branches) {
        branches.push_back(b);
    }
    json meta = {
        {"version", std::string(kVersion)},
        {"name", spec.name},
        {"seed", spec.master_seed},
        {"trials_requested", spec.trials},
        {"sweep_axis", std::string(axis_name(spec.sweep_axis))},
        {"sweep_values", spec.sweep_values},
        {"schemes", schemes},
        {"error_branches", branches},
        {"average_domain", std::string(domain_name(spec.average_domain))},
        {"metric_units", spec.average_domain == AverageDomain::LinearSinr ? "dB of mean linear SINR"
                         : spec.average_domain == AverageDomain::DbSinr   ? "mean dB SINR"
                                                                          : "bits/s/Hz"},
        {"config",
         {{"M", c.M},
          {"N", c.N},
          {"K", c.K},
          {"R", c.R},
          {"Ps", c.Ps},
          {"Pr", c.Pr},
          {"sigma1_sq", c.sigma1_sq},
          {"sigma2_sq", c.sigma2_sq},
          {"e1_sq", c.e1_sq},
          {"e2_sq", c.e2_sq},
          {"snr_bc_db", c.snr_bc_db()},
          {"snr_fc_db", c.snr_fc_db()}}},
    };
    json rows = json::array();
    for (const auto& r : table.rows) {
        json row = {
            {"sweep_value", json_number(r.sweep_value)},
            {"scheme", r.scheme},
            {"mean_metric", json_number(r.mean_metric)},
            {"stderr_metric", json_number(r.stderr_metric)},
            {"trials", r.trials},
            {"alpha_bc_mean", json_number(r.alpha_bc_mean)},
            {"alpha_fc_mean", json_number(r.alpha_fc_mean)},
            {"raw_mean", json_number(r.raw_mean)},
            {"raw_stderr", json_number(r.raw_stderr)},
            {"excluded", r.excluded},
            {"status", r.failed ? "failed" : "ok"},
        };
        if (!r.reason.empty()) {
            row["reason"] = r.reason;
        }
        rows.push_back(std::move(row));
    }
    out << json{{"metadata", meta}, {"rows", rows}}.dump(2) << '\n';
}

std::string to_csv(const ResultTable& table) {
    std::ostringstream os;
    write_csv(table, os);
    return os.str();
}

std::string to_json(const ResultTable& table) {
    std::ostringstream os;
    write_json(table, os);
    return os.str();
}

}  // namespace relaybf
