// Command-line front end. Links only the C interface.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaybf/relaybf.h"

namespace {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kConfig = 3,
    kUnknownScheme = 4,
    kUnknownPreset = 5,
    kParse = 6,
    kIo = 7,
    kNumeric = 8,
};

int exit_code_for(rbf_status st) {
    switch (st) {
        case RBF_OK: return kOk;
        case RBF_ERR_CONFIG: return kConfig;
        case RBF_ERR_UNKNOWN_SCHEME: return kUnknownScheme;
        case RBF_ERR_UNKNOWN_PRESET: return kUnknownPreset;
        case RBF_ERR_PARSE: return kParse;
        case RBF_ERR_IO: return kIo;
        case RBF_ERR_NUMERIC:
        case RBF_ERR_DESIGN: return kNumeric;
        case RBF_ERR_INVALID_ARGUMENT: return kUsage;
        default: return kInternal;
    }
}

struct Failure {
    rbf_status status;
    std::string message;  ///< overrides rbf_last_error() when set
};

void check(rbf_status st) {
    if (st != RBF_OK) {
        throw Failure{st, {}};
    }
}

struct ExperimentHandle {
    rbf_experiment h = nullptr;
    ~ExperimentHandle() { rbf_experiment_destroy(h); }
};

struct ResultHandle {
    rbf_result h = nullptr;
    ~ResultHandle() { rbf_result_destroy(h); }
};

struct RunOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string trials;
    std::string seed;
    std::string schemes;
    std::string threads;
    std::string out;
    std::string format = "csv";
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
    cmd->add_option("--config", o.config_path, "flat key = value config file");
    cmd->add_option("--set", o.overrides, "override key=value (repeatable)");
    cmd->add_option("--trials", o.trials, "realizations per grid point");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--schemes", o.schemes, "comma-separated scheme list");
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    cmd->add_option("--out", o.out, "output path (default: standard output)");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void apply_options(rbf_experiment exp, const RunOptions& o) {
    if (!o.config_path.empty()) {
        check(rbf_experiment_load_config(exp, o.config_path.c_str()));
    }
    for (const auto& ov : o.overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos) {
            throw Failure{RBF_ERR_PARSE, "--set expects key=value, got '" + ov + "'"};
        }
        check(rbf_experiment_set(exp, ov.substr(0, eq).c_str(), ov.substr(eq + 1).c_str()));
    }
    const std::pair<const char*, const std::string*> flags[] = {
        {"trials", &o.trials}, {"seed", &o.seed}, {"schemes", &o.schemes}, {"threads", &o.threads}};
    for (const auto& [key, value] : flags) {
        if (!value->empty()) {
            check(rbf_experiment_set(exp, key, value->c_str()));
        }
    }
}

int run(rbf_experiment exp, const RunOptions& o, const std::string& label) {
    check(rbf_experiment_validate(exp));
    size_t points = 0;
    check(rbf_experiment_grid_size(exp, &points));

    const auto start = std::chrono::steady_clock::now();
    ResultHandle res;
    check(rbf_experiment_run(exp, &res.h));
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const rbf_format fmt = o.format == "json" ? RBF_FORMAT_JSON : RBF_FORMAT_CSV;
    if (o.out.empty()) {
        size_t needed = 0;
        check(rbf_result_serialize(res.h, fmt, nullptr, 0, &needed));
        std::string text(needed, '\0');
        check(rbf_result_serialize(res.h, fmt, text.data(), text.size(), &needed));
        text.resize(needed - 1);
        std::cout << text;
    } else {
        check(rbf_result_write(res.h, o.out.c_str(), fmt));
    }

    size_t rows = 0;
    check(rbf_result_row_count(res.h, &rows));
    int trials = 0;
    if (rows > 0) {
        rbf_result_row row{};
        check(rbf_result_get_row(res.h, 0, &row));
        trials = row.trials + row.excluded;
    }
    std::fprintf(stderr, "relaybf: %s: %zu grid points, %zu rows, %d trials/point, %.2f s\n",
                 label.c_str(), points, rows, trials, seconds);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo evaluation of MIMO relay broadcast beamformers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(rbf_version()));

    RunOptions run_opts;
    auto* run_cmd = app.add_subcommand("run", "run a custom sweep from a config file and overrides");
    add_run_options(run_cmd, run_opts);

    RunOptions preset_opts;
    std::string preset_name;
    auto* preset_cmd = app.add_subcommand("preset", "run a figure preset (fig2..fig7)");
    preset_cmd->add_option("name", preset_name, "preset name")->required();
    add_run_options(preset_cmd, preset_opts);

    std::string validate_path;
    std::vector<std::string> validate_overrides;
    auto* validate_cmd = app.add_subcommand("validate", "check a config file");
    validate_cmd->add_option("--config", validate_path, "config file")->required();
    validate_cmd->add_option("--set", validate_overrides, "override key=value (repeatable)");

    auto* list_cmd = app.add_subcommand("list-schemes", "print the scheme names");
    auto* presets_cmd = app.add_subcommand("list-presets", "print the preset names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*list_cmd) {
            for (size_t i = 0; i < rbf_scheme_count(); ++i) {
                std::cout << rbf_scheme_name(i) << '\n';
            }
            return kOk;
        }
        if (*presets_cmd) {
            for (size_t i = 0; i < rbf_preset_count(); ++i) {
                std::cout << rbf_preset_name(i) << '\n';
            }
            return kOk;
        }
        ExperimentHandle exp;
        if (*validate_cmd) {
            check(rbf_experiment_create(&exp.h));
            RunOptions o;
            o.config_path = validate_path;
            o.overrides = validate_overrides;
            apply_options(exp.h, o);
            check(rbf_experiment_validate_config(exp.h));
            size_t points = 0;
            check(rbf_experiment_grid_size(exp.h, &points));
            if (points > 0) {
                check(rbf_experiment_validate(exp.h));
            }
            std::cout << "ok\n";
            return kOk;
        }
        if (*preset_cmd) {
            check(rbf_experiment_from_preset(preset_name.c_str(), &exp.h));
            apply_options(exp.h, preset_opts);
            return run(exp.h, preset_opts, preset_name);
        }
        check(rbf_experiment_create(&exp.h));
        apply_options(exp.h, run_opts);
        return run(exp.h, run_opts, "run");
    } catch (const Failure& f) {
        const char* detail = f.message.empty() ? rbf_last_error() : f.message.c_str();
        std::cerr << "relaybf: " << rbf_status_string(f.status);
        if (detail != nullptr && *detail != '\0') {
            std::cerr << ": " << detail;
        }
        std::cerr << '\n';
        return exit_code_for(f.status);
    }
}
