#include "relaybf/relaybf.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "harness.hpp"
#include "io.hpp"
#include "metrics.hpp"

struct rbf_experiment_s {
    relaybf::ExperimentSpec spec;
};

struct rbf_result_s {
    relaybf::ResultTable table;
};

namespace {

thread_local std::string g_last_error;

rbf_status fail(rbf_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

/// Runs fn, mapping the core's exception hierarchy onto status codes.
template <typename Fn>
rbf_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        fn();
        return RBF_OK;
    } catch (const relaybf::ConfigError& e) {
        return fail(RBF_ERR_CONFIG, e.what());
    } catch (const relaybf::UnknownSchemeError& e) {
        return fail(RBF_ERR_UNKNOWN_SCHEME, e.what());
    } catch (const relaybf::UnknownPresetError& e) {
        return fail(RBF_ERR_UNKNOWN_PRESET, e.what());
    } catch (const relaybf::ParseError& e) {
        return fail(RBF_ERR_PARSE, e.what());
    } catch (const relaybf::IoError& e) {
        return fail(RBF_ERR_IO, e.what());
    } catch (const relaybf::DesignError& e) {
        return fail(RBF_ERR_DESIGN, e.what());
    } catch (const relaybf::NumericError& e) {
        return fail(RBF_ERR_NUMERIC, e.what());
    } catch (const relaybf::DomainError& e) {
        return fail(RBF_ERR_NUMERIC, e.what());
    } catch (const relaybf::ContractError& e) {
        return fail(RBF_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(RBF_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(RBF_ERR_INTERNAL, "unknown error");
    }
}

std::string serialize(const relaybf::ResultTable& t, rbf_format f) {
    return f == RBF_FORMAT_JSON ? relaybf::to_json(t) : relaybf::to_csv(t);
}

}  // namespace

extern "C" {

const char* rbf_version(void) { return relaybf::kVersion.data(); }

const char* rbf_status_string(rbf_status status) {
    switch (status) {
        case RBF_OK: return "ok";
        case RBF_ERR_INVALID_ARGUMENT: return "invalid argument";
        case RBF_ERR_CONFIG: return "invalid configuration";
        case RBF_ERR_UNKNOWN_SCHEME: return "unknown scheme";
        case RBF_ERR_UNKNOWN_PRESET: return "unknown preset";
        case RBF_ERR_PARSE: return "parse error";
        case RBF_ERR_IO: return "I/O error";
        case RBF_ERR_NUMERIC: return "numeric error";
        case RBF_ERR_DESIGN: return "design error";
        case RBF_ERR_BUFFER_TOO_SMALL: return "buffer too small";
        case RBF_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* rbf_last_error(void) { return g_last_error.c_str(); }

size_t rbf_scheme_count(void) { return relaybf::all_schemes().size(); }

const char* rbf_scheme_name(size_t index) {
    const auto schemes = relaybf::all_schemes();
    // scheme_name returns views of string literals, so data() is NUL-terminated.
    return index < schemes.size() ? relaybf::scheme_name(schemes[index]).data() : nullptr;
}

size_t rbf_preset_count(void) { return relaybf::preset_names().size(); }

const char* rbf_preset_name(size_t index) {
    const auto names = relaybf::preset_names();
    return index < names.size() ? names[index].data() : nullptr;
}

rbf_status rbf_experiment_create(rbf_experiment* out) {
    if (out == nullptr) {
        return fail(RBF_ERR_INVALID_ARGUMENT, "null output handle");
    }
    return guarded([&] { *out = new rbf_experiment_s{}; });
}

rbf_status rbf_experiment_from_preset(const char* name, rbf_experiment* out) {
    if (name == nullptr || out == nullptr) {
        return fail(RBF_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] { *out = new rbf_experiment_s{relaybf::preset(name)}; });
}

rbf_status rbf_experiment_load_config(rbf_experiment exp, const char* path) {
    if (exp == nullptr || path == nullptr) {
        return fail(RBF_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] { relaybf::apply_config_file(exp->spec, path); });
}

rbf_status rbf_experiment_set(rbf_experiment exp, const char* key, const char* value) {
    if (exp == nullptr || key == nullptr || value == nullptr) {
        return fail(RBF_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] { relaybf::apply_setting(exp->spec, key, value); });
}

rbf_status rbf_experiment_validate_config(rbf_experiment exp) {
    if (exp == nullptr) {
        return fail(RBF_ERR_INVALID_ARGUMENT, "null handle");
    }
    return guarded([&] { exp->spec.base_config.validate(); });
}

rbf_status rbf_experiment_validate(rbf_experiment exp) {
    if (exp == nullptr) {
        return fail(RBF_ERR_INVALID_ARGUMENT, "null handle");
    }
    return guarded([&] {
        exp->spec.base_config.validate();
        exp->spec.validate();
    });
}

rbf_status rbf_experiment_grid_size(rbf_experiment exp, size_t* points) {
    if (exp == nullptr || points == nullptr) {
        return fail(RBF_ERR_INVALID_ARGUMENT, "null argument");
    }
    *points = exp->spec.sweep_values.size();
    return RBF_OK;
}

rbf_status rbf_experiment_run(rbf_experiment exp, rbf_result* out) {
    if (exp == nullptr || out == nullptr) {
        return fail(RBF_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] { *out = new rbf_result_s{relaybf::run_experiment(exp->spec)}; });
}

void rbf_experiment_destroy(rbf_experiment exp) { delete exp; }

rbf_status rbf_result_row_count(rbf_result res, size_t* count) {
    if (res == nullptr || count == nullptr) {
        return fail(RBF_ERR_INVALID_ARGUMENT, "null argument");
    }
    *count = res->table.rows.size();
    return RBF_OK;
}

rbf_status rbf_result_get_row(rbf_result res, size_t index, rbf_result_row* row) {
    if (res == nullptr || row == nullptr) {
        return fail(RBF_ERR_INVALID_ARGUMENT, "null argument");
    }
    if (index >= res->table.rows.size()) {
        return fail(RBF_ERR_INVALID_ARGUMENT, "row index out of range");
    }
    const auto& r = res->table.rows[index];
    row->sweep_value = r.sweep_value;
    row->scheme = r.scheme.c_str();
    row->mean_metric = r.mean_metric;
    row->stderr_metric = r.stderr_metric;
    row->trials = r.trials;
    row->excluded = r.excluded;
    row->alpha_bc_mean = r.alpha_bc_mean;
    row->alpha_fc_mean = r.alpha_fc_mean;
    row->failed = r.failed ? 1 : 0;
    return RBF_OK;
}

rbf_status rbf_result_write(rbf_result res, const char* path, rbf_format format) {
    if (res == nullptr || path == nullptr) {
        return fail(RBF_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw relaybf::IoError(std::string("cannot open output '") + path + "' for writing");
        }
        out << serialize(res->table, format);
        out.flush();
        if (!out) {
            throw relaybf::IoError(std::string("failed writing '") + path + "'");
        }
    });
}

rbf_status rbf_result_serialize(rbf_result res, rbf_format format, char* buf, size_t capacity,
                                size_t* needed) {
    if (res == nullptr || needed == nullptr) {
        return fail(RBF_ERR_INVALID_ARGUMENT, "null argument");
    }
    std::string text;
    const rbf_status st = guarded([&] { text = serialize(res->table, format); });
    if (st != RBF_OK) {
        return st;
    }
    *needed = text.size() + 1;
    if (buf == nullptr || capacity < *needed) {
        return buf == nullptr ? RBF_OK : fail(RBF_ERR_BUFFER_TOO_SMALL, "buffer too small");
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return RBF_OK;
}

void rbf_result_destroy(rbf_result res) { delete res; }

rbf_status rbf_evaluate(rbf_experiment exp, const char* scheme, uint64_t seed, double* sinr,
                        size_t capacity, size_t* users) {
    if (exp == nullptr || scheme == nullptr || users == nullptr) {
        return fail(RBF_ERR_INVALID_ARGUMENT, "null argument");
    }
    std::vector<double> values;
    const rbf_status st = guarded([&] {
        const auto s = relaybf::parse_scheme(scheme);
        if (!s) {
            throw relaybf::UnknownSchemeError(std::string("unknown scheme '") + scheme + "'");
        }
        const auto& cfg = exp->spec.base_config;
        const auto real = relaybf::generate_realization(cfg, seed);
        const auto report = relaybf::evaluate(*s, real, cfg);
        values.assign(report.per_user_sinr.data(),
                      report.per_user_sinr.data() + report.per_user_sinr.size());
    });
    if (st != RBF_OK) {
        return st;
    }
    *users = values.size();
    if (sinr == nullptr || capacity < values.size()) {
        return fail(RBF_ERR_BUFFER_TOO_SMALL, "sinr buffer holds fewer than K entries");
    }
    std::copy(values.begin(), values.end(), sinr);
    return RBF_OK;
}

}  // extern "C"
