#include "model.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace relaybf {

namespace {

[[noreturn]] void config_fail(const std::string& what) {
    throw ConfigError("invalid configuration: " + what);
}

}  // namespace

void SystemConfig::validate() const {
    if (M < 1 || N < 1 || K < 1 || R < 1) {
        config_fail("antenna, user and relay counts must be positive integers");
    }
    if (M < K || N < K) {
        std::ostringstream os;
        os << "M,N >= K is required (M=" << M << ", N=" << N << ", K=" << K << ")";
        config_fail(os.str());
    }
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(Ps) || !positive(Pr)) {
        config_fail("transmit powers Ps and Pr must be finite and > 0");
    }
    if (!positive(sigma1_sq) || !positive(sigma2_sq)) {
        config_fail("noise variances sigma1_sq and sigma2_sq must be finite and > 0");
    }
    if (!(std::isfinite(e1_sq) && e1_sq >= 0.0) || !(std::isfinite(e2_sq) && e2_sq >= 0.0)) {
        config_fail("estimation error powers e1_sq and e2_sq must be finite and >= 0");
    }
}

void SystemConfig::require_single_relay_svd() const {
    validate();
    if (R != 1) {
        config_fail("SVD-based schemes need a single relay (R=1, got R=" + std::to_string(R) + ")");
    }
    if (N != K) {
        config_fail("SVD-RZF design assumes N = K (N=" + std::to_string(N) +
                    ", K=" + std::to_string(K) + ")");
    }
}

void SystemConfig::require_square() const {
    validate();
    if (M != K || N != K) {
        config_fail("MMSE/ZF relay designs assume M = N = K (M=" + std::to_string(M) +
                    ", N=" + std::to_string(N) + ", K=" + std::to_string(K) + ")");
    }
}

double SystemConfig::snr_bc_db() const { return 10.0 * std::log10(Ps / sigma1_sq); }
double SystemConfig::snr_fc_db() const { return 10.0 * std::log10(Pr / sigma2_sq); }

void SystemConfig::set_snr_bc_db(double db) {
    sigma1_sq = 1.0;
    Ps = std::pow(10.0, db / 10.0);
}

void SystemConfig::set_snr_fc_db(double db) {
    sigma2_sq = 1.0;
    Pr = std::pow(10.0, db / 10.0);
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ mix64(a + 0x1000000000000001ULL));
    h = mix64(h ^ mix64(b + 0x2000000000000002ULL));
    h = mix64(h ^ mix64(c + 0x3000000000000003ULL));
    return h;
}

CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t key) {
    std::mt19937_64 engine(key);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMatrix out(rows, cols);
    // Column-major fill keeps the draw order fixed for a given shape.
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = normal(engine);
            const double im = normal(engine);
            out(i, j) = Complex(re, im);
        }
    }
    return out;
}

ChannelRealization generate_realization(const SystemConfig& config, std::uint64_t seed) {
    config.validate();
    ChannelRealization out;
    out.seed = seed;
    out.relays.reserve(static_cast<std::size_t>(config.R));
    for (int r = 0; r < config.R; ++r) {
        const auto key = [&](MatrixRole role) {
            return derive_seed(seed, static_cast<std::uint64_t>(r),
                               static_cast<std::uint64_t>(role));
        };
        RelayChannels rc;
        rc.H_hat = complex_gaussian(config.N, config.M, key(MatrixRole::HHat));
        rc.Omega1 = complex_gaussian(config.N, config.M, key(MatrixRole::Omega1));
        rc.G_hat = complex_gaussian(config.K, config.N, key(MatrixRole::GHat));
        rc.Omega2 = complex_gaussian(config.K, config.N, key(MatrixRole::Omega2));
        out.relays.push_back(std::move(rc));
    }
    return out;
}

std::vector<TrueChannels> true_channels(const ChannelRealization& realization,
                                        const SystemConfig& config) {
    const double e1 = std::sqrt(config.e1_sq);
    const double e2 = std::sqrt(config.e2_sq);
    std::vector<TrueChannels> out;
    out.reserve(realization.relays.size());
    for (const auto& rc : realization.relays) {
        out.push_back({rc.H_hat + e1 * rc.Omega1, rc.G_hat + e2 * rc.Omega2});
    }
    return out;
}

}  // namespace relaybf
