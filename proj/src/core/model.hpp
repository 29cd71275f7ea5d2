#pragma once

#include <cstdint>
#include <vector>

#include "common.hpp"

namespace relaybf {

/// Scalar parameters of the two-hop network. Powers and variances are linear.
struct SystemConfig {
    int M = 4;  ///< base-station antennas
    int N = 4;  ///< antennas per relay
    int K = 4;  ///< single-antenna users
    int R = 1;  ///< relays
    double Ps = 100.0;
    double Pr = 100.0;
    double sigma1_sq = 1.0;  ///< relay noise variance
    double sigma2_sq = 1.0;  ///< user noise variance
    double e1_sq = 0.0;      ///< backward-channel estimation error power
    double e2_sq = 0.0;      ///< forward-channel estimation error power

    /// Throws ConfigError naming the first violated constraint.
    void validate() const;

    /// Requirements of the single-relay SVD designs (R = 1, N = K).
    void require_single_relay_svd() const;

    /// Requirements of the MMSE/ZF multi-relay designs (M = N = K).
    void require_square() const;

    double snr_bc_db() const;
    double snr_fc_db() const;

    /// Sets Ps from a BC SNR in dB with sigma1_sq normalized to 1.
    void set_snr_bc_db(double db);
    /// Sets Pr from a FC SNR in dB with sigma2_sq normalized to 1.
    void set_snr_fc_db(double db);

    bool operator==(const SystemConfig&) const = default;
};

/// Estimated channels and error directions of one relay.
struct RelayChannels {
    CMatrix H_hat;   ///< N x M
    CMatrix Omega1;  ///< N x M
    CMatrix G_hat;   ///< K x N, rows are estimated user channels
    CMatrix Omega2;  ///< K x N
};

/// One draw of every random matrix in the network. Immutable once built.
struct ChannelRealization {
    std::vector<RelayChannels> relays;
    std::uint64_t seed = 0;
};

struct TrueChannels {
    CMatrix H;  ///< N x M
    CMatrix G;  ///< K x N
};

/// Matrix roles used as part of the RNG key.
enum class MatrixRole : std::uint32_t { HHat = 0, Omega1 = 1, GHat = 2, Omega2 = 3 };

/// SplitMix64 finalizer; the building block of all seed derivation.
std::uint64_t mix64(std::uint64_t x);

/// Derives a stream key from a seed and up to three counters. Order matters.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

/// rows x cols matrix of i.i.d. CN(0,1) entries (real and imaginary parts
/// each N(0, 1/2)), fully determined by `key`.
CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t key);

ChannelRealization generate_realization(const SystemConfig& config, std::uint64_t seed);

/// H_r = H_hat_r + e1 Omega1_r, G_r = G_hat_r + e2 Omega2_r.
std::vector<TrueChannels> true_channels(const ChannelRealization& realization,
                                        const SystemConfig& config);

}  // namespace relaybf
