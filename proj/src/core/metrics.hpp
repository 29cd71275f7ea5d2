#pragma once

#include <span>
#include <vector>

#include "beamformers.hpp"
#include "expectations.hpp"

namespace relaybf {

/// y = H_eff s + n: the signal matrix after both hops and the per-user
/// effective noise power E{|n_k|^2}.
struct EffectiveLink {
    CMatrix H_eff;       ///< K x K
    RVector noise_power; ///< length K
};

/// Sum over relays of rho_s rho_r G_hat_r W_r H_hat_r F.
CMatrix effective_channel(const BeamformerDesign& design, const ChannelRealization& realization,
                          const SystemConfig& config);

/// Effective noise power with the e1 e2 cross term dropped. The expression
/// does not depend on k, so all K entries are equal.
RVector noise_power(const BeamformerDesign& design, const ChannelRealization& realization,
                    const SystemConfig& config);

EffectiveLink effective_link(const BeamformerDesign& design,
                             const ChannelRealization& realization, const SystemConfig& config);

/// |H_kk|^2 / (sum_{j != k} |H_kj|^2 + noise_k). A denominator below 1e-300
/// yields +infinity.
RVector sinr_exact(const CMatrix& H_eff, const RVector& noise_power);
inline RVector sinr_exact(const EffectiveLink& link) {
    return sinr_exact(link.H_eff, link.noise_power);
}

/// Power factors the single-relay closed forms are evaluated with.
struct PowerFactors {
    double rho_s = 0.0;
    double rho_r = 0.0;
};

/// rho_s = sqrt(Ps/K) and the closed-form rho_r.
PowerFactors svd_rzf_closed_power(std::span<const double> theta, std::span<const double> lambda,
                                  double alpha, const SystemConfig& config);

/// Single-relay SVD-RZF effective noise with the Haar average over Q.
double noise_power_single_relay_closed(std::span<const double> theta,
                                       std::span<const double> lambda, double alpha,
                                       const SystemConfig& config, PowerFactors power);
double noise_power_single_relay_closed(std::span<const double> theta,
                                       std::span<const double> lambda, double alpha,
                                       const SystemConfig& config);

/// Single-relay SVD-RZF per-user SINR from the eigenvalues of H_hat and G_hat G_hat^H.
RVector sinr_analytic_single(std::span<const double> theta, std::span<const double> lambda,
                             double alpha, const SystemConfig& config, PowerFactors power);
RVector sinr_analytic_single(std::span<const double> theta, std::span<const double> lambda,
                             double alpha, const SystemConfig& config);

/// SINR of one stream after the MMSE receiver at a relay.
double sinr_relay_mmse(std::span<const double> theta, double alpha_mmse,
                       const SystemConfig& config);

/// Destination SINR with the forward channels idealized to identities.
double sinr_dest_idealized(std::span<const double> theta, double alpha_mmse,
                           const SystemConfig& config, double rho_r);

/// rho_r of the idealized forward channel (G = I) for a given alpha_mmse.
double rho_r_idealized(std::span<const double> theta, double alpha_mmse,
                       const SystemConfig& config);

/// Large-R limit of the robust MMSE-RZF per-user SINR.
double sinr_asymptotic(const SystemConfig& config, const EigExpectations& e);

/// Row-norm form of the multi-relay effective noise for user k (0-based).
double noise_power_multirelay(const BeamformerDesign& design,
                              const ChannelRealization& realization, const SystemConfig& config,
                              int k);

/// 0.5 sum log2(1 + SINR_k); the half accounts for the two-slot protocol.
double sum_rate(std::span<const double> per_user_sinr);
inline double sum_rate(const RVector& s) {
    return sum_rate(std::span<const double>(s.data(), s.size()));
}

/// One evaluated realization.
struct SinrReport {
    Scheme scheme = Scheme::RobustSvdRzf;
    RVector per_user_sinr;
    double sum_rate = 0.0;
    SystemConfig config_echo;
};

SinrReport evaluate(Scheme scheme, const ChannelRealization& realization,
                    const SystemConfig& config);

}  // namespace relaybf
