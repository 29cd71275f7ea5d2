#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "model.hpp"
#include "spectra.hpp"

namespace relaybf {

enum class Scheme {
    RobustSvdRzf,         ///< SVD backward, error-aware RZF forward
    SvdRzf,               ///< SVD backward, RZF with alpha = K sigma2^2 / Pr
    SvdZf,
    SvdMf,
    ZfZf,                 ///< pseudo-inverse receive, ZF forward
    MmseRzfConventional,  ///< alpha_mmse = K sigma1^2/Ps, alpha_rzf = K sigma2^2/Pr
    RobustMmseRzf,
};

std::string_view scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);
std::span<const Scheme> all_schemes();
/// SVD-based schemes only exist for R = 1.
bool is_svd_scheme(Scheme s);

/// Source precoder, relay processors and power factors for one realization.
struct BeamformerDesign {
    Scheme scheme = Scheme::RobustSvdRzf;
    CMatrix F;                  ///< M x K
    std::vector<CMatrix> W;     ///< per relay, N x N
    double rho_s = 0.0;
    std::vector<double> rho_r;  ///< per relay
    double alpha_bc = 0.0;
    double alpha_fc = 0.0;
};

/// Optimized forward regularization for the single-relay SVD-RZF design.
double alpha_svd_rzf(std::span<const double> theta, const SystemConfig& config);
inline double alpha_svd_rzf(const RVector& theta, const SystemConfig& config) {
    return alpha_svd_rzf(std::span<const double>(theta.data(), theta.size()), config);
}
/// Large-K form of alpha_svd_rzf; independent of the channel draw.
double alpha_svd_rzf_large_k(const SystemConfig& config);

double alpha_mmse_opt(const SystemConfig& config);
double alpha_rzf_opt(const SystemConfig& config, double E2_theta, double E3_theta);

/// Fixed factors of the conventional schemes.
double alpha_mmse_conventional(const SystemConfig& config);
double alpha_rzf_conventional(const SystemConfig& config);

struct AlphaMode {
    enum class Kind { Exact, LargeK, Fixed };
    Kind kind = Kind::Exact;
    double value = 0.0;

    static AlphaMode exact() { return {Kind::Exact, 0.0}; }
    static AlphaMode large_k() { return {Kind::LargeK, 0.0}; }
    static AlphaMode fixed(double a) { return {Kind::Fixed, a}; }
};

BeamformerDesign design_svd_rzf(const ChannelRealization& realization, const SystemConfig& config,
                                AlphaMode mode);

/// Same design built from caller-supplied SVD factors of H_hat. Any valid
/// SVD (phase or basis choice in degenerate subspaces) is accepted.
BeamformerDesign design_svd_rzf(const BackwardSvd& bc, const ChannelRealization& realization,
                                const SystemConfig& config, AlphaMode mode);

BeamformerDesign design_mmse_rzf_robust(const ChannelRealization& realization,
                                        const SystemConfig& config);

/// SvdZf, SvdMf, SvdRzf, ZfZf or MmseRzfConventional.
BeamformerDesign design_baseline(Scheme scheme, const ChannelRealization& realization,
                                 const SystemConfig& config);

/// Dispatches on scheme; the robust schemes use their optimized factors.
BeamformerDesign design(Scheme scheme, const ChannelRealization& realization,
                        const SystemConfig& config);

/// Closed form of rho_r for SVD-RZF with the Haar average over Q.
double rho_r_svd_rzf_closed(std::span<const double> theta, std::span<const double> lambda,
                            double alpha, const SystemConfig& config);

/// Relay transmit power under the power model the scheme normalizes to:
/// trace form with E{e1^2 Omega F F^H Omega^H} = e1^2 tr(FF^H) I for the
/// per-realization schemes, pooled eigenvalue-mean form for robust MMSE-RZF.
/// Equals Pr for every relay of a well-formed design.
std::vector<double> relay_power_surrogate(const BeamformerDesign& design,
                                          const ChannelRealization& realization,
                                          const SystemConfig& config);

/// Relay transmit power with the true backward channel H_r = H_hat_r + e1 Omega1_r.
std::vector<double> relay_power_true(const BeamformerDesign& design,
                                     const ChannelRealization& realization,
                                     const SystemConfig& config);

}  // namespace relaybf
