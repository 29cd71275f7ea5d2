#include "beamformers.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "expectations.hpp"

namespace relaybf {

namespace {

constexpr double kRankTol = 1e-12;

constexpr std::array<Scheme, 7> kSchemes = {
    Scheme::RobustSvdRzf, Scheme::SvdRzf,  Scheme::SvdZf,         Scheme::SvdMf,
    Scheme::ZfZf,         Scheme::MmseRzfConventional, Scheme::RobustMmseRzf,
};

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }


/// (X X^H + alpha I)^{-1} from the eigendecomposition of X X^H.
CMatrix regularized_inverse(const GramEig& eig, double alpha, const char* what) {
    const RVector shifted = eig.lambda.array() + alpha;
    const double top = shifted.size() ? shifted(0) : 0.0;
    // Singular values of the inverted matrix below tol * largest count as zero.
    if (!(shifted.minCoeff() > kRankTol * top) || !(top > 0.0)) {
        throw DesignError(std::string(what) + ": regularized Gram matrix is rank deficient");
    }
    return eig.Q * shifted.cwiseInverse().asDiagonal() * eig.Q.adjoint();
}

CMatrix pseudo_inverse(const CMatrix& A) {
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& s = svd.singularValues();
    const double cut = s.size() ? kRankTol * s(0) : 0.0;
    RVector inv = RVector::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cut) {
            inv(i) = 1.0 / s(i);
        }
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

double source_rho(const CMatrix& F, const SystemConfig& config) {
    return std::sqrt(config.Ps / F.squaredNorm());
}

/// Per-realization rho_r from H_hat plus the e1^2 tr(FF^H) error surrogate.
double trace_rho_r(const CMatrix& W, const CMatrix& H_hat, const CMatrix& F, double rho_s,
                   const SystemConfig& config) {
    const double signal = rho_s * rho_s * (W * H_hat * F).squaredNorm();
    const double error = config.e1_sq * rho_s * rho_s * F.squaredNorm();
    const double denom = signal + (error + config.sigma1_sq) * W.squaredNorm();
    if (!(denom > 0.0) || !std::isfinite(denom)) {
        throw DesignError("relay power normalization undefined (zero or non-finite output power)");
    }
    return std::sqrt(config.Pr / denom);
}

std::vector<double> pooled(const std::vector<RVector>& parts) {
    std::vector<double> out;
    for (const auto& p : parts) {
        out.insert(out.end(), p.data(), p.data() + p.size());
    }
    return out;
}

/// The pooled-mean power model shared by the robust MMSE-RZF design and its audit.
double robust_mmse_inverse_rho_sq(const EigMeans& t, const EigMeans& l, const SystemConfig& c) {
    const double noisy = c.e1_sq * c.Ps + c.sigma1_sq;
    return (c.Ps / c.Pr) * t.E3 * l.E2 + (noisy * c.M / c.Pr) * t.E2 * l.E2;
}

struct MultiRelaySpectra {
    std::vector<GramEig> bc;  // of H_hat^H H_hat
    std::vector<GramEig> fc;  // of G_hat G_hat^H
};

MultiRelaySpectra multi_relay_spectra(const ChannelRealization& realization) {
    MultiRelaySpectra s;
    for (const auto& rc : realization.relays) {
        s.bc.push_back(eig_gram(rc.H_hat.adjoint()));
        s.fc.push_back(eig_gram(rc.G_hat));
    }
    return s;
}

void check_relays(const ChannelRealization& realization, const SystemConfig& config) {
    if (static_cast<int>(realization.relays.size()) != config.R) {
        throw ContractError("realization relay count does not match config.R");
    }
}

/// Shared builder of every receive-MMSE / forward-RZF style design with F = I_M.
BeamformerDesign build_square_design(Scheme scheme, const ChannelRealization& realization,
                                     const SystemConfig& config, double alpha_bc,
                                     double alpha_fc, const MultiRelaySpectra& spectra,
                                     bool zf_receive) {
    BeamformerDesign d;
    d.scheme = scheme;
    d.alpha_bc = alpha_bc;
    d.alpha_fc = alpha_fc;
    d.F = CMatrix::Identity(config.M, config.K);
    d.rho_s = source_rho(d.F, config);
    for (std::size_t r = 0; r < realization.relays.size(); ++r) {
        const auto& rc = realization.relays[r];
        const CMatrix receive =
            zf_receive ? pseudo_inverse(rc.H_hat)
                       : CMatrix(regularized_inverse(spectra.bc[r], alpha_bc, "MMSE receiver") *
                                 rc.H_hat.adjoint());
        const CMatrix forward =
            rc.G_hat.adjoint() * regularized_inverse(spectra.fc[r], alpha_fc, "forward precoder");
        d.W.push_back(forward * receive);
    }
    return d;
}

}  // namespace

std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::RobustSvdRzf: return "robust-svd-rzf";
        case Scheme::SvdRzf: return "svd-rzf";
        case Scheme::SvdZf: return "svd-zf";
        case Scheme::SvdMf: return "svd-mf";
        case Scheme::ZfZf: return "zf-zf";
        case Scheme::MmseRzfConventional: return "mmse-rzf";
        case Scheme::RobustMmseRzf: return "robust-mmse-rzf";
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
    for (Scheme s : kSchemes) {
        if (scheme_name(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

std::span<const Scheme> all_schemes() { return kSchemes; }

bool is_svd_scheme(Scheme s) {
    return s == Scheme::RobustSvdRzf || s == Scheme::SvdRzf || s == Scheme::SvdZf ||
           s == Scheme::SvdMf;
}

double alpha_svd_rzf(std::span<const double> theta, const SystemConfig& c) {
    const double K = static_cast<double>(c.K);
    if (c.K < 2) {
        throw DomainError("alpha_svd_rzf needs K >= 2");
    }
    const double st = sum(theta);
    const double numer = c.e2_sq * st / K + c.e2_sq * c.sigma1_sq * K / c.Ps +
                         (c.sigma2_sq / c.Pr) * (st / K + K * c.e1_sq + c.sigma1_sq * K / c.Ps);
    const double denom = st / ((K - 1.0) * (K + 1.0)) + c.e1_sq + c.sigma1_sq / c.Ps;
    return numer / denom;
}

double alpha_svd_rzf_large_k(const SystemConfig& c) {
    const double bc_noise = c.sigma1_sq / c.Ps;
    return c.K * ((c.e2_sq + c.e2_sq * bc_noise) / (1.0 + c.e1_sq + bc_noise) +
                  c.sigma2_sq / c.Pr);
}

double alpha_mmse_opt(const SystemConfig& c) {
    const double fc = c.Pr * c.R / c.sigma2_sq;
    return (c.e1_sq + c.sigma1_sq / c.Ps) * (c.M + fc) / (1.0 + fc / (c.M + 1.0));
}

double alpha_rzf_opt(const SystemConfig& c, double E2_theta, double E3_theta) {
    const double noisy = c.e1_sq * c.Ps + c.sigma1_sq;
    const double numer = (c.Ps * c.R * c.e2_sq + c.sigma2_sq * c.Ps / c.Pr) * E3_theta +
                         (c.e2_sq * c.sigma1_sq * c.R * c.M + noisy * c.M / c.Pr) * E2_theta;
    const double denom = noisy * c.R * E2_theta + (c.Ps * c.R / c.M) * E3_theta;
    if (!(denom > 0.0)) {
        throw DomainError("alpha_rzf_opt denominator must be positive");
    }
    return numer / denom;
}

double alpha_mmse_conventional(const SystemConfig& c) { return c.K * c.sigma1_sq / c.Ps; }
double alpha_rzf_conventional(const SystemConfig& c) { return c.K * c.sigma2_sq / c.Pr; }

BeamformerDesign design_svd_rzf(const ChannelRealization& realization, const SystemConfig& config,
                                AlphaMode mode) {
    config.require_single_relay_svd();
    check_relays(realization, config);
    return design_svd_rzf(svd_backward(realization.relays.front().H_hat), realization, config,
                          mode);
}

BeamformerDesign design_svd_rzf(const BackwardSvd& bc, const ChannelRealization& realization,
                                const SystemConfig& config, AlphaMode mode) {
    config.require_single_relay_svd();
    check_relays(realization, config);
    const auto& rc = realization.relays.front();
    double alpha = 0.0;
    switch (mode.kind) {
        case AlphaMode::Kind::Exact: alpha = alpha_svd_rzf(bc.theta, config); break;
        case AlphaMode::Kind::LargeK: alpha = alpha_svd_rzf_large_k(config); break;
        case AlphaMode::Kind::Fixed: alpha = mode.value; break;
    }
    if (!(alpha >= 0.0)) {
        throw DomainError("regularization factor must be >= 0");
    }
    BeamformerDesign d;
    d.scheme = Scheme::RobustSvdRzf;
    d.alpha_fc = alpha;
    d.F = bc.V.leftCols(config.K);
    d.rho_s = source_rho(d.F, config);
    const GramEig fc = eig_gram(rc.G_hat);
    const CMatrix W = rc.G_hat.adjoint() * regularized_inverse(fc, alpha, "forward RZF") *
                      bc.U.leftCols(config.K).adjoint();
    d.rho_r.push_back(trace_rho_r(W, rc.H_hat, d.F, d.rho_s, config));
    d.W.push_back(W);
    return d;
}

BeamformerDesign design_mmse_rzf_robust(const ChannelRealization& realization,
                                        const SystemConfig& config) {
    config.require_square();
    check_relays(realization, config);
    const MultiRelaySpectra spectra = multi_relay_spectra(realization);
    std::vector<RVector> thetas;
    std::vector<RVector> lambdas;
    for (std::size_t r = 0; r < spectra.bc.size(); ++r) {
        thetas.push_back(spectra.bc[r].lambda);
        lambdas.push_back(spectra.fc[r].lambda);
    }
    const std::vector<double> theta = pooled(thetas);
    const std::vector<double> lambda = pooled(lambdas);

    const double a_mmse = alpha_mmse_opt(config);
    const EigMeans t = eigen_means(theta, a_mmse);
    const double a_rzf = alpha_rzf_opt(config, t.E2, t.E3);
    const EigMeans l = eigen_means(lambda, a_rzf);

    BeamformerDesign d = build_square_design(Scheme::RobustMmseRzf, realization, config, a_mmse,
                                             a_rzf, spectra, false);
    const double inv_rho_sq = robust_mmse_inverse_rho_sq(t, l, config);
    if (!(inv_rho_sq > 0.0) || !std::isfinite(inv_rho_sq)) {
        throw DesignError("common relay power factor undefined");
    }
    d.rho_r.assign(realization.relays.size(), 1.0 / std::sqrt(inv_rho_sq));
    return d;
}

BeamformerDesign design_baseline(Scheme scheme, const ChannelRealization& realization,
                                 const SystemConfig& config) {
    switch (scheme) {
        case Scheme::SvdZf:
        case Scheme::SvdRzf:
        case Scheme::SvdMf: {
            BeamformerDesign d;
            if (scheme == Scheme::SvdMf) {
                config.require_single_relay_svd();
                check_relays(realization, config);
                const auto& rc = realization.relays.front();
                const BackwardSvd bc = svd_backward(rc.H_hat);
                d.F = bc.V.leftCols(config.K);
                d.rho_s = source_rho(d.F, config);
                d.W.push_back(rc.G_hat.adjoint() * bc.U.leftCols(config.K).adjoint());
                d.rho_r.push_back(trace_rho_r(d.W.front(), rc.H_hat, d.F, d.rho_s, config));
                d.alpha_fc = 0.0;
            } else {
                const double a = scheme == Scheme::SvdZf ? 0.0 : alpha_rzf_conventional(config);
                d = design_svd_rzf(realization, config, AlphaMode::fixed(a));
            }
            d.scheme = scheme;
            return d;
        }
        case Scheme::ZfZf:
        case Scheme::MmseRzfConventional: {
            config.require_square();
            check_relays(realization, config);
            const MultiRelaySpectra spectra = multi_relay_spectra(realization);
            const bool zf = scheme == Scheme::ZfZf;
            const double a_bc = zf ? 0.0 : alpha_mmse_conventional(config);
            const double a_fc = zf ? 0.0 : alpha_rzf_conventional(config);
            BeamformerDesign d =
                build_square_design(scheme, realization, config, a_bc, a_fc, spectra, zf);
            for (std::size_t r = 0; r < d.W.size(); ++r) {
                d.rho_r.push_back(
                    trace_rho_r(d.W[r], realization.relays[r].H_hat, d.F, d.rho_s, config));
            }
            return d;
        }
        default:
            throw DomainError("design_baseline called with a non-baseline scheme: " +
                              std::string(scheme_name(scheme)));
    }
}

BeamformerDesign design(Scheme scheme, const ChannelRealization& realization,
                        const SystemConfig& config) {
    switch (scheme) {
        case Scheme::RobustSvdRzf:
            return design_svd_rzf(realization, config, AlphaMode::exact());
        case Scheme::RobustMmseRzf:
            return design_mmse_rzf_robust(realization, config);
        default:
            return design_baseline(scheme, realization, config);
    }
}

double rho_r_svd_rzf_closed(std::span<const double> theta, std::span<const double> lambda,
                            double alpha, const SystemConfig& c) {
    const double K = static_cast<double>(c.K);
    double s3 = 0.0;
    for (double l : lambda) {
        s3 += l / ((l + alpha) * (l + alpha));
    }
    const double denom = (c.Ps / (K * K) * sum(theta) + c.e1_sq * c.Ps + c.sigma1_sq) * s3;
    return std::sqrt(c.Pr / denom);
}

std::vector<double> relay_power_surrogate(const BeamformerDesign& design,
                                          const ChannelRealization& realization,
                                          const SystemConfig& config) {
    check_relays(realization, config);
    std::vector<double> out;
    if (design.scheme == Scheme::RobustMmseRzf) {
        // Recompute the pooled eigenvalue means from scratch.
        std::vector<double> theta;
        std::vector<double> lambda;
        for (const auto& rc : realization.relays) {
            const RVector t = eig_gram(rc.H_hat.adjoint()).lambda;
            const RVector l = eig_gram(rc.G_hat).lambda;
            theta.insert(theta.end(), t.data(), t.data() + t.size());
            lambda.insert(lambda.end(), l.data(), l.data() + l.size());
        }
        const EigMeans t = eigen_means(theta, design.alpha_bc);
        const EigMeans l = eigen_means(lambda, design.alpha_fc);
        const double per_unit = config.Pr * robust_mmse_inverse_rho_sq(t, l, config);
        for (double rho : design.rho_r) {
            out.push_back(rho * rho * per_unit);
        }
        return out;
    }
    const double rs2 = design.rho_s * design.rho_s;
    for (std::size_t r = 0; r < design.W.size(); ++r) {
        const CMatrix& W = design.W[r];
        const double signal = rs2 * (W * realization.relays[r].H_hat * design.F).squaredNorm();
        const double error = config.e1_sq * rs2 * design.F.squaredNorm() * W.squaredNorm();
        const double noise = config.sigma1_sq * W.squaredNorm();
        out.push_back(design.rho_r[r] * design.rho_r[r] * (signal + error + noise));
    }
    return out;
}

std::vector<double> relay_power_true(const BeamformerDesign& design,
                                     const ChannelRealization& realization,
                                     const SystemConfig& config) {
    const auto truth = true_channels(realization, config);
    const double rs2 = design.rho_s * design.rho_s;
    std::vector<double> out;
    for (std::size_t r = 0; r < design.W.size(); ++r) {
        const CMatrix& W = design.W[r];
        const double signal = rs2 * (W * truth[r].H * design.F).squaredNorm();
        const double noise = config.sigma1_sq * W.squaredNorm();
        out.push_back(design.rho_r[r] * design.rho_r[r] * (signal + noise));
    }
    return out;
}

}  // namespace relaybf
