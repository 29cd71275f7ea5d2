#include "metrics.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace relaybf {

namespace {

void check_dims(const BeamformerDesign& d, const ChannelRealization& real,
                const SystemConfig& c) {
    const bool ok = d.W.size() == real.relays.size() && d.rho_r.size() == d.W.size() &&
                    d.F.rows() == c.M && d.F.cols() == c.K;
    if (!ok) {
        throw ContractError("design does not match the realization/config dimensions");
    }
    for (std::size_t r = 0; r < d.W.size(); ++r) {
        const auto& rc = real.relays[r];
        if (d.W[r].cols() != rc.H_hat.rows() || d.W[r].rows() != rc.G_hat.cols() ||
            rc.H_hat.cols() != d.F.rows()) {
            throw ContractError("relay processor dimensions do not chain");
        }
    }
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<double> ratio(std::span<const double> x, double alpha) {
    std::vector<double> out;
    out.reserve(x.size());
    for (double v : x) {
        out.push_back(v / (v + alpha));
    }
    return out;
}

double sum_over_sq(std::span<const double> x, double alpha, int power) {
    double s = 0.0;
    for (double v : x) {
        const double d = (v + alpha) * (v + alpha);
        s += (power == 2 ? v * v : v) / d;
    }
    return s;
}

}  // namespace

CMatrix effective_channel(const BeamformerDesign& design, const ChannelRealization& realization,
                          const SystemConfig& config) {
    check_dims(design, realization, config);
    CMatrix H = CMatrix::Zero(config.K, config.K);
    for (std::size_t r = 0; r < design.W.size(); ++r) {
        const auto& rc = realization.relays[r];
        H += (design.rho_s * design.rho_r[r]) * (rc.G_hat * design.W[r] * rc.H_hat * design.F);
    }
    return H;
}

RVector noise_power(const BeamformerDesign& design, const ChannelRealization& realization,
                    const SystemConfig& config) {
    check_dims(design, realization, config);
    const double K = static_cast<double>(config.K);
    const double rs2 = design.rho_s * design.rho_s;
    const double trFF = design.F.squaredNorm();
    double total = config.sigma2_sq;
    for (std::size_t r = 0; r < design.W.size(); ++r) {
        const auto& rc = realization.relays[r];
        const CMatrix& W = design.W[r];
        const double rr2 = design.rho_r[r] * design.rho_r[r];
        const double gw = (rc.G_hat * W).squaredNorm();
        const double whf = (W * rc.H_hat * design.F).squaredNorm();
        const double w = W.squaredNorm();
        total += config.e1_sq * rs2 * rr2 / K * trFF * gw;
        total += config.e2_sq * rs2 * rr2 * whf;
        total += rr2 * config.sigma1_sq / K * gw;
        total += rr2 * config.e2_sq * config.sigma1_sq * w;
    }
    return RVector::Constant(config.K, total);
}

EffectiveLink effective_link(const BeamformerDesign& design,
                             const ChannelRealization& realization, const SystemConfig& config) {
    return {effective_channel(design, realization, config),
            noise_power(design, realization, config)};
}

RVector sinr_exact(const CMatrix& H_eff, const RVector& noise) {
    if (H_eff.rows() != noise.size()) {
        throw ContractError("sinr_exact: noise vector length differs from H_eff rows");
    }
    RVector out(H_eff.rows());
    for (Eigen::Index k = 0; k < H_eff.rows(); ++k) {
        const double desired = std::norm(H_eff(k, k));
        double interference = 0.0;
        for (Eigen::Index j = 0; j < H_eff.cols(); ++j) {
            if (j != k) {
                interference += std::norm(H_eff(k, j));
            }
        }
        const double denom = interference + noise(k);
        out(k) = denom < 1e-300 ? std::numeric_limits<double>::infinity() : desired / denom;
    }
    return out;
}

PowerFactors svd_rzf_closed_power(std::span<const double> theta, std::span<const double> lambda,
                                  double alpha, const SystemConfig& config) {
    return {std::sqrt(config.Ps / config.K), rho_r_svd_rzf_closed(theta, lambda, alpha, config)};
}

double noise_power_single_relay_closed(std::span<const double> theta,
                                       std::span<const double> lambda, double alpha,
                                       const SystemConfig& c, PowerFactors p) {
    const double K = static_cast<double>(c.K);
    const double rs2 = p.rho_s * p.rho_s;
    const double rr2 = p.rho_r * p.rho_r;
    const double s2 = sum_over_sq(lambda, alpha, 2);
    const double s3 = sum_over_sq(lambda, alpha, 1);
    return (rs2 * rr2 * c.e1_sq + rr2 * c.sigma1_sq / K) * s2 +
           (rs2 * rr2 * c.e2_sq * sum(theta) / K + rr2 * c.e2_sq * c.sigma1_sq) * s3 +
           c.sigma2_sq;
}

double noise_power_single_relay_closed(std::span<const double> theta,
                                       std::span<const double> lambda, double alpha,
                                       const SystemConfig& c) {
    return noise_power_single_relay_closed(theta, lambda, alpha, c,
                                           svd_rzf_closed_power(theta, lambda, alpha, c));
}

RVector sinr_analytic_single(std::span<const double> theta, std::span<const double> lambda,
                             double alpha, const SystemConfig& c, PowerFactors p) {
    const std::vector<double> x = ratio(lambda, alpha);
    const double m = mu(x);
    const double n = x.size() >= 2 ? nu(x) : 0.0;
    const double gain = p.rho_s * p.rho_s * p.rho_r * p.rho_r;
    const double noise = noise_power_single_relay_closed(theta, lambda, alpha, c, p);
    const double total = sum(theta);
    RVector out(static_cast<Eigen::Index>(theta.size()));
    for (std::size_t k = 0; k < theta.size(); ++k) {
        const double denom = gain * (total - theta[k]) * n + noise;
        out(static_cast<Eigen::Index>(k)) = denom < 1e-300
                                                ? std::numeric_limits<double>::infinity()
                                                : gain * theta[k] * m / denom;
    }
    return out;
}

RVector sinr_analytic_single(std::span<const double> theta, std::span<const double> lambda,
                             double alpha, const SystemConfig& c) {
    return sinr_analytic_single(theta, lambda, alpha, c,
                                svd_rzf_closed_power(theta, lambda, alpha, c));
}

double sinr_relay_mmse(std::span<const double> theta, double alpha, const SystemConfig& c) {
    const double M = static_cast<double>(c.M);
    const std::vector<double> x = ratio(theta, alpha);
    const double n = x.size() >= 2 ? nu(x) : 0.0;
    const double denom = c.Ps * (M - 1.0) / M * n +
                         (c.e1_sq * c.Ps + c.sigma1_sq) / M * sum_over_sq(theta, alpha, 1);
    return (c.Ps / M) * mu(x) / denom;
}

double sinr_dest_idealized(std::span<const double> theta, double alpha, const SystemConfig& c,
                           double rho_r) {
    if (!(rho_r > 0.0)) {
        throw DomainError("sinr_dest_idealized needs rho_r > 0");
    }
    const double M = static_cast<double>(c.M);
    const double R = static_cast<double>(c.R);
    const std::vector<double> x = ratio(theta, alpha);
    const double n = x.size() >= 2 ? nu(x) : 0.0;
    const double denom = R * c.Ps * (M - 1.0) / M * n +
                         R * (c.e1_sq * c.Ps + c.sigma1_sq) / M * sum_over_sq(theta, alpha, 1) +
                         c.sigma2_sq / (rho_r * rho_r);
    return (c.Ps * R * R / M) * mu(x) / denom;
}

double rho_r_idealized(std::span<const double> theta, double alpha, const SystemConfig& c) {
    const double M = static_cast<double>(c.M);
    const double p = (c.Ps / M) * sum_over_sq(theta, alpha, 2) +
                     (c.e1_sq * c.Ps + c.sigma1_sq) * sum_over_sq(theta, alpha, 1);
    return std::sqrt(c.Pr / p);
}

double sinr_asymptotic(const SystemConfig& c, const EigExpectations& e) {
    const double M = static_cast<double>(c.M);
    const double R = static_cast<double>(c.R);
    const double noisy = c.e1_sq * c.Ps + c.sigma1_sq;
    const double inv_rho_sq =
        (c.Ps / c.Pr) * e.E3_theta * e.E2_lambda + (noisy * M / c.Pr) * e.E2_theta * e.E2_lambda;
    const double coherent = R * e.E1_theta * e.E1_lambda;
    const double numer = (c.Ps / M) * coherent * coherent;
    const double denom = c.Ps * R * (M - 1.0) / (M * M) * e.E3_theta * e.E3_lambda +
                         noisy * R * e.E2_theta * e.E3_lambda +
                         c.Ps * R * c.e2_sq * e.E3_theta * e.E2_lambda +
                         c.e2_sq * c.sigma1_sq * R * M * e.E2_theta * e.E2_lambda +
                         c.sigma2_sq * inv_rho_sq;
    return denom < 1e-300 ? std::numeric_limits<double>::infinity() : numer / denom;
}

double noise_power_multirelay(const BeamformerDesign& design,
                              const ChannelRealization& realization, const SystemConfig& c,
                              int k) {
    check_dims(design, realization, c);
    if (k < 0 || k >= c.K) {
        throw ContractError("user index out of range");
    }
    const double M = static_cast<double>(c.M);
    double row = 0.0;
    double whh = 0.0;
    double ww = 0.0;
    for (std::size_t r = 0; r < design.W.size(); ++r) {
        const auto& rc = realization.relays[r];
        const CMatrix& W = design.W[r];
        const double rr2 = design.rho_r[r] * design.rho_r[r];
        row += rr2 * (rc.G_hat * W).row(k).squaredNorm();
        whh += rr2 * (W * rc.H_hat).squaredNorm();
        ww += rr2 * W.squaredNorm();
    }
    return (c.e1_sq * c.Ps + c.sigma1_sq) * row + c.Ps * c.e2_sq / M * whh +
           c.e2_sq * c.sigma1_sq * ww + c.sigma2_sq;
}

double sum_rate(std::span<const double> sinr) {
    double s = 0.0;
    for (double v : sinr) {
        s += std::log2(1.0 + v);
    }
    return 0.5 * s;
}

SinrReport evaluate(Scheme scheme, const ChannelRealization& realization,
                    const SystemConfig& config) {
    const BeamformerDesign d = design(scheme, realization, config);
    SinrReport rep;
    rep.scheme = scheme;
    rep.per_user_sinr = sinr_exact(effective_link(d, realization, config));
    rep.sum_rate = sum_rate(rep.per_user_sinr);
    rep.config_echo = config;
    return rep;
}

}  // namespace relaybf
