#pragma once

#include <cstdint>
#include <span>

#include "common.hpp"

namespace relaybf {

/// Products of svd_backward: H_hat = U [diag(sqrt(theta)) | 0] V^H.
struct BackwardSvd {
    CMatrix U;      ///< N x N unitary
    RVector theta;  ///< length N, squared singular values, descending
    CMatrix V;      ///< M x M unitary
};

/// Hermitian eigendecomposition A A^H = Q diag(lambda) Q^H.
struct GramEig {
    CMatrix Q;       ///< unitary
    RVector lambda;  ///< descending, non-negative
};

/// Everything the designs and metrics reuse for one relay.
struct SpectralData {
    BackwardSvd bc;  ///< of H_hat
    GramEig fc;      ///< of G_hat G_hat^H
    GramEig bc_gram; ///< of H_hat^H H_hat (P, theta_r) for the multi-relay analysis
};

BackwardSvd svd_backward(const CMatrix& H_hat);
GramEig eig_gram(const CMatrix& A);
SpectralData decompose(const CMatrix& H_hat, const CMatrix& G_hat);

/// E{(A)_kk^2} for A = Q diag(vals) Q^H with Haar Q.
double mu(std::span<const double> vals);
/// E{|(A)_kj|^2}, k != j, for A = Q diag(vals) Q^H with Haar Q. Needs K >= 2.
double nu(std::span<const double> vals);

inline double mu(const RVector& v) { return mu(std::span<const double>(v.data(), v.size())); }
inline double nu(const RVector& v) { return nu(std::span<const double>(v.data(), v.size())); }

/// Large-K maximizer alpha = C/D of the rational SINR(alpha) family
///   (A S1^2 + B S2) / (C S3 + D S2 + E S1^2),
/// with S1 = sum l/(l+a), S2 = sum l^2/(l+a)^2, S3 = sum l/(l+a)^2.
double lemma3_maximizer(double C, double D);

/// The rational family above, evaluated directly.
double lemma3_sinr(std::span<const double> lambda, double alpha, double A, double B, double C,
                   double D, double E);

/// Haar-distributed n x n unitary: QR of a complex Ginibre matrix with the
/// phases of R's diagonal folded back into Q.
CMatrix haar_unitary(Eigen::Index n, std::uint64_t key);

/// Spectral norm of X^H X - I.
double unitarity_error(const CMatrix& X);

}  // namespace relaybf
