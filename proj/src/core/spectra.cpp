#include "spectra.hpp"

#include <cmath>
#include <numeric>

#include "model.hpp"

namespace relaybf {

namespace {

void require_finite(const CMatrix& A, const char* what) {
    if (!A.allFinite()) {
        throw NumericError(std::string(what) + " has non-finite entries");
    }
}

}  // namespace

BackwardSvd svd_backward(const CMatrix& H_hat) {
    require_finite(H_hat, "backward channel estimate");
    if (H_hat.rows() > H_hat.cols()) {
        throw DomainError("svd_backward expects N <= M");
    }
    Eigen::JacobiSVD<CMatrix> svd(H_hat, Eigen::ComputeFullU | Eigen::ComputeFullV);
    BackwardSvd out;
    out.U = svd.matrixU();
    out.V = svd.matrixV();
    out.theta = svd.singularValues().array().square();
    return out;
}

GramEig eig_gram(const CMatrix& A) {
    require_finite(A, "gram factor");
    const CMatrix gram = A * A.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    if (es.info() != Eigen::Success) {
        throw NumericError("Hermitian eigendecomposition did not converge");
    }
    const Eigen::Index n = gram.rows();
    GramEig out;
    out.Q = es.eigenvectors().rowwise().reverse();
    out.lambda = es.eigenvalues().reverse();
    const double scale = std::max(1.0, out.lambda.size() ? out.lambda(0) : 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (out.lambda(i) < 0.0) {
            if (out.lambda(i) < -1e-12 * scale) {
                throw NumericError("Gram matrix has a negative eigenvalue");
            }
            out.lambda(i) = 0.0;
        }
    }
    return out;
}

SpectralData decompose(const CMatrix& H_hat, const CMatrix& G_hat) {
    return {svd_backward(H_hat), eig_gram(G_hat), eig_gram(H_hat.adjoint())};
}

double mu(std::span<const double> vals) {
    if (vals.empty()) {
        throw DomainError("mu needs at least one eigenvalue");
    }
    const double K = static_cast<double>(vals.size());
    double s = 0.0;
    double s2 = 0.0;
    for (double v : vals) {
        s += v;
        s2 += v * v;
    }
    return (s * s + s2) / (K * (K + 1.0));
}

double nu(std::span<const double> vals) {
    if (vals.size() < 2) {
        throw DomainError("nu needs K >= 2 eigenvalues");
    }
    const double K = static_cast<double>(vals.size());
    double s = 0.0;
    double s2 = 0.0;
    for (double v : vals) {
        s += v;
        s2 += v * v;
    }
    return s2 / ((K - 1.0) * (K + 1.0)) - s * s / ((K - 1.0) * K * (K + 1.0));
}

double lemma3_maximizer(double C, double D) {
    if (!(D > 0.0)) {
        throw DomainError("lemma3_maximizer requires D > 0");
    }
    if (C < 0.0) {
        throw DomainError("lemma3_maximizer requires C >= 0");
    }
    return C / D;
}

double lemma3_sinr(std::span<const double> lambda, double alpha, double A, double B, double C,
                   double D, double E) {
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
    for (double l : lambda) {
        const double d = l + alpha;
        s1 += l / d;
        s2 += l * l / (d * d);
        s3 += l / (d * d);
    }
    return (A * s1 * s1 + B * s2) / (C * s3 + D * s2 + E * s1 * s1);
}

CMatrix haar_unitary(Eigen::Index n, std::uint64_t key) {
    const CMatrix Z = complex_gaussian(n, n, key);
    Eigen::HouseholderQR<CMatrix> qr(Z);
    CMatrix Q = qr.householderQ();
    const CMatrix& packed = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
        const Complex d = packed(j, j);
        const double a = std::abs(d);
        Q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
    }
    return Q;
}

double unitarity_error(const CMatrix& X) {
    const CMatrix D = X.adjoint() * X - CMatrix::Identity(X.cols(), X.cols());
    Eigen::JacobiSVD<CMatrix> svd(D);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace relaybf
