#include "expectations.hpp"

namespace relaybf {

EigMeans eigen_means(std::span<const double> samples, double alpha) {
    if (samples.empty()) {
        throw DomainError("eigenvalue expectations need at least one sample");
    }
    EigMeans m;
    for (double x : samples) {
        const double d = x + alpha;
        if (d > 0.0) {
            m.E1 += x / d;
            m.E2 += x / (d * d);
            m.E3 += x * x / (d * d);
        }
        // x = alpha = 0 contributes 0 to E1, E3; E2 is 1/x there and taken as 0.
    }
    const double n = static_cast<double>(samples.size());
    m.E1 /= n;
    m.E2 /= n;
    m.E3 /= n;
    return m;
}

EigExpectations expectations(std::span<const double> theta_samples,
                             std::span<const double> lambda_samples, double alpha_mmse,
                             double alpha_rzf) {
    const EigMeans t = eigen_means(theta_samples, alpha_mmse);
    const EigMeans l = eigen_means(lambda_samples, alpha_rzf);
    return {t.E1, t.E2, t.E3, l.E1, l.E2, l.E3};
}

}  // namespace relaybf
