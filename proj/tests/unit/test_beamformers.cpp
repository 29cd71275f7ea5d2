#include <cmath>
#include <random>
#include <vector>

#include "beamformers.hpp"
#include "doctest.h"
#include "expectations.hpp"
#include "metrics.hpp"
#include "oracles.hpp"

using namespace relaybf;

namespace {

SystemConfig snr_config(double bc_db, double fc_db, double e_sq, int K = 4, int R = 1) {
    SystemConfig c;
    c.M = c.N = c.K = K;
    c.R = R;
    c.set_snr_bc_db(bc_db);
    c.set_snr_fc_db(fc_db);
    c.e1_sq = c.e2_sq = e_sq;
    return c;
}

double max_offdiag_ratio(const CMatrix& H) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < H.rows(); ++k) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < H.cols(); ++j) {
            if (j != k) off += std::norm(H(k, j));
        }
        worst = std::max(worst, off / std::norm(H(k, k)));
    }
    return worst;
}

}  // namespace

TEST_CASE("scheme names round-trip") {
    CHECK(all_schemes().size() == 7);
    for (Scheme s : all_schemes()) {
        REQUIRE(parse_scheme(scheme_name(s)).has_value());
        CHECK(*parse_scheme(scheme_name(s)) == s);
    }
    CHECK_FALSE(parse_scheme("svd-foo").has_value());
    CHECK(is_svd_scheme(Scheme::SvdMf));
    CHECK_FALSE(is_svd_scheme(Scheme::ZfZf));
}

TEST_CASE("alpha_svd_rzf") {
    SystemConfig c = snr_config(20, 20, 0.1);
    const std::vector<double> theta{7.0, 5.0, 3.0, 1.0};
    CHECK(alpha_svd_rzf(theta, c) == doctest::Approx(0.3810764872521246).epsilon(1e-13));

    SUBCASE("ZF limit") {
        c.e1_sq = c.e2_sq = 0.0;
        c.sigma1_sq = c.sigma2_sq = 1e-14;
        CHECK(alpha_svd_rzf(theta, c) < 1e-12);
    }
    SUBCASE("K below 2") {
        c.K = 1;
        CHECK_THROWS_AS(alpha_svd_rzf(std::vector<double>{1.0}, c), DomainError);
    }
    SUBCASE("approaches the large-K form") {
        SystemConfig big = snr_config(20, 20, 0.1, 64);
        const RVector th = oracle::wishart_eigenvalues(64, 314);
        const double exact = alpha_svd_rzf(th, big);
        CHECK(exact == doctest::Approx(alpha_svd_rzf_large_k(big)).epsilon(0.05));
    }
}

TEST_CASE("alpha_svd_rzf_large_k") {
    SystemConfig c = snr_config(20, 20, 0.1);
    CHECK(alpha_svd_rzf_large_k(c) == doctest::Approx(0.40396396396396395).epsilon(1e-13));
    SystemConfig d = c;
    d.K = 8;
    CHECK(alpha_svd_rzf_large_k(d) == doctest::Approx(2.0 * alpha_svd_rzf_large_k(c)).epsilon(1e-14));
    c.e1_sq = c.e2_sq = 0.0;
    CHECK(alpha_svd_rzf_large_k(c) == alpha_rzf_conventional(c));
    CHECK(alpha_rzf_conventional(c) == doctest::Approx(0.04).epsilon(1e-14));
}

TEST_CASE("alpha_mmse_opt") {
    SystemConfig c = snr_config(20, 20, 0.1, 4, 10);
    CHECK(alpha_mmse_opt(c) == doctest::Approx(0.549452736318408).epsilon(1e-13));
    CHECK(std::abs(alpha_mmse_opt(c) - 0.5494) < 1e-4);
    c.R = 1000000000;
    CHECK(alpha_mmse_opt(c) == doctest::Approx(0.55).epsilon(1e-6));
    c.e1_sq = 0.0;
    c.sigma1_sq = 0.0;
    CHECK(alpha_mmse_opt(c) == 0.0);
}

TEST_CASE("alpha_rzf_opt") {
    SystemConfig c = snr_config(20, 20, 0.0, 4, 3);
    c.sigma1_sq = 0.0;
    CHECK(alpha_rzf_opt(c, 0.3, 0.7) == doctest::Approx(4.0 / (100.0 * 3.0)).epsilon(1e-13));
    c.R = 1;
    CHECK(alpha_rzf_opt(c, 0.3, 0.7) == doctest::Approx(alpha_rzf_conventional(c)).epsilon(1e-13));

    SUBCASE("strictly increasing in e2^2") {
        SystemConfig d = snr_config(20, 20, 0.1, 4, 10);
        double prev = alpha_rzf_opt(d, 0.4, 0.6);
        for (int i = 1; i <= 6; ++i) {
            d.e2_sq = 0.1 + 0.05 * i;
            const double a = alpha_rzf_opt(d, 0.4, 0.6);
            CHECK(a > prev);
            prev = a;
        }
    }
    SUBCASE("non-positive denominator") {
        CHECK_THROWS_AS(alpha_rzf_opt(c, 0.0, 0.0), DomainError);
    }
}

TEST_CASE("regularization factors are non-negative") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        SystemConfig c = snr_config(40 * u(gen) - 10, 40 * u(gen) - 10, 0.5 * u(gen), 4, 1 + i % 10);
        c.e2_sq = 0.5 * u(gen);
        const auto real = generate_realization(c, i);
        const RVector th = svd_backward(real.relays[0].H_hat).theta;
        CHECK(alpha_svd_rzf(th, c) >= 0.0);
        CHECK(alpha_svd_rzf_large_k(c) >= 0.0);
        CHECK(alpha_mmse_opt(c) >= 0.0);
        const EigMeans t = eigen_means(std::vector<double>(th.data(), th.data() + th.size()),
                                       alpha_mmse_opt(c));
        CHECK(alpha_rzf_opt(c, t.E2, t.E3) >= 0.0);
        CHECK(alpha_mmse_conventional(c) >= 0.0);
    }
}

TEST_CASE("error-power sweep gives nondecreasing alphas") {
    double prev_bc = -1.0;
    double prev_fc = -1.0;
    for (int i = 0; i <= 6; ++i) {
        const SystemConfig c = snr_config(10, 20, 0.05 * i, 4, 10);
        double fc = 0.0;
        for (int t = 0; t < 20; ++t) {
            fc += design_mmse_rzf_robust(generate_realization(c, 900 + t), c).alpha_fc;
        }
        const double bc = alpha_mmse_opt(c);
        CHECK(bc >= prev_bc);
        CHECK(fc >= prev_fc);
        prev_bc = bc;
        prev_fc = fc;
    }
}

TEST_CASE("SVD-RZF design structure") {
    const SystemConfig c = snr_config(20, 20, 0.2);
    const auto real = generate_realization(c, 42);
    const auto d = design_svd_rzf(real, c, AlphaMode::exact());
    const auto bc = svd_backward(real.relays[0].H_hat);
    CHECK(d.F.rows() == 4);
    CHECK(d.F.cols() == 4);
    CHECK(d.F.squaredNorm() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(d.rho_s == doctest::Approx(std::sqrt(c.Ps / 4.0)).epsilon(1e-12));
    CHECK(d.rho_s == doctest::Approx(std::sqrt(c.Ps / d.F.squaredNorm())).epsilon(1e-15));
    CHECK(d.alpha_fc == doctest::Approx(alpha_svd_rzf(bc.theta, c)).epsilon(1e-14));
    CHECK(d.alpha_bc == 0.0);
    CHECK(d.rho_r.size() == 1);
    CHECK(d.rho_r[0] > 0.0);

    const auto lk = design_svd_rzf(real, c, AlphaMode::large_k());
    CHECK(lk.alpha_fc == alpha_svd_rzf_large_k(c));
    const auto fx = design_svd_rzf(real, c, AlphaMode::fixed(0.7));
    CHECK(fx.alpha_fc == 0.7);
    CHECK_THROWS_AS(design_svd_rzf(real, c, AlphaMode::fixed(-0.1)), DomainError);

    SUBCASE("effective channel is not diagonal for alpha > 0") {
        CHECK(max_offdiag_ratio(effective_channel(d, real, c)) > 1e-6);
    }
}

TEST_CASE("single-relay SVD designs reject unsupported configs") {
    SystemConfig c = snr_config(20, 20, 0.1, 4, 2);
    const auto real = generate_realization(c, 1);
    CHECK_THROWS_AS(design_svd_rzf(real, c, AlphaMode::exact()), ConfigError);
    CHECK_THROWS_AS(design_baseline(Scheme::SvdMf, real, c), ConfigError);
    CHECK_THROWS_AS(design_baseline(Scheme::RobustSvdRzf, real, c), DomainError);
    c.R = 1;
    CHECK_THROWS_AS(design(Scheme::ZfZf, real, c), ContractError);
}

TEST_CASE("rank-deficient forward channel at alpha = 0") {
    const SystemConfig c = snr_config(20, 20, 0.0);
    auto real = generate_realization(c, 3);
    real.relays[0].G_hat.row(2) = real.relays[0].G_hat.row(0);
    try {
        design_baseline(Scheme::SvdZf, real, c);
        FAIL("expected DesignError");
    } catch (const DesignError& e) {
        CHECK(std::string(e.what()).find("rank deficient") != std::string::npos);
    }
    CHECK_THROWS_AS(design_baseline(Scheme::ZfZf, real, c), DesignError);
    CHECK_NOTHROW(design_svd_rzf(real, c, AlphaMode::fixed(0.1)));
}

TEST_CASE("degeneracy: SVD-RZF at alpha = 0 is SVD-ZF") {
    const SystemConfig c = snr_config(20, 20, 0.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto real = generate_realization(c, seed);
        const auto a = design_svd_rzf(real, c, AlphaMode::fixed(0.0));
        const auto b = design_baseline(Scheme::SvdZf, real, c);
        CHECK((a.F - b.F).norm() < 1e-12);
        CHECK((a.W[0] - b.W[0]).norm() < 1e-12 * b.W[0].norm());
        CHECK(std::abs(a.rho_r[0] - b.rho_r[0]) < 1e-12 * b.rho_r[0]);
        const RVector sa = sinr_exact(effective_link(a, real, c));
        const RVector sb = sinr_exact(effective_link(b, real, c));
        CHECK((sa - sb).cwiseAbs().maxCoeff() < 1e-10 * sb.maxCoeff());
    }
}

TEST_CASE("zero-forcing designs are interference free") {
    const SystemConfig c = snr_config(20, 20, 0.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto real = generate_realization(c, seed);
        for (Scheme s : {Scheme::SvdZf, Scheme::ZfZf}) {
            const CMatrix H = effective_channel(design(s, real, c), real, c);
            CHECK(max_offdiag_ratio(H) < 1e-16);
        }
    }
}

TEST_CASE("double-ZF limit of robust MMSE-RZF") {
    SystemConfig c = snr_config(20, 20, 0.0);
    c.sigma1_sq = c.sigma2_sq = 1e-14;
    const auto real = generate_realization(c, 77);
    const auto d = design_mmse_rzf_robust(real, c);
    const auto& rc = real.relays[0];
    const CMatrix T = rc.G_hat * d.W[0] * rc.H_hat;
    const Complex scale = T.trace() / 4.0;
    CHECK((T - scale * CMatrix::Identity(4, 4)).norm() < 1e-8 * std::abs(scale));
}

TEST_CASE("matched filter forward gains") {
    const SystemConfig c = snr_config(20, 20, 0.1);
    const auto real = generate_realization(c, 12);
    const auto d = design_baseline(Scheme::SvdMf, real, c);
    const CMatrix gram = real.relays[0].G_hat * real.relays[0].G_hat.adjoint();
    for (int k = 0; k < 4; ++k) {
        CHECK(gram(k, k).real() > 0.0);
        CHECK(std::abs(gram(k, k).imag()) < 1e-14 * gram(k, k).real());
    }
    CHECK(d.alpha_fc == 0.0);
    CHECK(d.alpha_bc == 0.0);
}

TEST_CASE("conventional factors") {
    const SystemConfig c = snr_config(20, 20, 0.1);
    const auto real = generate_realization(c, 2);
    const auto d = design_baseline(Scheme::MmseRzfConventional, real, c);
    CHECK(d.alpha_bc == doctest::Approx(0.04).epsilon(1e-14));
    CHECK(d.alpha_fc == doctest::Approx(0.04).epsilon(1e-14));
    CHECK(design_baseline(Scheme::SvdRzf, real, c).alpha_fc == doctest::Approx(0.04).epsilon(1e-14));
    const auto z = design_baseline(Scheme::ZfZf, real, c);
    CHECK(z.alpha_bc == 0.0);
    CHECK(z.alpha_fc == 0.0);
}

TEST_CASE("robust MMSE-RZF structure") {
    const SystemConfig c = snr_config(20, 20, 0.1, 4, 10);
    const auto real = generate_realization(c, 8);
    const auto d = design_mmse_rzf_robust(real, c);
    CHECK((d.F - CMatrix::Identity(4, 4)).norm() == 0.0);
    CHECK(d.rho_s == doctest::Approx(std::sqrt(c.Ps / 4.0)).epsilon(1e-15));
    CHECK(d.alpha_bc == doctest::Approx(alpha_mmse_opt(c)).epsilon(1e-15));
    REQUIRE(d.rho_r.size() == 10);
    for (double r : d.rho_r) CHECK(r == d.rho_r[0]);
    const auto& rc = real.relays[3];
    const CMatrix expected =
        rc.G_hat.adjoint() *
        (rc.G_hat * rc.G_hat.adjoint() + d.alpha_fc * CMatrix::Identity(4, 4)).inverse() *
        (rc.H_hat.adjoint() * rc.H_hat + d.alpha_bc * CMatrix::Identity(4, 4)).inverse() *
        rc.H_hat.adjoint();
    CHECK((d.W[3] - expected).norm() < 1e-10 * expected.norm());
}

TEST_CASE("relay power identity for every scheme") {
    const SystemConfig single = snr_config(20, 20, 0.2);
    const SystemConfig multi = snr_config(20, 20, 0.2, 4, 3);
    for (Scheme s : all_schemes()) {
        const SystemConfig& c = is_svd_scheme(s) ? single : multi;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto real = generate_realization(c, seed);
            const auto d = design(s, real, c);
            for (double p : relay_power_surrogate(d, real, c)) {
                CHECK(std::abs(p - c.Pr) < 1e-10 * c.Pr);
            }
        }
    }
}

TEST_CASE("closed-form rho_r matches the trace form in expectation over Q") {
    const SystemConfig c = snr_config(20, 20, 0.1);
    RVector theta(4), lambda(4);
    theta << 9.0, 4.0, 2.0, 0.5;
    lambda << 6.0, 3.0, 1.0, 0.25;
    const double alpha = 0.3;
    const CMatrix I = CMatrix::Identity(4, 4);
    // U = V = I; only Q is random.
    std::vector<double> inv;
    for (int t = 0; t < 20000; ++t) {
        const CMatrix Q = haar_unitary(4, derive_seed(606, t));
        const auto real = oracle::synthetic_single_relay(I, theta, I, Q, lambda, I);
        const auto d = design_svd_rzf(real, c, AlphaMode::fixed(alpha));
        inv.push_back(1.0 / (d.rho_r[0] * d.rho_r[0]));
    }
    const auto m = oracle::mean_se(inv);
    const double closed = rho_r_svd_rzf_closed(std::vector<double>(theta.data(), theta.data() + 4),
                                               std::vector<double>(lambda.data(), lambda.data() + 4),
                                               alpha, c);
    CHECK(std::abs(m.mean - 1.0 / (closed * closed)) < 4.0 * m.se);
}

TEST_CASE("true-channel power audit") {
    const SystemConfig c = snr_config(20, 20, 0.1);
    for (Scheme s : {Scheme::RobustSvdRzf, Scheme::ZfZf, Scheme::RobustMmseRzf}) {
        double acc = 0.0;
        const int trials = 1000;
        for (int t = 0; t < trials; ++t) {
            const auto real = generate_realization(c, 5000 + t);
            acc += relay_power_true(design(s, real, c), real, c)[0];
        }
        CHECK(acc / trials == doctest::Approx(c.Pr).epsilon(0.05));
    }
}
