#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "dreg/internal_model.hpp"
#include "dreg/integrator.hpp"
#include "dreg/scenarios.hpp"

using namespace dreg;

namespace {

const Mat S1 = Mat::Zero(1, 1);
const Mat S2 = (Mat(2, 2) << 0, 1, 0, 0).finished();
const Mat S3 = (Mat(2, 2) << 0, 1, -1, 0).finished();

// Faddeev-LeVerrier: characteristic polynomial coefficients (c_1..c_n) of
// s^n + c_1 s^(n-1) + ... + c_n, exact in integer arithmetic for small n.
std::vector<double> charpoly(const Mat& A) {
    const Eigen::Index n = A.rows();
    std::vector<double> c(n);
    Mat M = Mat::Zero(n, n);
    double prev = 1.0;
    for (Eigen::Index k = 1; k <= n; ++k) {
        M = A * M + prev * Mat::Identity(n, n);
        prev = -(A * M).trace() / static_cast<double>(k);
        c[k - 1] = prev;
    }
    return c;
}

// Remainder of monic a / monic b (descending coefficient lists without the
// leading 1).
std::vector<double> poly_remainder(std::vector<double> a, const std::vector<double>& b) {
    std::vector<double> num{1.0};
    num.insert(num.end(), a.begin(), a.end());
    std::vector<double> den{1.0};
    den.insert(den.end(), b.begin(), b.end());
    while (num.size() >= den.size()) {
        const double q = num.front();
        for (std::size_t i = 0; i < den.size(); ++i) num[i] -= q * den[i];
        num.erase(num.begin());
    }
    return num;
}

std::vector<double> eig_real_parts(const Mat& F) {
    Eigen::EigenSolver<Mat> eig(F, false);
    std::vector<double> re;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) re.push_back(eig.eigenvalues()(i).real());
    std::sort(re.begin(), re.end());
    return re;
}

// Truncated Taylor series after scaling; fine for the small norms used here.
Mat expm(const Mat& A) {
    int squarings = 0;
    double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
    while (norm > 0.5) {
        norm *= 0.5;
        ++squarings;
    }
    const Mat B = A / std::ldexp(1.0, squarings);
    Mat term = Mat::Identity(A.rows(), A.cols());
    Mat sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * B / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

}  // namespace

TEST_CASE("minimal polynomials of the benchmark disturbance matrices") {
    const auto c1 = minimal_polynomial(S1);
    REQUIRE(c1.size() == 1);
    CHECK(std::abs(c1[0]) <= 1e-12);
    const auto c2 = minimal_polynomial(S2);
    REQUIRE(c2.size() == 2);
    CHECK(std::abs(c2[0]) <= 1e-12);
    CHECK(std::abs(c2[1]) <= 1e-12);
    const auto c3 = minimal_polynomial(S3);
    REQUIRE(c3.size() == 2);
    CHECK(std::abs(c3[0]) <= 1e-12);
    CHECK(c3[1] == doctest::Approx(1.0));
    for (const Mat* S : {&S1, &S2, &S3}) CHECK(polynomial_residual(*S, minimal_polynomial(*S)) <= 1e-9);
}

TEST_CASE("minimal polynomial is smaller than the characteristic one for derogatory S") {
    CHECK(minimal_polynomial(Mat::Zero(3, 3)).size() == 1);
    const auto c = minimal_polynomial(2.0 * Mat::Identity(4, 4));
    REQUIRE(c.size() == 1);
    CHECK(c[0] == doctest::Approx(-2.0));
    Mat blocks = Mat::Zero(4, 4);
    blocks.topLeftCorner(2, 2) = S3;
    blocks.bottomRightCorner(2, 2) = S3;
    CHECK(minimal_polynomial(blocks).size() == 2);
}

TEST_CASE("companion pair layout") {
    auto p = companion_pair({0.0, 0.0});
    CHECK(p.Phi == S2);
    CHECK(p.Psi == (RowVec(2) << 1, 0).finished());
    p = companion_pair({0.0, 1.0});
    CHECK(p.Phi == S3);
    p = companion_pair({0.0});
    CHECK(p.Phi == Mat::Zero(1, 1));
    CHECK(p.Psi == RowVec::Ones(1));
    CHECK_THROWS_AS(companion_pair({}), Error);

    // char poly of Phi reproduces the coefficients
    const std::vector<double> coeffs{3.0, -2.0, 5.0};
    const auto q = charpoly(companion_pair(coeffs).Phi);
    for (std::size_t i = 0; i < coeffs.size(); ++i) CHECK(q[i] == doctest::Approx(coeffs[i]));
}

TEST_CASE("stabilizing injection places the spectrum") {
    using C = std::complex<double>;
    Vec G = stabilizing_injection(Mat::Zero(1, 1), RowVec::Ones(1), {C(-1.0)});
    CHECK(G(0) == doctest::Approx(-1.0));

    auto p2 = companion_pair({0.0, 0.0});
    G = stabilizing_injection(p2.Phi, p2.Psi, {C(-1.0), C(-2.0)});
    Mat F = p2.Phi + G * p2.Psi;
    const auto cp = charpoly(F);
    CHECK(cp[0] == doctest::Approx(3.0));
    CHECK(cp[1] == doctest::Approx(2.0));
    const auto re = eig_real_parts(F);
    CHECK(std::abs(re[0] + 2.0) <= 1e-8);
    CHECK(std::abs(re[1] + 1.0) <= 1e-8);

    auto p3 = companion_pair({0.0, 1.0});
    G = stabilizing_injection(p3.Phi, p3.Psi, {C(-1.0), C(-1.0)});
    F = p3.Phi + G * p3.Psi;
    Eigen::EigenSolver<Mat> eig(F, false);
    for (Eigen::Index i = 0; i < 2; ++i) CHECK(std::abs(eig.eigenvalues()(i) - C(-1.0)) <= 1e-8);

    // complex pair
    G = stabilizing_injection(p3.Phi, p3.Psi, {C(-1.0, 2.0), C(-1.0, -2.0)});
    const auto cpc = charpoly(p3.Phi + G * p3.Psi);
    CHECK(cpc[0] == doctest::Approx(2.0));
    CHECK(cpc[1] == doctest::Approx(5.0));

    CHECK_THROWS_AS(stabilizing_injection(p3.Phi, p3.Psi, {C(1.0), C(-1.0)}), Error);
    CHECK_THROWS_AS(stabilizing_injection(p3.Phi, p3.Psi, {C(-1.0, 1.0), C(-2.0)}), Error);
    // (Psi, Phi) unobservable
    CHECK_THROWS_AS(stabilizing_injection(Mat::Identity(2, 2), (RowVec(2) << 1, 0).finished(),
                                          {C(-1.0), C(-2.0)}),
                    Error);
}

TEST_CASE("lyapunov certificate") {
    Mat P = lyapunov_certificate((Mat(1, 1) << -1).finished());
    CHECK(P(0, 0) == doctest::Approx(0.5));
    P = lyapunov_certificate((Mat(2, 2) << -1, 0, 0, -2).finished());
    CHECK((P - (Mat(2, 2) << 0.5, 0, 0, 0.25).finished()).norm() <= 1e-14);

    auto p3 = companion_pair({0.0, 1.0});
    const Vec G = stabilizing_injection(p3.Phi, p3.Psi, default_spectrum(2));
    const Mat F = p3.Phi + G * p3.Psi;
    P = lyapunov_certificate(F);
    CHECK((P - P.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Mat> pe(P);
    CHECK(pe.eigenvalues().minCoeff() > 0.0);
    CHECK(lyapunov_residual(P, F) <= 1e-10);

    try {
        lyapunov_certificate(S3);
        FAIL("expected lyapunov_unstable");
    } catch (const Error& e) {
        CHECK(e.tag() == "lyapunov_unstable");
    }
}

TEST_CASE("generator initial state") {
    DisturbanceModel m1{S1, (RowVec(1) << 2).finished(), (Vec(1) << 3).finished()};
    CHECK(generator_initial_state(m1, {0.0}) == (Vec(1) << 6).finished());
    DisturbanceModel m2{S2, (RowVec(2) << 1, 0).finished(), (Vec(2) << 1, 1).finished()};
    CHECK(generator_initial_state(m2, {0.0, 0.0}) == (Vec(2) << 1, 1).finished());
    DisturbanceModel m3{S3, (RowVec(2) << 1, 0).finished(), Vec::Zero(2)};
    CHECK(generator_initial_state(m3, {0.0, 1.0}).isZero());
}

TEST_CASE("synthesized models satisfy the structural invariants") {
    const Scenario s = fhn_benchmark_scenario();
    for (const auto& a : s.agents) {
        const InternalModel& im = internal_model_of(a.controller);
        CHECK((im.F - (im.Phi + im.G * im.Psi)).norm() == 0.0);
        for (double re : eig_real_parts(im.F)) CHECK(re < 0.0);
        CHECK(lyapunov_residual(im.P, im.F) <= 1e-10);
        CHECK(im.Psi(0) == 1.0);
        const int np = im.dim();
        for (int r = 0; r + 1 < np; ++r) CHECK(im.Phi(r, r + 1) == 1.0);
    }
}

TEST_CASE("steady-state generator reproduces the disturbance") {
    const Scenario s = fhn_benchmark_scenario();
    for (const auto& a : s.agents) {
        const DisturbanceModel dm = a.disturbance.materialize(s.mu);
        const InternalModel& im = internal_model_of(a.controller);
        Vec tau = generator_initial_state(dm, im.coeffs);
        Vec omega = dm.omega0;
        const double dt = 1e-3;
        FixedStepper stepper(Method::rk4, tau.size());
        auto gen = [&](double, const Vec& x, Vec& dx) { dx = im.Phi * x; };
        double worst = 0.0;
        for (int k = 1; k <= 10000; ++k) {
            stepper.step(gen, 0.0, dt, tau);
            const double t = k * dt;
            // exact d(t) = D exp(S t) omega0
            const Mat expS = expm(dm.S * t);
            worst = std::max(worst, std::abs(im.Psi.dot(tau) - dm.D.dot(expS * omega)));
        }
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("property: minimal polynomial divides the characteristic polynomial") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> entry(-2, 2);
    std::uniform_int_distribution<int> dim(1, 5);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = dim(rng);
        Mat S(n, n);
        if (trial % 2 == 0) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) S(i, j) = entry(rng);
        } else {
            // derogatory: repeat a block, conjugate by a unimodular matrix
            const int b = (n + 1) / 2;
            Mat blk(b, b);
            for (int i = 0; i < b; ++i)
                for (int j = 0; j < b; ++j) blk(i, j) = entry(rng);
            Mat D = Mat::Zero(n, n);
            D.topLeftCorner(b, b) = blk;
            D.bottomRightCorner(n - b, n - b) = blk.topLeftCorner(n - b, n - b);
            Mat U = Mat::Identity(n, n);
            for (int i = 0; i + 1 < n; ++i) U(i, i + 1) = entry(rng);
            S = U * D * U.inverse();
        }
        const auto mp = minimal_polynomial(S);
        CHECK(static_cast<int>(mp.size()) <= n);
        const auto rem = poly_remainder(charpoly(S), mp);
        double worst = 0.0;
        for (double r : rem) worst = std::max(worst, std::abs(r));
        CHECK(worst <= 1e-8);
        CHECK(polynomial_residual(S, mp) <= default_minpoly_tol(S, static_cast<int>(mp.size())));
    }
}
