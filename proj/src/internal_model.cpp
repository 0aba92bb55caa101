#include "dreg/internal_model.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace dreg {

bool DisturbanceModel::has_stable_mode(double tol) const {
    if (S.size() == 0) return false;
    Eigen::EigenSolver<Mat> eig(S, false);
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
        if (eig.eigenvalues()(i).real() < -tol) return true;
    return false;
}

double default_minpoly_tol(const Mat& S, int k) {
    const double norm_inf = S.cwiseAbs().rowwise().sum().maxCoeff();
    return 1e-9 * std::pow(1.0 + norm_inf, k);
}

std::vector<double> minimal_polynomial(const Mat& S, double tol) {
    require_dims(S.rows() == S.cols() && S.rows() > 0, "minimal_polynomial");
    const Eigen::Index n = S.rows();
    const Eigen::Index nn = n * n;

    // Columns vec(S^0) .. vec(S^(k-1)).
    Mat krylov(nn, n + 1);
    Mat power = Mat::Identity(n, n);
    krylov.col(0) = Eigen::Map<const Vec>(power.data(), nn);

    for (Eigen::Index k = 1; k <= n; ++k) {
        power = power * S;
        const Eigen::Map<const Vec> target(power.data(), nn);
        const auto basis = krylov.leftCols(k);
        const Vec c = basis.colPivHouseholderQr().solve(target);
        const double resid = (basis * c - target).norm();
        const double t = tol > 0.0 ? tol : default_minpoly_tol(S, static_cast<int>(k));
        if (resid <= t || k == n) {
            // S^k = sum_j c_j S^j  =>  p_{k-j} = -c_j
            std::vector<double> coeffs(k);
            for (Eigen::Index j = 0; j < k; ++j) coeffs[k - 1 - j] = -c(j);
            if (resid <= t) return coeffs;
            // Cayley-Hamilton bound reached without a numerical hit; fall
            // back to the characteristic polynomial.
            break;
        }
        krylov.col(k) = target;
    }

    Eigen::EigenSolver<Mat> eig(S, false);
    std::vector<std::complex<double>> roots(eig.eigenvalues().data(),
                                            eig.eigenvalues().data() + n);
    return poly_from_roots(roots);
}

double polynomial_residual(const Mat& S, const std::vector<double>& coeffs) {
    // Horner: S^k + p_1 S^(k-1) + ... + p_k I
    const Eigen::Index n = S.rows();
    Mat acc = Mat::Identity(n, n);
    for (double p : coeffs) acc = acc * S + p * Mat::Identity(n, n);
    return acc.norm();
}

CompanionPair companion_pair(const std::vector<double>& coeffs) {
    if (coeffs.empty()) throw Error("empty_coefficients", "companion_pair: empty coefficient list");
    const int np = static_cast<int>(coeffs.size());
    CompanionPair out{Mat::Zero(np, np), RowVec::Zero(np)};
    for (int r = 0; r + 1 < np; ++r) out.Phi(r, r + 1) = 1.0;
    for (int c = 0; c < np; ++c) out.Phi(np - 1, c) = -coeffs[np - 1 - c];
    out.Psi(0) = 1.0;
    return out;
}

std::vector<double> poly_from_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> poly{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= r * poly[i];
        }
        poly = std::move(next);
    }
    std::vector<double> coeffs(roots.size());
    for (std::size_t i = 1; i < poly.size(); ++i) {
        const double scale = std::max(1.0, std::abs(poly[i]));
        if (std::abs(poly[i].imag()) > 1e-9 * scale)
            throw Error("spectrum_not_conjugate", "desired spectrum must be closed under conjugation");
        coeffs[i - 1] = poly[i].real();
    }
    return coeffs;
}

Vec stabilizing_injection(const Mat& Phi, const RowVec& Psi,
                          const std::vector<std::complex<double>>& desired_spectrum) {
    const Eigen::Index n = Phi.rows();
    require_dims(Phi.cols() == n && Psi.size() == n, "stabilizing_injection");
    require_dims(static_cast<Eigen::Index>(desired_spectrum.size()) == n, "stabilizing_injection");
    for (const auto& s : desired_spectrum)
        if (!(s.real() < 0.0)) throw Error("spectrum_not_hurwitz", "desired spectrum must lie in the open left half-plane");

    // Dual pair: A = Phi^T, B = Psi^T. Controllability of (A, B)
    // is observability of (Psi, Phi).
    const Mat A = Phi.transpose();
    const Vec B = Psi.transpose();
    Mat ctrb(n, n);
    Vec col = B;
    for (Eigen::Index k = 0; k < n; ++k) {
        ctrb.col(k) = col;
        col = A * col;
    }
    Eigen::FullPivLU<Mat> lu(ctrb);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible())
        throw Error("unobservable", "stabilizing_injection: observability matrix is singular");

    // phi_d(A) = A^n + p_1 A^(n-1) + ... + p_n I
    const std::vector<double> p = poly_from_roots(desired_spectrum);
    Mat phi = Mat::Identity(n, n);
    for (double c : p) phi = phi * A + c * Mat::Identity(n, n);

    RowVec last = RowVec::Zero(n);
    last(n - 1) = 1.0;
    const RowVec K = last * lu.inverse() * phi;  // eig(A - B K) = desired
    // eig(Phi - K^T Psi) = eig((A - B K)^T)
    return -K.transpose();
}

std::vector<std::complex<double>> default_spectrum(int n) {
    std::vector<std::complex<double>> s(n);
    for (int i = 0; i < n; ++i) s[i] = -static_cast<double>(i + 1);
    return s;
}

bool is_hurwitz(const Mat& F) {
    Eigen::EigenSolver<Mat> eig(F, false);
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
        if (!(eig.eigenvalues()(i).real() < 0.0)) return false;
    return true;
}

Mat lyapunov_certificate(const Mat& F) {
    require_dims(F.rows() == F.cols() && F.rows() > 0, "lyapunov_certificate");
    if (!is_hurwitz(F)) throw Error("lyapunov_unstable", "lyapunov_unstable: F is not Hurwitz");
    const Eigen::Index n = F.rows();
    const Mat I = Mat::Identity(n, n);
    const Mat Ft = F.transpose();

    // vec(F^T P + P F) = (I (x) F^T + F^T (x) I) vec(P)  (column-major vec)
    Mat kron(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            kron.block(i * n, j * n, n, n) = I(i, j) * Ft + Ft(i, j) * I;

    const Vec rhs = -Eigen::Map<const Vec>(I.data(), n * n);
    const Vec sol = kron.fullPivLu().solve(rhs);
    Mat P = Eigen::Map<const Mat>(sol.data(), n, n);
    return 0.5 * (P + P.transpose());
}

double lyapunov_residual(const Mat& P, const Mat& F) {
    return (P * F + F.transpose() * P + Mat::Identity(F.rows(), F.cols())).norm();
}

Vec generator_initial_state(const DisturbanceModel& model, const std::vector<double>& coeffs) {
    require_dims(model.S.rows() == model.D.size() && model.omega0.size() == model.D.size(),
                 "generator_initial_state");
    const int np = static_cast<int>(coeffs.size());
    Vec tau(np);
    Vec w = model.omega0;
    for (int j = 0; j < np; ++j) {
        tau(j) = model.D.dot(w);
        w = model.S * w;
    }
    return tau;
}

InternalModel synthesize(const DisturbanceModel& model,
                         const std::vector<std::complex<double>>& spectrum) {
    InternalModel im;
    im.coeffs = minimal_polynomial(model.S);
    auto pair = companion_pair(im.coeffs);
    im.Phi = std::move(pair.Phi);
    im.Psi = std::move(pair.Psi);
    const auto poles = spectrum.empty() ? default_spectrum(im.dim()) : spectrum;
    im.G = stabilizing_injection(im.Phi, im.Psi, poles);
    im.F = im.Phi + im.G * im.Psi;
    im.P = lyapunov_certificate(im.F);
    return im;
}

}  // namespace dreg
