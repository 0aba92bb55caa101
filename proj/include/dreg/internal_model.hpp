#pragma once

#include <complex>
#include <vector>

#include "dreg/types.hpp"

namespace dreg {

/// Linear disturbance exosystem  w' = S w,  d = D w.
struct DisturbanceModel {
    Mat S;
    RowVec D;   // already evaluated at the scenario's mu
    Vec omega0;

    int dim() const noexcept { return static_cast<int>(S.rows()); }
    /// True when some eigenvalue of S has negative real part (decaying mode).
    bool has_stable_mode(double tol = 1e-12) const;
};

/// Steady-state generator (Phi, Psi) with its output injection G and
/// Lyapunov certificate P for F = Phi + G Psi.
struct InternalModel {
    std::vector<double> coeffs;  // p_1 .. p_np of s^np + p_1 s^(np-1) + ... + p_np
    Mat Phi;
    RowVec Psi;
    Vec G;
    Mat F;
    Mat P;

    int dim() const noexcept { return static_cast<int>(Phi.rows()); }
};

/// Default scale-aware rank tolerance for a degree-k search on S.
double default_minpoly_tol(const Mat& S, int k);

/// Least-degree monic annihilating polynomial of S, found by an incremental
/// Krylov rank test on vec(I), vec(S), vec(S^2), ...
/// tol <= 0 selects default_minpoly_tol.
std::vector<double> minimal_polynomial(const Mat& S, double tol = 0.0);

/// ||P(S)||_F for a coefficient list in the minimal_polynomial convention.
double polynomial_residual(const Mat& S, const std::vector<double>& coeffs);

struct CompanionPair {
    Mat Phi;
    RowVec Psi;
};

/// Top-right identity block, bottom row (-p_np, ..., -p_1), Psi = e_1^T.
CompanionPair companion_pair(const std::vector<double>& coeffs);

/// Monic real polynomial coefficients (p_1..p_n) with the given roots.
/// Roots must be closed under conjugation.
std::vector<double> poly_from_roots(const std::vector<std::complex<double>>& roots);

/// Places eig(Phi + G Psi) at desired_spectrum via Ackermann's formula on
/// the dual pair (Phi^T, Psi^T).
Vec stabilizing_injection(const Mat& Phi, const RowVec& Psi,
                          const std::vector<std::complex<double>>& desired_spectrum);

/// {-1, -2, ..., -n}
std::vector<std::complex<double>> default_spectrum(int n);

bool is_hurwitz(const Mat& F);

/// Solves P F + F^T P = -I by Kronecker vectorization.
/// Throws Error("lyapunov_unstable") if F is not Hurwitz.
Mat lyapunov_certificate(const Mat& F);

double lyapunov_residual(const Mat& P, const Mat& F);

/// tau0 = col(D w0, D S w0, ..., D S^(np-1) w0)
Vec generator_initial_state(const DisturbanceModel& model, const std::vector<double>& coeffs);

/// Whole synthesis chain for one agent. An empty spectrum selects the default.
InternalModel synthesize(const DisturbanceModel& model,
                         const std::vector<std::complex<double>>& spectrum = {});

}  // namespace dreg
