#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dreg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using RowVec = Eigen::RowVectorXd;

/// Uncertain parameter vector col(mu_v, mu_x, mu_1, mu_2, mu_3).
struct Mu {
    double v = 0.0;
    double x = 0.0;   // carried for completeness, no built-in model reads it
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;

    static constexpr std::size_t size = 5;
    double operator[](std::size_t i) const;
    double& operator[](std::size_t i);
};

/// Component-level failure carrying a short machine-readable tag
/// ("lyapunov_unstable", "dimension_mismatch", ...).
class Error : public std::runtime_error {
public:
    Error(std::string tag, const std::string& what)
        : std::runtime_error(what), tag_(std::move(tag)) {}
    explicit Error(const std::string& tag) : Error(tag, tag) {}
    const std::string& tag() const noexcept { return tag_; }

private:
    std::string tag_;
};

class DivergedError : public Error {
public:
    explicit DivergedError(double time)
        : Error("diverged", "diverged at t=" + std::to_string(time)), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

inline void require_dims(bool ok, const char* where) {
    if (!ok) throw Error("dimension_mismatch", std::string(where) + ": dimension mismatch");
}

}  // namespace dreg
