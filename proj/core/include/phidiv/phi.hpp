#pragma once

// Generic phi-divergence machinery: the functional J(p,q) = T(sum_j phi(p_j, q_j)),
// its delta-method gradient weights, the multinomial variance quadratic form,
// almost-sure bound constants and symmetrization.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phidiv/pmf.hpp"

namespace phidiv {

// A divergence kernel phi(s,t) with its first partials, plus an optional
// scalar post-transform T applied to the summed kernel. Callables must be
// reentrant.
struct PhiSpec {
    using Kernel = std::function<double(double, double)>;
    using Scalar = std::function<double(double)>;

    std::string name;
    Kernel phi;
    Kernel d1;  // d phi / ds
    Kernel d2;  // d phi / dt
    // Empty means identity.
    Scalar transform;
    Scalar transform_derivative;
    // When true, every p_j and q_j must be > 0 (the kernel takes logs or
    // negative powers).
    bool requires_positive = true;

    double apply_transform(double s) const { return transform ? transform(s) : s; }
    double transform_slope(double s) const {
        return transform_derivative ? transform_derivative(s) : 1.0;
    }
};

enum class Argument { first, second };

// Throws BdViolation naming the first offending label when `phi` needs
// strictly positive inputs.
void require_bd(const ProbabilityVector& p, const ProbabilityVector& q, const PhiSpec& phi);

// sum_j phi(p_j, q_j), before the transform.
double kernel_sum(const ProbabilityVector& p, const ProbabilityVector& q, const PhiSpec& phi);

double j_functional(const ProbabilityVector& p, const ProbabilityVector& q, const PhiSpec& phi);

// g_j = T'(S) * d1(p_j,q_j) for `first`, T'(S) * d2(p_j,q_j) for `second`,
// with S = sum_j phi(p_j,q_j).
std::vector<double> gradient_weights(const ProbabilityVector& p, const ProbabilityVector& q,
                                     const PhiSpec& phi, Argument argument);

// Var_p(g) = sum_j p_j g_j^2 - (sum_j p_j g_j)^2, evaluated in centered form.
// Exactly the limiting variance of sqrt(n) * sum_j g_j (phat_j - p_j).
double asymptotic_variance(const ProbabilityVector& p, std::span<const double> g);

// Raw kernel constants, no transform scaling:
//   a1 = sum |d1(p_j,q_j)|   a2 = sum |d2(p_j,q_j)|
//   a3 = sum |d1(q_j,p_j)|   a4 = sum |d2(q_j,p_j)|
struct BoundConstants {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double a4 = 0.0;
};

BoundConstants as_bound_constants(const ProbabilityVector& p, const ProbabilityVector& q,
                                  const PhiSpec& phi);

// Same four sums taken over the transform-scaled gradient weights, i.e.
// T'(S(p,q)) scales a1,a2 and T'(S(q,p)) scales a3,a4.
BoundConstants scaled_bound_constants(const ProbabilityVector& p, const ProbabilityVector& q,
                                      const PhiSpec& phi);

double symmetrized_value(const ProbabilityVector& p, const ProbabilityVector& q,
                         const PhiSpec& phi);

enum class SymmetrizedVarianceMode {
    // Delta method on the averaged functional, cross-terms included.
    exact,
    // (V1 + V4)/4 and (V2 + V3)/4, cross-terms dropped.
    paper,
};

struct VariancePair {
    double p = 0.0;  // variance attached to the first-argument sample
    double q = 0.0;  // variance attached to the second-argument sample
};

// The four gradient families behind the symmetrized statistic:
//   g1 = grad_p J(p,q), g4 = grad_p J(q,p)   (both weighted by p)
//   g2 = grad_q J(p,q), g3 = grad_q J(q,p)   (both weighted by q)
struct GradientFamilies {
    std::vector<double> g1, g2, g3, g4;
};

GradientFamilies gradient_families(const ProbabilityVector& p, const ProbabilityVector& q,
                                   const PhiSpec& phi);

VariancePair symmetrized_variance(const ProbabilityVector& p, const ProbabilityVector& q,
                                  const PhiSpec& phi,
                                  SymmetrizedVarianceMode mode = SymmetrizedVarianceMode::exact);

// Dense row-major square matrix; only what the covariance needs.
class Matrix {
public:
    explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    std::vector<double> multiply(std::span<const double> x) const;

private:
    std::size_t n_;
    std::vector<double> data_;
};

// Covariance of the sqrt(p)-normalized multinomial limit:
// diagonal 1 - p_j, off-diagonal -sqrt(p_i p_j).
Matrix multinomial_covariance(const ProbabilityVector& p);

}  // namespace phidiv
