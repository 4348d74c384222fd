#include "phidiv/phi.hpp"

#include <cmath>

namespace phidiv {

void require_bd(const ProbabilityVector& p, const ProbabilityVector& q, const PhiSpec& phi) {
    require_same_support(p.support(), q.support());
    if (!phi.requires_positive) return;
    if (auto j = p.first_zero()) throw BdViolation(p.support()->label(*j), *j, "first argument");
    if (auto j = q.first_zero()) throw BdViolation(q.support()->label(*j), *j, "second argument");
}

double kernel_sum(const ProbabilityVector& p, const ProbabilityVector& q, const PhiSpec& phi) {
    require_bd(p, q, phi);
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) s += phi.phi(p[j], q[j]);
    return s;
}

double j_functional(const ProbabilityVector& p, const ProbabilityVector& q, const PhiSpec& phi) {
    return phi.apply_transform(kernel_sum(p, q, phi));
}

std::vector<double> gradient_weights(const ProbabilityVector& p, const ProbabilityVector& q,
                                     const PhiSpec& phi, Argument argument) {
    const double slope = phi.transform_slope(kernel_sum(p, q, phi));
    const auto& partial = argument == Argument::first ? phi.d1 : phi.d2;
    std::vector<double> g(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) g[j] = slope * partial(p[j], q[j]);
    return g;
}

double asymptotic_variance(const ProbabilityVector& p, std::span<const double> g) {
    if (g.size() != p.size()) {
        throw Error("gradient has " + std::to_string(g.size()) + " entries for a pmf of size " +
                    std::to_string(p.size()));
    }
    double mean = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) mean += p[j] * g[j];
    double v = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double d = g[j] - mean;
        v += p[j] * d * d;
    }
    return v;
}

BoundConstants as_bound_constants(const ProbabilityVector& p, const ProbabilityVector& q,
                                  const PhiSpec& phi) {
    require_bd(p, q, phi);
    BoundConstants a;
    for (std::size_t j = 0; j < p.size(); ++j) {
        a.a1 += std::abs(phi.d1(p[j], q[j]));
        a.a2 += std::abs(phi.d2(p[j], q[j]));
        a.a3 += std::abs(phi.d1(q[j], p[j]));
        a.a4 += std::abs(phi.d2(q[j], p[j]));
    }
    return a;
}

namespace {

double abs_sum(const std::vector<double>& g) {
    double s = 0.0;
    for (double v : g) s += std::abs(v);
    return s;
}

}  // namespace

BoundConstants scaled_bound_constants(const ProbabilityVector& p, const ProbabilityVector& q,
                                      const PhiSpec& phi) {
    const GradientFamilies f = gradient_families(p, q, phi);
    return {abs_sum(f.g1), abs_sum(f.g2), abs_sum(f.g3), abs_sum(f.g4)};
}

double symmetrized_value(const ProbabilityVector& p, const ProbabilityVector& q,
                         const PhiSpec& phi) {
    return 0.5 * (j_functional(p, q, phi) + j_functional(q, p, phi));
}

GradientFamilies gradient_families(const ProbabilityVector& p, const ProbabilityVector& q,
                                   const PhiSpec& phi) {
    GradientFamilies f;
    f.g1 = gradient_weights(p, q, phi, Argument::first);
    f.g2 = gradient_weights(p, q, phi, Argument::second);
    // In J(q,p) the sample from q sits in the first slot and p in the second.
    f.g3 = gradient_weights(q, p, phi, Argument::first);
    f.g4 = gradient_weights(q, p, phi, Argument::second);
    return f;
}

VariancePair symmetrized_variance(const ProbabilityVector& p, const ProbabilityVector& q,
                                  const PhiSpec& phi, SymmetrizedVarianceMode mode) {
    const GradientFamilies f = gradient_families(p, q, phi);
    if (mode == SymmetrizedVarianceMode::paper) {
        return {(asymptotic_variance(p, f.g1) + asymptotic_variance(p, f.g4)) / 4.0,
                (asymptotic_variance(q, f.g2) + asymptotic_variance(q, f.g3)) / 4.0};
    }
    std::vector<double> gp(p.size()), gq(q.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        gp[j] = 0.5 * (f.g1[j] + f.g4[j]);
        gq[j] = 0.5 * (f.g2[j] + f.g3[j]);
    }
    return {asymptotic_variance(p, gp), asymptotic_variance(q, gq)};
}

std::vector<double> Matrix::multiply(std::span<const double> x) const {
    if (x.size() != n_) throw Error("dimension mismatch in matrix-vector product");
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) y[i] += (*this)(i, j) * x[j];
    }
    return y;
}

Matrix multinomial_covariance(const ProbabilityVector& p) {
    if (auto j = p.first_zero()) {
        throw BdViolation(p.support()->label(*j), *j, "multinomial covariance");
    }
    const std::size_t r = p.size();
    Matrix m(r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            m(i, j) = i == j ? 1.0 - p[i] : -std::sqrt(p[i] * p[j]);
        }
    }
    return m;
}

}  // namespace phidiv
