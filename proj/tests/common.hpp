#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "phidiv/pmf.hpp"

namespace phidiv::testing {

inline SupportPtr abc() { return make_support({"c1", "c2", "c3"}); }

// The reference pair used throughout the simulation study.
inline ProbabilityVector ref_p(SupportPtr s = abc()) { return {std::move(s), {0.4, 0.25, 0.35}}; }
inline ProbabilityVector ref_q(SupportPtr s = abc()) { return {std::move(s), {0.27, 0.32, 0.41}}; }

inline SupportPtr labels(std::size_t r) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < r; ++j) out.push_back("x" + std::to_string(j));
    return make_support(std::move(out));
}

// Strictly positive random pmf, entries bounded away from zero.
inline ProbabilityVector random_pmf(const SupportPtr& s, std::mt19937_64& rng, double floor = 0.02) {
    std::uniform_real_distribution<double> u(floor, 1.0);
    std::vector<double> w(s->size());
    for (double& x : w) x = u(rng);
    return ProbabilityVector::from_weights(s, w);
}

// Multinomial counts by sequential conditional binomials. Independent of the
// library's inverse-CDF sampler.
inline std::vector<std::uint64_t> multinomial(const std::vector<double>& p, std::uint64_t n,
                                              std::mt19937_64& rng) {
    std::vector<std::uint64_t> c(p.size(), 0);
    double rest = 1.0;
    std::uint64_t left = n;
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        if (left == 0) break;
        const double prob = std::min(1.0, std::max(0.0, p[j] / rest));
        std::binomial_distribution<std::uint64_t> b(left, prob);
        c[j] = b(rng);
        left -= c[j];
        rest -= p[j];
    }
    c.back() += left;
    return c;
}

inline std::vector<double> frequencies(const std::vector<std::uint64_t>& c) {
    double n = 0.0;
    for (auto x : c) n += static_cast<double>(x);
    std::vector<double> f;
    for (auto x : c) f.push_back(static_cast<double>(x) / n);
    return f;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

// Direct-formula oracles, written out independently of the library.
inline double kl_direct(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) s += p[j] * std::log(p[j] / q[j]);
    return s;
}

inline double s_direct(const std::vector<double>& p, const std::vector<double>& q, double a) {
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) s += std::pow(p[j], a) * std::pow(q[j], 1.0 - a);
    return s;
}

inline double tsallis_direct(const std::vector<double>& p, const std::vector<double>& q, double a) {
    return (s_direct(p, q, a) - 1.0) / (a - 1.0);
}

inline double renyi_direct(const std::vector<double>& p, const std::vector<double>& q, double a) {
    return std::log(s_direct(p, q, a)) / (a - 1.0);
}

inline std::vector<double> vec(const ProbabilityVector& p) { return {p.probs().begin(), p.probs().end()}; }

}  // namespace phidiv::testing
