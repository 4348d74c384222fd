#pragma once

// Plug-in estimation with delta-method standard errors, Wald intervals and
// tests, and almost-sure rate certificates.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "phidiv/measures.hpp"
#include "phidiv/phi.hpp"
#include "phidiv/pmf.hpp"

namespace phidiv {

// Which argument(s) of D(p,q) are estimated from data.
enum class Mode {
    one_sample_p,  // D(p_n, q), q known
    one_sample_q,  // D(p, q_m), p known
    two_sample,    // D(p_n, q_m)
};

Mode parse_mode(std::string_view text);
std::string_view to_string(Mode mode);

inline bool samples_p(Mode m) { return m != Mode::one_sample_q; }
inline bool samples_q(Mode m) { return m != Mode::one_sample_p; }

struct EstimateRequest {
    Mode mode = Mode::two_sample;
    MeasureKind measure;
    // Counts for every sampled argument, known pmfs for the others.
    std::optional<CountTable> p_counts;
    std::optional<CountTable> q_counts;
    std::optional<ProbabilityVector> p_known;
    std::optional<ProbabilityVector> q_known;
    SmoothingPolicy smoothing = SmoothingPolicy::strict();
    SymmetrizedVarianceMode symmetrized_variance = SymmetrizedVarianceMode::exact;
};

// Plug-in variances below this are treated as zero (degenerate null).
inline constexpr double kVarianceFloor = 1e-12;

struct DivergenceEstimate {
    MeasureKind measure;
    Mode mode = Mode::two_sample;
    double value = 0.0;
    double variance_p = 0.0;  // zero unless p was sampled
    double variance_q = 0.0;  // zero unless q was sampled
    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> m;

    // sqrt(variance_p/n + variance_q/m) over the sampled arguments.
    double standard_error() const;
    bool degenerate() const;
};

// Asymptotic variances of the measure's estimator at (p, q): `p` is the
// variance attached to a sample from p, `q` to a sample from q. Routed through
// the generic phi framework for every measure.
VariancePair delta_method_variances(const MeasureKind& kind, const ProbabilityVector& p,
                                    const ProbabilityVector& q,
                                    SymmetrizedVarianceMode mode = SymmetrizedVarianceMode::exact);

DivergenceEstimate estimate(const EstimateRequest& req);

// Same as estimate() once the plug-in pmfs are known; for hot loops.
DivergenceEstimate estimate_from_pmfs(const MeasureKind& kind, Mode mode,
                                      const ProbabilityVector& p, const ProbabilityVector& q,
                                      std::optional<std::uint64_t> n,
                                      std::optional<std::uint64_t> m,
                                      SymmetrizedVarianceMode sym_mode =
                                          SymmetrizedVarianceMode::exact);

struct Interval {
    double low = 0.0;
    double high = 0.0;
    bool degenerate = false;
};

// value -/+ z_{(1+level)/2} * stderr. Collapses to the point when degenerate.
Interval confidence_interval(const DivergenceEstimate& est, double level);

enum class Alternative { two_sided, greater, less };

Alternative parse_alternative(std::string_view text);
std::string_view to_string(Alternative alt);

struct TestResult {
    DivergenceEstimate estimate;
    double null_value = 0.0;
    Alternative alternative = Alternative::two_sided;
    // Absent when degenerate, or when no test was requested.
    std::optional<double> z;
    std::optional<double> p_value;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double level = 0.95;
    bool degenerate = false;
    bool tested = false;  // set by wald_test
};

TestResult wald_test(const DivergenceEstimate& est, double null_value,
                     Alternative alternative = Alternative::two_sided, double level = 0.95);

// Interval only; z and p_value stay empty.
TestResult summarize(const DivergenceEstimate& est, double level = 0.95);

// Almost-sure bound constant for |D_hat - D| / deviation, with the
// deviation a_n, b_m or c_{n,m} matching the mode.
struct RateCertificate {
    MeasureKind measure;
    Mode mode = Mode::two_sample;
    double bound = 0.0;
    std::array<double, 4> a{};  // the measure's A_1..A_4
    std::string statement;
};

RateCertificate as_rate_certificate(const ProbabilityVector& p, const ProbabilityVector& q,
                                    const MeasureKind& kind, Mode mode);

}  // namespace phidiv
