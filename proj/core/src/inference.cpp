#include "phidiv/inference.hpp"

#include <cmath>
#include <limits>

#include "phidiv/normal.hpp"

namespace phidiv {

Mode parse_mode(std::string_view text) {
    if (text == "one-sample-p") return Mode::one_sample_p;
    if (text == "one-sample-q") return Mode::one_sample_q;
    if (text == "two-sample") return Mode::two_sample;
    throw Error("unknown mode '" + std::string(text) +
                "' (expected one-sample-p, one-sample-q or two-sample)");
}

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::one_sample_p: return "one-sample-p";
        case Mode::one_sample_q: return "one-sample-q";
        case Mode::two_sample: return "two-sample";
    }
    return "";
}

Alternative parse_alternative(std::string_view text) {
    if (text == "two-sided") return Alternative::two_sided;
    if (text == "greater") return Alternative::greater;
    if (text == "less") return Alternative::less;
    throw Error("unknown alternative '" + std::string(text) +
                "' (expected two-sided, greater or less)");
}

std::string_view to_string(Alternative alt) {
    switch (alt) {
        case Alternative::two_sided: return "two-sided";
        case Alternative::greater: return "greater";
        case Alternative::less: return "less";
    }
    return "";
}

double DivergenceEstimate::standard_error() const {
    double s2 = 0.0;
    if (n) s2 += variance_p / static_cast<double>(*n);
    if (m) s2 += variance_q / static_cast<double>(*m);
    return std::sqrt(s2);
}

bool DivergenceEstimate::degenerate() const {
    double v = 0.0;
    if (n) v += variance_p;
    if (m) v += variance_q;
    return v < kVarianceFloor;
}

VariancePair delta_method_variances(const MeasureKind& kind, const ProbabilityVector& p,
                                    const ProbabilityVector& q, SymmetrizedVarianceMode mode) {
    const PhiSpec spec = phi_spec_for(kind);
    if (kind.symmetrized) return symmetrized_variance(p, q, spec, mode);
    return {asymptotic_variance(p, gradient_weights(p, q, spec, Argument::first)),
            asymptotic_variance(q, gradient_weights(p, q, spec, Argument::second))};
}

DivergenceEstimate estimate_from_pmfs(const MeasureKind& kind, Mode mode,
                                      const ProbabilityVector& p, const ProbabilityVector& q,
                                      std::optional<std::uint64_t> n,
                                      std::optional<std::uint64_t> m,
                                      SymmetrizedVarianceMode sym_mode) {
    DivergenceEstimate est;
    est.measure = kind;
    est.mode = mode;
    est.value = divergence(kind, p, q);
    const VariancePair v = delta_method_variances(kind, p, q, sym_mode);
    if (samples_p(mode)) {
        est.variance_p = v.p;
        est.n = n;
    }
    if (samples_q(mode)) {
        est.variance_q = v.q;
        est.m = m;
    }
    return est;
}

DivergenceEstimate estimate(const EstimateRequest& req) {
    auto side = [&](bool sampled, const std::optional<CountTable>& counts,
                    const std::optional<ProbabilityVector>& known,
                    const char* name) -> std::pair<ProbabilityVector, std::optional<std::uint64_t>> {
        if (sampled) {
            if (!counts) throw Error(std::string("mode requires counts for ") + name);
            if (known) throw Error(std::string("mode samples ") + name + "; drop its known pmf");
            return {empirical_pmf(*counts, req.smoothing), counts->total()};
        }
        if (!known) throw Error(std::string("mode requires a known pmf for ") + name);
        if (counts) throw Error(std::string("mode treats ") + name + " as known; drop its counts");
        return {*known, std::nullopt};
    };
    auto [p, n] = side(samples_p(req.mode), req.p_counts, req.p_known, "p");
    auto [q, m] = side(samples_q(req.mode), req.q_counts, req.q_known, "q");
    return estimate_from_pmfs(req.measure, req.mode, p, q, n, m, req.symmetrized_variance);
}

namespace {

void require_level(double level) {
    if (!(level > 0.0 && level < 1.0)) throw Error("level must lie strictly between 0 and 1");
}

}  // namespace

Interval confidence_interval(const DivergenceEstimate& est, double level) {
    require_level(level);
    if (!est.n && !est.m) throw Error("estimate carries no sample size");
    if (est.degenerate()) return {est.value, est.value, true};
    const double half = normal::quantile(0.5 * (1.0 + level)) * est.standard_error();
    return {est.value - half, est.value + half, false};
}

TestResult summarize(const DivergenceEstimate& est, double level) {
    const Interval ci = confidence_interval(est, level);
    TestResult r;
    r.estimate = est;
    r.ci_low = ci.low;
    r.ci_high = ci.high;
    r.level = level;
    r.degenerate = ci.degenerate;
    return r;
}

TestResult wald_test(const DivergenceEstimate& est, double null_value, Alternative alternative,
                     double level) {
    TestResult r = summarize(est, level);
    r.null_value = null_value;
    r.alternative = alternative;
    r.tested = true;
    if (r.degenerate) return r;
    const double z = (est.value - null_value) / est.standard_error();
    r.z = z;
    switch (alternative) {
        case Alternative::two_sided: r.p_value = std::min(1.0, 2.0 * normal::upper_tail(std::abs(z))); break;
        case Alternative::greater: r.p_value = normal::upper_tail(z); break;
        case Alternative::less: r.p_value = normal::cdf(z); break;
    }
    return r;
}

RateCertificate as_rate_certificate(const ProbabilityVector& p, const ProbabilityVector& q,
                                    const MeasureKind& kind, Mode mode) {
    const NamedConstants c = named_constants(kind, p, q);
    RateCertificate cert;
    cert.measure = kind;
    cert.mode = mode;
    cert.a = c.a;
    const std::string d = kind.symmetrized ? "D_sym" : "D";
    if (!kind.symmetrized) {
        switch (mode) {
            case Mode::one_sample_p:
                cert.bound = c.a[0];
                cert.statement = "limsup |" + d + "(p_n,q) - " + d + "(p,q)| / a_n <= A_1";
                break;
            case Mode::one_sample_q:
                cert.bound = c.a[1];
                cert.statement = "limsup |" + d + "(p,q_m) - " + d + "(p,q)| / b_m <= A_2";
                break;
            case Mode::two_sample:
                cert.bound = c.a[0] + c.a[1];
                cert.statement =
                    "limsup |" + d + "(p_n,q_m) - " + d + "(p,q)| / c_nm <= A_1 + A_2";
                break;
        }
    } else {
        switch (mode) {
            case Mode::one_sample_p:
                cert.bound = c.a_sym_1;
                cert.statement = "limsup |" + d + "(p_n,q) - " + d + "(p,q)| / a_n <= (A_1 + A_4)/2";
                break;
            case Mode::one_sample_q:
                cert.bound = c.a_sym_2;
                cert.statement = "limsup |" + d + "(p,q_m) - " + d + "(p,q)| / b_m <= (A_2 + A_3)/2";
                break;
            case Mode::two_sample:
                cert.bound = c.a_sym_1 + c.a_sym_2;
                cert.statement = "limsup |" + d + "(p_n,q_m) - " + d +
                                 "(p,q)| / c_nm <= (A_1 + A_4)/2 + (A_2 + A_3)/2";
                break;
        }
    }
    return cert;
}

}  // namespace phidiv
