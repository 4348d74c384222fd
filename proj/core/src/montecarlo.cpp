#include "phidiv/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "phidiv/normal.hpp"

namespace phidiv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_double(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same_doubles(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!same_double(a[i], b[i])) return false;
    }
    return true;
}

struct Replication {
    bool ok = false;
    double value = 0.0;
    double standardized = 0.0;
    bool covered = false;
    double ratio = 0.0;
    bool ratio_excluded = false;
};

struct CellPlan {
    MeasureKind kind;
    std::size_t measure_index = 0;
    std::size_t size = 0;
    double true_value = 0.0;
    VariancePair true_variance;
    double sigma = 0.0;  // sd of D_hat implied by the true variances
    bool available = false;
    double bound = 0.0;
};

CellPlan plan_cell(const SimulationConfig& cfg, const MeasureKind& kind, std::size_t index,
                   std::size_t size) {
    CellPlan plan;
    plan.kind = kind;
    plan.measure_index = index;
    plan.size = size;
    plan.true_value = divergence(kind, cfg.p, cfg.q);
    plan.true_variance = delta_method_variances(kind, cfg.p, cfg.q, cfg.symmetrized_variance);
    double v = 0.0;
    double s2 = 0.0;
    const double n = static_cast<double>(size);
    if (samples_p(cfg.mode)) {
        v += plan.true_variance.p;
        s2 += plan.true_variance.p / n;
    }
    if (samples_q(cfg.mode)) {
        v += plan.true_variance.q;
        s2 += plan.true_variance.q / n;
    }
    plan.available = v >= kVarianceFloor;
    plan.sigma = std::sqrt(s2);
    plan.bound = as_rate_certificate(cfg.p, cfg.q, kind, cfg.mode).bound;
    return plan;
}

std::vector<Replication> replicate(const SimulationConfig& cfg, const CellPlan& plan) {
    const std::uint64_t cell_seed =
        derive_seed(derive_seed(cfg.master_seed, plan.measure_index), plan.size);
    const CategoricalSampler sampler_p(cfg.p);
    const CategoricalSampler sampler_q(cfg.q);
    const bool with_p = samples_p(cfg.mode);
    const bool with_q = samples_q(cfg.mode);
    const std::size_t n = plan.size;

    std::vector<Replication> out(cfg.replications);
    auto one = [&](std::size_t k) {
        const std::uint64_t seed = derive_seed(cell_seed, k);
        ProbabilityVector p_hat = cfg.p;
        ProbabilityVector q_hat = cfg.q;
        double deviation = 0.0;
        if (with_p) {
            p_hat = empirical_pmf(sampler_p.sample_counts(n, derive_seed(seed, 0)), cfg.smoothing);
            deviation = sup_deviation(p_hat, cfg.p);
        }
        if (with_q) {
            q_hat = empirical_pmf(sampler_q.sample_counts(n, derive_seed(seed, 1)), cfg.smoothing);
            deviation = joint_sup_deviation(deviation, sup_deviation(q_hat, cfg.q));
        }
        Replication r;
        DivergenceEstimate est;
        try {
            est = estimate_from_pmfs(plan.kind, cfg.mode, p_hat, q_hat, n, n,
                                     cfg.symmetrized_variance);
        } catch (const BdViolation&) {
            out[k] = r;
            return;
        }
        r.ok = true;
        r.value = est.value;
        const double err = est.value - plan.true_value;
        r.standardized = plan.available ? err / plan.sigma : kNaN;
        const Interval ci = confidence_interval(est, cfg.ci_level);
        r.covered = ci.low <= plan.true_value && plan.true_value <= ci.high;
        if (deviation > 0.0) {
            r.ratio = std::abs(err) / deviation;
        } else if (err == 0.0) {
            r.ratio = 0.0;
        } else {
            r.ratio_excluded = true;
        }
        out[k] = r;
    };

    unsigned workers = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cfg.replications)));
    if (workers == 1) {
        for (std::size_t k = 0; k < cfg.replications; ++k) one(k);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t k = t; k < cfg.replications; k += workers) one(k);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return kNaN;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

struct MeanSd {
    double mean = kNaN;
    double sd = kNaN;
};

// Sample standard deviation (denominator count - 1); sd is 0 for one value.
MeanSd mean_sd(const std::vector<double>& v) {
    MeanSd r;
    if (v.empty()) return r;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    r.mean = mean;
    r.sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    return r;
}

CellSummary summarize_cell(const SimulationConfig& cfg, const CellPlan& plan,
                           const std::vector<Replication>& reps) {
    CellSummary c;
    c.measure = plan.kind.to_string();
    c.size = plan.size;
    c.replications = reps.size();
    c.true_value = plan.true_value;
    c.true_variance_p = samples_p(cfg.mode) ? plan.true_variance.p : 0.0;
    c.true_variance_q = samples_q(cfg.mode) ? plan.true_variance.q : 0.0;
    c.as_bound = plan.bound;
    c.standardized_available = plan.available;

    std::vector<double> values, draws, ratios;
    std::size_t covered = 0, exceed = 0;
    double abs_err = 0.0;
    for (const Replication& r : reps) {
        if (!r.ok) {
            ++c.failed;
            continue;
        }
        values.push_back(r.value);
        abs_err += std::abs(r.value - plan.true_value);
        if (plan.available) draws.push_back(r.standardized);
        if (r.covered) ++covered;
        if (r.ratio_excluded) {
            ++c.as_excluded;
        } else {
            ratios.push_back(r.ratio);
            if (r.ratio > (1.0 + cfg.as_slack) * plan.bound) ++exceed;
        }
    }
    const MeanSd est = mean_sd(values);
    c.mean_estimate = est.mean;
    c.sd_estimate = est.sd;
    c.bias = est.mean - plan.true_value;
    c.mean_abs_error = values.empty() ? kNaN : abs_err / static_cast<double>(values.size());
    c.ci_coverage = values.empty() ? kNaN
                                   : static_cast<double>(covered) / static_cast<double>(values.size());

    if (plan.available && !draws.empty()) {
        const MeanSd z = mean_sd(draws);
        c.standardized_mean = z.mean;
        c.standardized_sd = z.sd;
        if (draws.size() >= 8) {
            const KsResult ks = ks_normality(draws);
            c.ks_statistic = ks.statistic;
            c.ks_p_value = ks.p_value;
        } else {
            c.ks_statistic = kNaN;
            c.ks_p_value = kNaN;
        }
    } else {
        c.standardized_mean = c.standardized_sd = c.ks_statistic = c.ks_p_value = kNaN;
    }

    c.as_ratio_median = median_of(ratios);
    c.as_ratio_max = ratios.empty() ? kNaN : *std::max_element(ratios.begin(), ratios.end());
    c.as_exceedance_fraction =
        ratios.empty() ? kNaN : static_cast<double>(exceed) / static_cast<double>(ratios.size());
    if (cfg.keep_draws) c.standardized_draws = std::move(draws);
    return c;
}

}  // namespace

bool CellSummary::operator==(const CellSummary& o) const {
    return measure == o.measure && size == o.size && replications == o.replications &&
           failed == o.failed && same_double(true_value, o.true_value) &&
           same_double(true_variance_p, o.true_variance_p) &&
           same_double(true_variance_q, o.true_variance_q) &&
           same_double(mean_estimate, o.mean_estimate) && same_double(sd_estimate, o.sd_estimate) &&
           same_double(bias, o.bias) && same_double(mean_abs_error, o.mean_abs_error) &&
           standardized_available == o.standardized_available &&
           same_double(standardized_mean, o.standardized_mean) &&
           same_double(standardized_sd, o.standardized_sd) &&
           same_double(ks_statistic, o.ks_statistic) && same_double(ks_p_value, o.ks_p_value) &&
           same_double(ci_coverage, o.ci_coverage) && same_double(as_bound, o.as_bound) &&
           same_double(as_ratio_median, o.as_ratio_median) &&
           same_double(as_ratio_max, o.as_ratio_max) &&
           same_double(as_exceedance_fraction, o.as_exceedance_fraction) &&
           as_excluded == o.as_excluded && same_doubles(standardized_draws, o.standardized_draws);
}

void SimulationConfig::validate() const {
    require_same_support(p.support(), q.support());
    if (!p.strictly_positive() || !q.strictly_positive()) {
        throw Error("simulation requires strictly positive p and q");
    }
    if (measures.empty()) throw Error("simulation requires at least one measure");
    if (replications < 1) throw Error("replications must be at least 1");
    if (sizes.empty()) throw Error("size grid is empty");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1) throw Error("sample sizes must be at least 1");
        if (i > 0 && sizes[i] <= sizes[i - 1]) throw Error("sample sizes must be strictly increasing");
    }
    if (!(ci_level > 0.0 && ci_level < 1.0)) throw Error("ci level must lie strictly between 0 and 1");
    if (!(as_slack >= 0.0)) throw Error("ratio slack must be nonnegative");
}

SimulationConfig reference_config() {
    auto support = make_support({"c1", "c2", "c3"});
    SimulationConfig cfg(ProbabilityVector(support, {0.4, 0.25, 0.35}),
                         ProbabilityVector(support, {0.27, 0.32, 0.41}));
    cfg.measures = {MeasureKind::tsallis(0.99), MeasureKind::tsallis(0.99, true),
                    MeasureKind::renyi(0.99),   MeasureKind::renyi(0.99, true),
                    MeasureKind::renyi(0.5, true), MeasureKind::renyi(0.5),
                    MeasureKind::kl(),          MeasureKind::kl(true)};
    return cfg;
}

const CellSummary& SimulationReport::cell(const std::string& measure, std::size_t size) const {
    for (const auto& c : cells) {
        if (c.measure == measure && c.size == size) return c;
    }
    throw Error("report has no cell for measure '" + measure + "' at size " + std::to_string(size));
}

SimulationReport run(const SimulationConfig& cfg) {
    cfg.validate();
    SimulationReport report;
    report.mode = cfg.mode;
    report.master_seed = cfg.master_seed;
    report.replications = cfg.replications;
    report.ci_level = cfg.ci_level;
    report.as_slack = cfg.as_slack;
    report.labels = cfg.p.support()->labels();
    report.p.assign(cfg.p.probs().begin(), cfg.p.probs().end());
    report.q.assign(cfg.q.probs().begin(), cfg.q.probs().end());
    report.sizes = cfg.sizes;
    for (std::size_t i = 0; i < cfg.measures.size(); ++i) {
        for (std::size_t size : cfg.sizes) {
            const CellPlan plan = plan_cell(cfg, cfg.measures[i], i, size);
            report.cells.push_back(summarize_cell(cfg, plan, replicate(cfg, plan)));
        }
    }
    return report;
}

double kolmogorov_survival(double lambda) {
    if (!(lambda > 0.0)) return 1.0;
    constexpr double kTol = 1e-10;
    if (lambda < 1.0) {
        // P(K <= l) = sqrt(2 pi)/l * sum_k exp(-(2k-1)^2 pi^2 / (8 l^2)).
        const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        double sum = 0.0;
        for (int k = 1; k < 1000; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double term = std::exp(-odd * odd * c);
            sum += term;
            if (term < kTol) break;
        }
        const double cdf = std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    // P(K > l) = 2 sum_k (-1)^(k-1) exp(-2 k^2 l^2).
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k < 1000; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < kTol) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_normality(std::vector<double> values) {
    if (values.size() < 8) throw Error("normality test needs at least 8 values");
    for (double v : values) {
        if (!std::isfinite(v)) throw Error("normality test needs finite values");
    }
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = normal::cdf(values[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    const double sn = std::sqrt(n);
    // Stephens' finite-sample correction of the asymptotic argument.
    return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

AsRatioSummary as_ratio_check(const SimulationConfig& config, const MeasureKind& kind) {
    config.validate();
    std::size_t index = config.measures.size();
    const std::string name = kind.to_string();
    for (std::size_t i = 0; i < config.measures.size(); ++i) {
        if (config.measures[i].to_string() == name) {
            index = i;
            break;
        }
    }
    const CellPlan plan = plan_cell(config, kind, index, config.sizes.back());
    SimulationConfig cfg = config;
    cfg.keep_draws = false;
    const CellSummary cell = summarize_cell(cfg, plan, replicate(cfg, plan));
    AsRatioSummary s;
    s.size = cell.size;
    s.replications = cell.replications;
    s.bound = cell.as_bound;
    s.slack = cfg.as_slack;
    s.exceedance_fraction = cell.as_exceedance_fraction;
    s.median = cell.as_ratio_median;
    s.max = cell.as_ratio_max;
    s.excluded = cell.as_excluded;
    return s;
}

}  // namespace phidiv
