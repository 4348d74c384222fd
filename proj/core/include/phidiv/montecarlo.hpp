#pragma once

// Seeded Monte Carlo harness: consistency traces, normality of the
// standardized statistics, interval coverage and almost-sure ratio checks.
//
// Replication k of (measure i, size n) draws its samples from
// derive_seed(derive_seed(derive_seed(master, i), n), k), so every replication
// is reproducible on its own and the report does not depend on how
// replications are scheduled over threads.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "phidiv/inference.hpp"
#include "phidiv/measures.hpp"
#include "phidiv/pmf.hpp"

namespace phidiv {

struct SimulationConfig {
    SimulationConfig(ProbabilityVector p_, ProbabilityVector q_)
        : p(std::move(p_)), q(std::move(q_)) {}

    ProbabilityVector p;
    ProbabilityVector q;
    std::vector<MeasureKind> measures;
    Mode mode = Mode::two_sample;
    // Strictly increasing; in two-sample mode n = m = size.
    std::vector<std::size_t> sizes{100, 500, 2000, 10000, 30000};
    std::size_t replications = 2000;
    std::uint64_t master_seed = 0;
    double ci_level = 0.95;
    SmoothingPolicy smoothing = SmoothingPolicy::strict();
    SymmetrizedVarianceMode symmetrized_variance = SymmetrizedVarianceMode::exact;
    // Ratio exceedance is counted above (1 + as_slack) * bound.
    double as_slack = 0.05;
    // 0 = hardware concurrency.
    unsigned threads = 0;
    bool keep_draws = true;

    void validate() const;
};

// The setting of the reference simulation study: three outcomes,
// p = (0.4, 0.25, 0.35), q = (0.27, 0.32, 0.41), alpha = 0.99 and 0.5.
SimulationConfig reference_config();

struct CellSummary {
    std::string measure;
    std::size_t size = 0;
    std::size_t replications = 0;
    // Replications whose plug-in pmf violated positivity under strict policy.
    std::size_t failed = 0;

    double true_value = 0.0;
    double true_variance_p = 0.0;
    double true_variance_q = 0.0;

    double mean_estimate = 0.0;
    double sd_estimate = 0.0;
    double bias = 0.0;
    double mean_abs_error = 0.0;

    // False when the population variance is below the floor; the
    // standardized fields are then NaN.
    bool standardized_available = false;
    double standardized_mean = 0.0;
    double standardized_sd = 0.0;
    double ks_statistic = 0.0;
    double ks_p_value = 0.0;

    double ci_coverage = 0.0;

    double as_bound = 0.0;
    double as_ratio_median = 0.0;
    double as_ratio_max = 0.0;
    double as_exceedance_fraction = 0.0;
    // Zero deviation with a nonzero error; left out of the ratio statistics.
    std::size_t as_excluded = 0;

    std::vector<double> standardized_draws;

    // NaN fields compare equal to NaN.
    bool operator==(const CellSummary& other) const;
};

struct SimulationReport {
    Mode mode = Mode::two_sample;
    std::uint64_t master_seed = 0;
    std::size_t replications = 0;
    double ci_level = 0.95;
    double as_slack = 0.05;
    std::vector<std::string> labels;
    std::vector<double> p;
    std::vector<double> q;
    std::vector<std::size_t> sizes;
    std::vector<CellSummary> cells;  // measure-major, then size

    const CellSummary& cell(const std::string& measure, std::size_t size) const;

    bool operator==(const SimulationReport&) const = default;
};

SimulationReport run(const SimulationConfig& config);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// One-sample Kolmogorov-Smirnov test against N(0,1). Needs >= 8 finite values.
KsResult ks_normality(std::vector<double> values);

// P(K > lambda) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double lambda);

struct AsRatioSummary {
    std::size_t size = 0;
    std::size_t replications = 0;
    double bound = 0.0;
    double slack = 0.05;
    double exceedance_fraction = 0.0;
    double median = 0.0;
    double max = 0.0;
    std::size_t excluded = 0;
};

// Ratio |D_hat - D| / deviation at the largest configured size, against the
// certificate bound of `kind` in the configured mode.
AsRatioSummary as_ratio_check(const SimulationConfig& config, const MeasureKind& kind);

enum class ReportFormat { json, csv };

ReportFormat parse_report_format(std::string_view text);

// Statistic names written per (measure, size) row group in CSV output.
const std::vector<std::string>& csv_statistic_names();

std::string report_to_json(const SimulationReport& report, bool include_draws = false);
SimulationReport report_from_json(const std::string& text);
std::string report_to_csv(const SimulationReport& report);

void emit(const SimulationReport& report, ReportFormat format, std::ostream& out,
          bool include_draws = false);
void emit(const SimulationReport& report, ReportFormat format, const std::string& path,
          bool include_draws = false);

// One standardized value per line.
void write_draws(const CellSummary& cell, std::ostream& out);

}  // namespace phidiv
