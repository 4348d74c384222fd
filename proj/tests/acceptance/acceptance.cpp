// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "phidiv/inference.hpp"
#include "phidiv/measures.hpp"
#include "phidiv/montecarlo.hpp"

using namespace phidiv;

namespace {

constexpr std::uint64_t kSeed = 20240607;

SupportPtr support3() { return make_support({"c1", "c2", "c3"}); }
ProbabilityVector ref_p() { return {support3(), {0.4, 0.25, 0.35}}; }
ProbabilityVector ref_q() { return {support3(), {0.27, 0.32, 0.41}}; }

std::vector<MeasureKind> clt_measures() {
    return {MeasureKind::kl(),           MeasureKind::tsallis(0.99),       MeasureKind::renyi(0.99),
            MeasureKind::renyi(0.5),     MeasureKind::kl(true),            MeasureKind::tsallis(0.99, true),
            MeasureKind::renyi(0.99, true), MeasureKind::renyi(0.5, true)};
}

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

Verdict ground_truth() {
    const auto p = ref_p(), q = ref_q();
    struct Row {
        MeasureKind kind;
        double printed;
    };
    const std::vector<Row> rows{{MeasureKind::tsallis(0.99), 0.03969},     {MeasureKind::renyi(0.99), 0.03970},
                                {MeasureKind::kl(), 0.04012},              {MeasureKind::tsallis(0.99, true), 0.03854},
                                {MeasureKind::renyi(0.99, true), 0.03854}, {MeasureKind::kl(true), 0.03893}};
    Verdict v;
    double worst = 0.0;
    for (const auto& r : rows) {
        const double d = divergence(r.kind, p, q);
        worst = std::max(worst, std::abs(d - r.printed));
        if (std::abs(d - r.printed) > 5e-5) {
            v.pass = false;
            v.detail += r.kind.to_string() + "=" + fmt(d) + " ";
        }
    }
    v.detail += "max |D - printed| = " + fmt(worst) + " (tol 5e-5)";
    return v;
}

Verdict clt() {
    Verdict v;
    std::size_t cells = 0;
    double worst_mean = 0.0, worst_sd = 0.0, min_ks = 1.0;
    for (Mode mode : {Mode::one_sample_p, Mode::one_sample_q, Mode::two_sample}) {
        SimulationConfig cfg(ref_p(), ref_q());
        cfg.measures = clt_measures();
        cfg.mode = mode;
        cfg.sizes = {20000};
        cfg.replications = 2000;
        cfg.master_seed = kSeed;
        cfg.keep_draws = false;
        const SimulationReport report = run(cfg);
        for (const auto& c : report.cells) {
            ++cells;
            const double dm = std::abs(c.standardized_mean);
            const double ds = std::abs(c.standardized_sd - 1.0);
            worst_mean = std::max(worst_mean, dm);
            worst_sd = std::max(worst_sd, ds);
            min_ks = std::min(min_ks, c.ks_p_value);
            if (!(c.standardized_available && c.failed == 0 && dm < 0.1 && ds < 0.1 && c.ks_p_value > 0.01)) {
                v.pass = false;
                v.detail += c.measure + "/" + std::string(to_string(mode)) + " mean=" + fmt(c.standardized_mean) +
                            " sd=" + fmt(c.standardized_sd) + " ks_p=" + fmt(c.ks_p_value) + "; ";
            }
        }
    }
    v.detail += std::to_string(cells) + " cells, max|mean|=" + fmt(worst_mean) + " max|sd-1|=" + fmt(worst_sd) +
                " min KS p=" + fmt(min_ks);
    return v;
}

Verdict variance_oracle() {
    Verdict v;
    double worst = 0.0;
    const std::size_t n = 20000;
    for (Mode mode : {Mode::one_sample_p, Mode::one_sample_q}) {
        SimulationConfig cfg(ref_p(), ref_q());
        cfg.measures = {MeasureKind::kl(), MeasureKind::tsallis(0.99), MeasureKind::kl(true),
                        MeasureKind::tsallis(0.99, true)};
        cfg.mode = mode;
        cfg.sizes = {n};
        cfg.replications = 5000;
        cfg.master_seed = kSeed + 1;
        cfg.keep_draws = false;
        const SimulationReport report = run(cfg);
        for (const auto& c : report.cells) {
            const double analytic = mode == Mode::one_sample_p ? c.true_variance_p : c.true_variance_q;
            const double empirical = c.sd_estimate * c.sd_estimate * static_cast<double>(n);
            const double rel = std::abs(empirical / analytic - 1.0);
            worst = std::max(worst, rel);
            if (!(rel < 0.10)) {
                v.pass = false;
                v.detail += c.measure + "/" + std::string(to_string(mode)) + " rel=" + fmt(rel) + "; ";
            }
        }
    }
    v.detail += "max relative error " + fmt(worst) + " (tol 0.10)";
    return v;
}

Verdict renyi_tsallis() {
    Verdict v;
    std::mt19937_64 rng(kSeed + 2);
    std::uniform_real_distribution<double> w(0.02, 1.0), a(0.05, 4.0);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t r = 2 + rng() % 9;
        std::vector<std::string> labels;
        for (std::size_t j = 0; j < r; ++j) labels.push_back("x" + std::to_string(j));
        auto s = make_support(labels);
        std::vector<double> wp(r), wq(r);
        for (auto& x : wp) x = w(rng);
        for (auto& x : wq) x = w(rng);
        auto p = ProbabilityVector::from_weights(s, wp);
        auto q = ProbabilityVector::from_weights(s, wq);
        double alpha = a(rng);
        if (std::abs(alpha - 1.0) < 1e-3) alpha += 0.01;
        const auto R = named_constants(MeasureKind::renyi(alpha), p, q);
        const auto T = named_constants(MeasureKind::tsallis(alpha), p, q);
        const double spq = s_alpha(p, q, AlphaParam(alpha)), sqp = s_alpha(q, p, AlphaParam(alpha));
        const double S[4] = {spq, spq, sqp, sqp};
        for (std::size_t k = 0; k < 4; ++k) {
            const double ev = std::abs(R.v[k] * S[k] * S[k] - T.v[k]) / std::max(1.0, std::abs(T.v[k]));
            const double ea = std::abs(R.a[k] * S[k] - T.a[k]) / std::max(1.0, std::abs(T.a[k]));
            worst = std::max({worst, ev, ea});
        }
    }
    v.pass = worst <= 1e-12;
    v.detail = "100 random (p,q,alpha), max discrepancy " + fmt(worst) + " (tol 1e-12)";
    return v;
}

Verdict as_bound() {
    Verdict v;
    for (Mode mode : {Mode::one_sample_p, Mode::one_sample_q}) {
        SimulationConfig cfg(ref_p(), ref_q());
        cfg.measures = {MeasureKind::kl(), MeasureKind::tsallis(0.99)};
        cfg.mode = mode;
        cfg.sizes = {30000};
        cfg.replications = 500;
        cfg.master_seed = kSeed + 3;
        cfg.as_slack = 0.05;
        for (const auto& kind : cfg.measures) {
            const AsRatioSummary s = as_ratio_check(cfg, kind);
            if (!(s.exceedance_fraction <= 0.01)) v.pass = false;
            v.detail += kind.to_string() + "/" + std::string(to_string(mode)) + " exceed=" +
                        fmt(s.exceedance_fraction) + " max ratio/A=" + fmt(s.max / s.bound) + "; ";
        }
    }
    return v;
}

Verdict coverage() {
    SimulationConfig cfg(ref_p(), ref_q());
    cfg.measures = {MeasureKind::kl()};
    cfg.mode = Mode::two_sample;
    cfg.sizes = {20000};
    cfg.replications = 2000;
    cfg.master_seed = kSeed + 4;
    cfg.ci_level = 0.95;
    cfg.keep_draws = false;
    const auto c = run(cfg).cells.at(0);
    Verdict v;
    v.pass = std::abs(c.ci_coverage - 0.95) <= 0.02 && std::abs(c.true_value - 0.04012) < 5e-5;
    v.detail = "coverage " + fmt(c.ci_coverage) + " over 2000 replications (target 0.95 +/- 0.02)";
    return v;
}

Verdict gradients() {
    const double h = 1e-6;
    std::vector<MeasureKind> kinds{MeasureKind::kl(), MeasureKind::l2(), MeasureKind::tsallis(0.99),
                                   MeasureKind::tsallis(0.5), MeasureKind::tsallis(2.0), MeasureKind::renyi(0.99),
                                   MeasureKind::renyi(0.5), MeasureKind::renyi(2.0)};
    std::mt19937_64 rng(kSeed + 5);
    std::uniform_real_distribution<double> u(0.01, 0.99), su(0.2, 1.5);
    double worst = 0.0;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    for (const auto& k : kinds) {
        const PhiSpec spec = phi_spec_for(k);
        for (int t = 0; t < 100; ++t) {
            const double x = u(rng), y = u(rng);
            worst = std::max(worst, rel(spec.d1(x, y), (spec.phi(x + h, y) - spec.phi(x - h, y)) / (2 * h)));
            worst = std::max(worst, rel(spec.d2(x, y), (spec.phi(x, y + h) - spec.phi(x, y - h)) / (2 * h)));
            if (spec.transform) {
                const double s = su(rng);
                worst = std::max(worst, rel(spec.transform_derivative(s),
                                            (spec.transform(s + h) - spec.transform(s - h)) / (2 * h)));
            }
        }
    }
    Verdict v;
    v.pass = worst <= 1e-5;
    v.detail = "8 kernels x 100 interior points, max relative error " + fmt(worst) + " (tol 1e-5)";
    return v;
}

Verdict degenerate_guard() {
    auto s = support3();
    ProbabilityVector u(s, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    Verdict v;
    int checked = 0;
    for (bool sym : {false, true}) {
        for (const auto& k : {MeasureKind::l2(sym), MeasureKind::kl(sym), MeasureKind::tsallis(0.99, sym),
                              MeasureKind::renyi(0.99, sym), MeasureKind::renyi(0.5, sym)}) {
            for (Mode mode : {Mode::one_sample_p, Mode::one_sample_q, Mode::two_sample}) {
                const TestResult r = wald_test(estimate_from_pmfs(k, mode, u, u, 1000, 1000), 0.0);
                ++checked;
                if (!r.degenerate || r.p_value || r.z) {
                    v.pass = false;
                    v.detail += k.to_string() + " not flagged; ";
                }
            }
        }
    }
    v.detail += std::to_string(checked) + " (measure, mode) pairs at p = q uniform";
    return v;
}

Verdict determinism() {
    const std::vector<std::string> args{"simulate", "--paper-defaults", "--seed", "7", "--replications", "200"};
    std::ostringstream a, b, ea, eb;
    const int ca = cli::run(args, a, ea);
    const int cb = cli::run(args, b, eb);
    Verdict v;
    v.pass = ca == 0 && cb == 0 && !a.str().empty() && a.str() == b.str();
    v.detail = "two runs, " + std::to_string(a.str().size()) + " bytes, identical=" + (a.str() == b.str() ? "yes" : "no");
    return v;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Verdict()> check;
    };
    const std::vector<Criterion> criteria{
        {1, "ground-truth reproduction", ground_truth},
        {2, "CLT reproduction", clt},
        {3, "variance-oracle equivalence", variance_oracle},
        {4, "Renyi/Tsallis constant consistency", renyi_tsallis},
        {5, "a.s. bound check", as_bound},
        {6, "CI coverage", coverage},
        {7, "gradient checks", gradients},
        {8, "degenerate-null guard", degenerate_guard},
        {9, "simulate determinism", determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !v.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
