#include <gtest/gtest.h>

#include <cmath>

#include "../common.hpp"
#include "phidiv/inference.hpp"
#include "phidiv/normal.hpp"

using namespace phidiv;
using namespace phidiv::testing;

namespace {

DivergenceEstimate fixed(double value, double se) {
    DivergenceEstimate e;
    e.measure = MeasureKind::kl();
    e.mode = Mode::one_sample_p;
    e.value = value;
    e.n = 100;
    e.variance_p = se * se * 100;
    return e;
}

CountTable counts_of(const std::vector<std::uint64_t>& c) { return CountTable(abc(), c); }

}  // namespace

TEST(ConfidenceInterval, Examples) {
    auto ci = confidence_interval(fixed(0.04, 0.01), 0.95);
    EXPECT_NEAR(ci.low, 0.0204, 1e-6);
    EXPECT_NEAR(ci.high, 0.0596, 1e-6);
    EXPECT_FALSE(ci.degenerate);
    auto half = confidence_interval(fixed(0.3, 0.02), 0.5);
    EXPECT_NEAR((half.high - half.low) / 2, 0.674489750196 * 0.02, 1e-9);
    auto z = confidence_interval(fixed(0.3, 0.0), 0.95);
    EXPECT_TRUE(z.degenerate);
    EXPECT_EQ(z.low, 0.3);
    EXPECT_EQ(z.high, 0.3);
    EXPECT_THROW(confidence_interval(fixed(0.3, 0.02), 1.5), Error);
    EXPECT_THROW(confidence_interval(fixed(0.3, 0.02), 0.0), Error);
}

TEST(WaldTest, Examples) {
    auto r = wald_test(fixed(0.04, 0.01), 0.0, Alternative::greater);
    ASSERT_TRUE(r.z && r.p_value);
    EXPECT_NEAR(*r.z, 4.0, 1e-12);
    EXPECT_NEAR(*r.p_value, 3.17e-5, 1e-7);
    auto two = wald_test(fixed(0.04, 0.01), 0.04);
    EXPECT_EQ(*two.z, 0.0);
    EXPECT_EQ(*two.p_value, 1.0);
    auto less = wald_test(fixed(0.04, 0.01), 0.0, Alternative::less);
    EXPECT_NEAR(*less.p_value, 1.0 - 3.167124183e-5, 1e-9);
    auto deg = wald_test(fixed(0.04, 0.0), 0.0);
    EXPECT_TRUE(deg.degenerate);
    EXPECT_FALSE(deg.z.has_value());
    EXPECT_FALSE(deg.p_value.has_value());
}

TEST(Estimate, ModesAndValidation) {
    EstimateRequest req;
    req.measure = MeasureKind::kl();
    req.mode = Mode::one_sample_p;
    req.p_counts = counts_of({40, 25, 35});
    req.q_known = ref_q();
    auto e = estimate(req);
    EXPECT_NEAR(e.value, 0.0401236, 1e-6);
    EXPECT_EQ(e.n, 100u);
    EXPECT_FALSE(e.m.has_value());
    EXPECT_EQ(e.variance_q, 0.0);
    EXPECT_NEAR(e.standard_error(), std::sqrt(e.variance_p / 100), 1e-15);

    req.q_counts = counts_of({27, 32, 41});
    EXPECT_THROW(estimate(req), Error);
    req.mode = Mode::two_sample;
    EXPECT_THROW(estimate(req), Error);
    req.q_known.reset();
    auto two = estimate(req);
    EXPECT_NEAR(two.standard_error(), std::sqrt(two.variance_p / 100 + two.variance_q / 100), 1e-15);
}

TEST(Estimate, OneSampleQUsesSecondArgumentGradient) {
    EstimateRequest req;
    req.measure = MeasureKind::kl();
    req.mode = Mode::one_sample_q;
    req.p_known = ref_p();
    req.q_counts = counts_of({270, 320, 410});
    auto e = estimate(req);
    const auto spec = phi_spec_for(req.measure);
    EXPECT_NEAR(e.variance_q, asymptotic_variance(ref_q(), gradient_weights(ref_p(), ref_q(), spec, Argument::second)),
                1e-15);
    EXPECT_EQ(e.variance_p, 0.0);
    EXPECT_EQ(e.m, 1000u);
}

TEST(Estimate, ExactMatchIsDegenerate) {
    auto s = abc();
    EstimateRequest req;
    req.measure = MeasureKind::kl();
    req.mode = Mode::one_sample_p;
    req.p_counts = CountTable(s, {27, 32, 41});
    req.q_known = ref_q(s);
    auto e = estimate(req);
    EXPECT_NEAR(e.value, 0.0, 1e-15);
    EXPECT_TRUE(e.degenerate());
    EXPECT_TRUE(summarize(e).degenerate);
}

TEST(Estimate, ZeroCellsUnderStrictAndSmooth) {
    EstimateRequest req;
    req.measure = MeasureKind::kl();
    req.mode = Mode::one_sample_p;
    req.p_counts = counts_of({40, 0, 60});
    req.q_known = ref_q();
    EXPECT_THROW(estimate(req), BdViolation);
    req.smoothing = SmoothingPolicy::smooth(0.5);
    EXPECT_NO_THROW(estimate(req));
    req.measure = MeasureKind::l2();
    req.smoothing = SmoothingPolicy::strict();
    EXPECT_NO_THROW(estimate(req));
}

TEST(Estimate, SwapInvarianceForSymmetricMeasures) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 100; ++t) {
        std::vector<std::uint64_t> a(3), b(3);
        for (auto& x : a) x = 5 + rng() % 100;
        for (auto& x : b) x = 5 + rng() % 100;
        for (auto kind : {MeasureKind::l2(), MeasureKind::renyi(0.5), MeasureKind::kl(true),
                          MeasureKind::tsallis(0.99, true), MeasureKind::renyi(2.0, true)}) {
            EstimateRequest fwd;
            fwd.measure = kind;
            fwd.p_counts = counts_of(a);
            fwd.q_counts = counts_of(b);
            EstimateRequest rev = fwd;
            std::swap(rev.p_counts, rev.q_counts);
            auto x = estimate(fwd), y = estimate(rev);
            EXPECT_NEAR(std::abs(x.value), std::abs(y.value), 1e-12) << kind.to_string();
            EXPECT_NEAR(x.standard_error(), y.standard_error(), 1e-12) << kind.to_string();
        }
    }
}

TEST(Estimate, StderrShrinksWhenSizesDouble) {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int t = 0; t < 200; ++t) {
        DivergenceEstimate e;
        e.variance_p = u(rng) + 1e-6;
        e.variance_q = u(rng) + 1e-6;
        e.n = 1 + rng() % 5000;
        e.m = 1 + rng() % 5000;
        DivergenceEstimate d = e;
        d.n = 2 * *e.n;
        d.m = 2 * *e.m;
        EXPECT_LT(d.standard_error(), e.standard_error());
    }
}

TEST(Estimate, DegenerateGuardAtUniformNull) {
    auto s = abc();
    ProbabilityVector u(s, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    for (auto kind : {MeasureKind::l2(), MeasureKind::kl(), MeasureKind::tsallis(0.99), MeasureKind::renyi(0.5),
                      MeasureKind::kl(true), MeasureKind::tsallis(2.0, true), MeasureKind::renyi(0.99, true)}) {
        for (Mode mode : {Mode::one_sample_p, Mode::one_sample_q, Mode::two_sample}) {
            auto e = estimate_from_pmfs(kind, mode, u, u, 300, 300);
            auto r = wald_test(e, 0.0);
            EXPECT_TRUE(r.degenerate) << kind.to_string();
            EXPECT_FALSE(r.p_value.has_value());
        }
    }
}

TEST(Estimate, LargeSampleTwoSampleCoversTruth) {
    const auto p = vec(ref_p()), q = vec(ref_q());
    std::mt19937_64 rng(33);
    int within = 0;
    for (int k = 0; k < 200; ++k) {
        EstimateRequest req;
        req.measure = MeasureKind::kl();
        req.p_counts = counts_of(multinomial(p, 30000, rng));
        req.q_counts = counts_of(multinomial(q, 30000, rng));
        auto e = estimate(req);
        within += std::abs(e.value - 0.0401236) < 3 * e.standard_error();
    }
    EXPECT_GE(within, 198);
}

TEST(Estimate, TypeOneErrorAtTrueNull) {
    const auto p = vec(ref_p()), q = vec(ref_q());
    const double truth = kl_direct(p, q);
    std::mt19937_64 rng(34);
    int rejected = 0;
    const int reps = 2000;
    for (int k = 0; k < reps; ++k) {
        auto e = estimate_from_pmfs(MeasureKind::kl(), Mode::two_sample,
                                    ProbabilityVector(abc(), frequencies(multinomial(p, 20000, rng))),
                                    ProbabilityVector(abc(), frequencies(multinomial(q, 20000, rng))), 20000, 20000);
        rejected += *wald_test(e, truth).p_value < 0.05;
    }
    EXPECT_NEAR(rejected / double(reps), 0.05, 0.02);
}

TEST(RateCertificate, Examples) {
    auto q_side = as_rate_certificate(ref_p(), ref_q(), MeasureKind::kl(), Mode::one_sample_q);
    EXPECT_NEAR(q_side.bound, 3.1164, 1e-3);
    for (auto kind : {MeasureKind::kl(), MeasureKind::tsallis(0.99), MeasureKind::renyi(0.5, true)}) {
        auto a = as_rate_certificate(ref_p(), ref_q(), kind, Mode::one_sample_p);
        auto b = as_rate_certificate(ref_p(), ref_q(), kind, Mode::one_sample_q);
        auto c = as_rate_certificate(ref_p(), ref_q(), kind, Mode::two_sample);
        EXPECT_EQ(c.bound, a.bound + b.bound);
        EXPECT_FALSE(c.statement.empty());
    }
    const double S = s_alpha(ref_p(), ref_q(), AlphaParam(0.99));
    for (Mode mode : {Mode::one_sample_p, Mode::one_sample_q, Mode::two_sample}) {
        auto r = as_rate_certificate(ref_p(), ref_q(), MeasureKind::renyi(0.99), mode);
        auto t = as_rate_certificate(ref_p(), ref_q(), MeasureKind::tsallis(0.99), mode);
        EXPECT_NEAR(r.bound, t.bound / S, 1e-12 * t.bound);
    }
}

TEST(Parsing, ModesAndAlternatives) {
    for (Mode m : {Mode::one_sample_p, Mode::one_sample_q, Mode::two_sample}) EXPECT_EQ(parse_mode(to_string(m)), m);
    for (Alternative a : {Alternative::two_sided, Alternative::greater, Alternative::less}) {
        EXPECT_EQ(parse_alternative(to_string(a)), a);
    }
    EXPECT_THROW(parse_mode("paired"), Error);
    EXPECT_THROW(parse_alternative("both"), Error);
}
