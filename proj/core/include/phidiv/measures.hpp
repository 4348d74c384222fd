#pragma once

// Closed-form divergences (L2, Tsallis-alpha, Renyi-alpha, Kullback-Leibler),
// their kernels for the generic framework, and the named bound and
// variance constants.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phidiv/phi.hpp"
#include "phidiv/pmf.hpp"

namespace phidiv {

// alpha > 0 and |alpha - 1| >= 1e-9.
class AlphaParam {
public:
    static constexpr double kMinDistanceFromOne = 1e-9;

    explicit AlphaParam(double alpha);
    double value() const noexcept { return alpha_; }

private:
    double alpha_;
};

enum class Family { l2, tsallis, renyi, kl };

struct MeasureKind {
    Family family = Family::kl;
    std::optional<AlphaParam> alpha;  // set for tsallis and renyi only
    bool symmetrized = false;

    static MeasureKind l2(bool sym = false) { return {Family::l2, std::nullopt, sym}; }
    static MeasureKind kl(bool sym = false) { return {Family::kl, std::nullopt, sym}; }
    static MeasureKind tsallis(double alpha, bool sym = false) {
        return {Family::tsallis, AlphaParam(alpha), sym};
    }
    static MeasureKind renyi(double alpha, bool sym = false) {
        return {Family::renyi, AlphaParam(alpha), sym};
    }

    // Grammar: l2 | kl | tsallis:<alpha> | renyi:<alpha>, optional ":sym".
    static MeasureKind parse(std::string_view text);
    std::string to_string() const;

    double alpha_value() const;
    bool tolerates_zeros() const noexcept { return family == Family::l2; }
};

// sum_j p_j^alpha q_j^(1-alpha), each term evaluated as exp-log.
double s_alpha(const ProbabilityVector& p, const ProbabilityVector& q, AlphaParam alpha);

// Direct evaluation of the measure; averages both directions when symmetrized.
double divergence(const MeasureKind& kind, const ProbabilityVector& p,
                  const ProbabilityVector& q);

// Kernel and transform for the measure's one-directional form; the
// `symmetrized` flag is ignored here.
PhiSpec phi_spec_for(const MeasureKind& kind);

// The named constants of a measure. Index k = 0..3 holds constant k+1.
//   1: first argument sample, J(p,q)     2: second argument sample, J(p,q)
//   3: q sample in J(q,p)                4: p sample in J(q,p)
// Renyi constants are the Tsallis ones divided by S (A) or S^2 (V), where S is
// S_alpha(p,q) for k = 1,2 and S_alpha(q,p) for k = 3,4.
struct NamedConstants {
    MeasureKind kind;
    std::array<double, 4> a{};
    std::array<double, 4> v{};
    double a_sym_1 = 0.0;  // (A1 + A4) / 2
    double a_sym_2 = 0.0;  // (A2 + A3) / 2
    double v_1_4 = 0.0;    // V1 + V4
    double v_2_3 = 0.0;    // V2 + V3

    // Renyi and Tsallis only.
    std::optional<double> s_alpha_pq;
    std::optional<double> s_alpha_qp;
    // Renyi only: the Tsallis constants the Renyi ones derive from.
    std::optional<std::array<double, 4>> tsallis_a;
    std::optional<std::array<double, 4>> tsallis_v;

    // Key/value pairs named like "A_T_alpha_1", "V_KL_2", "V_R_alpha_1_4".
    std::vector<std::pair<std::string, double>> entries() const;
};

NamedConstants named_constants(const MeasureKind& kind, const ProbabilityVector& p,
                               const ProbabilityVector& q);

}  // namespace phidiv
