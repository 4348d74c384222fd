#pragma once

// Finite supports, probability vectors, empirical pmfs and seeded
// categorical sampling.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace phidiv {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two vectors were combined positionally but live on different supports.
class SupportMismatch : public Error {
public:
    using Error::Error;
};

// A zero probability sits where a formula takes a log or divides by it.
class BdViolation : public Error {
public:
    BdViolation(std::string label, std::size_t index, std::string which);

    const std::string& label() const noexcept { return label_; }
    std::size_t index() const noexcept { return index_; }

private:
    std::string label_;
    std::size_t index_;
};

// Ordered, duplicate-free list of labels (size >= 2). Shared between all
// vectors defined over it; comparisons between vectors are positional.
class Support {
public:
    explicit Support(std::vector<std::string> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }

    std::optional<std::size_t> find(std::string_view label) const;
    // Throws Error("unknown label '<label>'") when absent.
    std::size_t index_of(std::string_view label) const;

    bool operator==(const Support& other) const { return labels_ == other.labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::size_t> index_;
};

using SupportPtr = std::shared_ptr<const Support>;

SupportPtr make_support(std::vector<std::string> labels);

// Both vectors share a support (same object or identical label order).
bool same_support(const SupportPtr& a, const SupportPtr& b);
void require_same_support(const SupportPtr& a, const SupportPtr& b);

// A pmf over a support: entries in [0,1] summing to 1 within 1e-12.
class ProbabilityVector {
public:
    static constexpr double kSumTolerance = 1e-12;

    ProbabilityVector(SupportPtr support, std::vector<double> probs);

    // Normalizes nonnegative weights; used for random test vectors and
    // smoothing, never for user-facing input.
    static ProbabilityVector from_weights(SupportPtr support, std::span<const double> weights);

    const SupportPtr& support() const noexcept { return support_; }
    std::size_t size() const noexcept { return probs_.size(); }
    std::span<const double> probs() const noexcept { return probs_; }
    double operator[](std::size_t i) const { return probs_[i]; }

    bool strictly_positive() const noexcept;
    // First index holding a zero, if any.
    std::optional<std::size_t> first_zero() const noexcept;

private:
    SupportPtr support_;
    std::vector<double> probs_;
};

class CountTable {
public:
    CountTable(SupportPtr support, std::vector<std::uint64_t> counts);

    const SupportPtr& support() const noexcept { return support_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    std::uint64_t total() const noexcept { return total_; }

private:
    SupportPtr support_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_;
};

// Observations stored as positions into the support.
class SampleBatch {
public:
    SampleBatch(SupportPtr support, std::vector<std::size_t> observations);
    // Validates every label against the support.
    static SampleBatch from_labels(SupportPtr support, std::span<const std::string> labels);

    const SupportPtr& support() const noexcept { return support_; }
    std::span<const std::size_t> observations() const noexcept { return obs_; }
    std::size_t size() const noexcept { return obs_.size(); }
    std::vector<std::string> labels() const;

private:
    SupportPtr support_;
    std::vector<std::size_t> obs_;
};

// Zero-cell policy applied when turning counts into a pmf.
struct SmoothingPolicy {
    enum class Kind { strict, smooth };

    Kind kind = Kind::strict;
    double lambda = 0.5;

    static SmoothingPolicy strict() { return {}; }
    static SmoothingPolicy smooth(double lambda = 0.5);
};

CountTable count_observations(const SampleBatch& samples);

std::pair<ProbabilityVector, CountTable> empirical_pmf(const SampleBatch& samples);

// strict: count_j / n. smooth(l): (count_j + l) / (n + l r).
ProbabilityVector empirical_pmf(const CountTable& counts,
                                SmoothingPolicy policy = SmoothingPolicy::strict());

// a_n = max_j |estimate_j - truth_j|.
double sup_deviation(const ProbabilityVector& estimate, const ProbabilityVector& truth);

// c_{n,m} = max(a_n, b_m).
inline double joint_sup_deviation(double a_n, double b_m) { return a_n > b_m ? a_n : b_m; }

bool validate_bd(const ProbabilityVector& p, const ProbabilityVector& q);

// Deterministic child seed for stream `key` of `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key) noexcept;

// Inverse-CDF sampler over the support order.
class CategoricalSampler {
public:
    explicit CategoricalSampler(const ProbabilityVector& p);

    const SupportPtr& support() const noexcept { return support_; }

    SampleBatch sample(std::size_t n, std::uint64_t seed) const;
    // Same stream as sample(n, seed), tallied without materializing.
    CountTable sample_counts(std::size_t n, std::uint64_t seed) const;

private:
    template <typename Sink>
    void draw(std::size_t n, std::uint64_t seed, Sink&& sink) const;

    SupportPtr support_;
    std::vector<double> cdf_;
};

SampleBatch sample_categorical(const ProbabilityVector& p, std::size_t n, std::uint64_t seed);

}  // namespace phidiv
