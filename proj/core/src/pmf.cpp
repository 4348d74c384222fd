#include "phidiv/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace phidiv {

BdViolation::BdViolation(std::string label, std::size_t index, std::string which)
    : Error("zero probability for label '" + label + "' (index " + std::to_string(index) +
            ") in " + which + "; the measure requires every entry > 0"),
      label_(std::move(label)),
      index_(index) {}

Support::Support(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2) {
        throw Error("support must contain at least 2 labels");
    }
    index_.reserve(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (!index_.emplace(labels_[i], i).second) {
            throw Error("duplicate label '" + labels_[i] + "' in support");
        }
    }
}

std::optional<std::size_t> Support::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Support::index_of(std::string_view label) const {
    if (auto i = find(label)) return *i;
    throw Error("unknown label '" + std::string(label) + "'");
}

SupportPtr make_support(std::vector<std::string> labels) {
    return std::make_shared<const Support>(std::move(labels));
}

bool same_support(const SupportPtr& a, const SupportPtr& b) {
    if (a == b) return true;
    return a && b && *a == *b;
}

void require_same_support(const SupportPtr& a, const SupportPtr& b) {
    if (!same_support(a, b)) {
        throw SupportMismatch("support mismatch: vectors are defined over different label lists");
    }
}

ProbabilityVector::ProbabilityVector(SupportPtr support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
    if (!support_) throw Error("probability vector requires a support");
    if (probs_.size() != support_->size()) {
        throw Error("probability vector has " + std::to_string(probs_.size()) +
                    " entries for a support of size " + std::to_string(support_->size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        const double v = probs_[i];
        if (!std::isfinite(v) || v < 0.0 || v > 1.0 + kSumTolerance) {
            throw Error("probability for label '" + support_->label(i) + "' is outside [0,1]");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw Error("probabilities sum to " + std::to_string(sum) + ", expected 1");
    }
}

ProbabilityVector ProbabilityVector::from_weights(SupportPtr support,
                                                  std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) throw Error("weights must be finite and nonnegative");
        total += w;
    }
    if (!(total > 0.0)) throw Error("weights sum to zero");
    std::vector<double> probs(weights.begin(), weights.end());
    for (double& v : probs) v /= total;
    return ProbabilityVector(std::move(support), std::move(probs));
}

bool ProbabilityVector::strictly_positive() const noexcept { return !first_zero().has_value(); }

std::optional<std::size_t> ProbabilityVector::first_zero() const noexcept {
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (!(probs_[i] > 0.0)) return i;
    }
    return std::nullopt;
}

CountTable::CountTable(SupportPtr support, std::vector<std::uint64_t> counts)
    : support_(std::move(support)), counts_(std::move(counts)), total_(0) {
    if (!support_) throw Error("count table requires a support");
    if (counts_.size() != support_->size()) {
        throw Error("count table has " + std::to_string(counts_.size()) +
                    " rows for a support of size " + std::to_string(support_->size()));
    }
    total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
    if (total_ == 0) throw Error("empty sample");
}

SampleBatch::SampleBatch(SupportPtr support, std::vector<std::size_t> observations)
    : support_(std::move(support)), obs_(std::move(observations)) {
    if (!support_) throw Error("sample batch requires a support");
    for (std::size_t i : obs_) {
        if (i >= support_->size()) {
            throw Error("observation index " + std::to_string(i) + " is outside the support");
        }
    }
}

SampleBatch SampleBatch::from_labels(SupportPtr support, std::span<const std::string> labels) {
    std::vector<std::size_t> obs;
    obs.reserve(labels.size());
    for (const auto& l : labels) obs.push_back(support->index_of(l));
    return SampleBatch(std::move(support), std::move(obs));
}

std::vector<std::string> SampleBatch::labels() const {
    std::vector<std::string> out;
    out.reserve(obs_.size());
    for (std::size_t i : obs_) out.push_back(support_->label(i));
    return out;
}

SmoothingPolicy SmoothingPolicy::smooth(double lambda) {
    if (!std::isfinite(lambda) || !(lambda > 0.0)) {
        throw Error("smoothing lambda must be positive");
    }
    return {Kind::smooth, lambda};
}

CountTable count_observations(const SampleBatch& samples) {
    if (samples.size() == 0) throw Error("empty sample");
    std::vector<std::uint64_t> counts(samples.support()->size(), 0);
    for (std::size_t i : samples.observations()) ++counts[i];
    return CountTable(samples.support(), std::move(counts));
}

std::pair<ProbabilityVector, CountTable> empirical_pmf(const SampleBatch& samples) {
    CountTable counts = count_observations(samples);
    ProbabilityVector p = empirical_pmf(counts);
    return {std::move(p), std::move(counts)};
}

ProbabilityVector empirical_pmf(const CountTable& counts, SmoothingPolicy policy) {
    const auto c = counts.counts();
    std::vector<double> probs(c.size());
    double denom = static_cast<double>(counts.total());
    double add = 0.0;
    if (policy.kind == SmoothingPolicy::Kind::smooth) {
        add = policy.lambda;
        denom += policy.lambda * static_cast<double>(c.size());
    }
    for (std::size_t j = 0; j < c.size(); ++j) {
        probs[j] = (static_cast<double>(c[j]) + add) / denom;
    }
    return ProbabilityVector(counts.support(), std::move(probs));
}

double sup_deviation(const ProbabilityVector& estimate, const ProbabilityVector& truth) {
    require_same_support(estimate.support(), truth.support());
    double dev = 0.0;
    for (std::size_t j = 0; j < estimate.size(); ++j) {
        dev = std::max(dev, std::abs(estimate[j] - truth[j]));
    }
    return dev;
}

bool validate_bd(const ProbabilityVector& p, const ProbabilityVector& q) {
    require_same_support(p.support(), q.support());
    return p.strictly_positive() && q.strictly_positive();
}

namespace {

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

// splitmix64 finalizer applied to the master, then to (mixed master, key).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key) noexcept {
    const std::uint64_t h = mix64(master + 0x9e3779b97f4a7c15ULL);
    return mix64(h ^ mix64(key + 0x632be59bd9b4e019ULL));
}

CategoricalSampler::CategoricalSampler(const ProbabilityVector& p)
    : support_(p.support()), cdf_(p.size()) {
    std::partial_sum(p.probs().begin(), p.probs().end(), cdf_.begin());
    // Pin the cdf to 1 from the last positive entry on, so rounding in the
    // running sum can neither leave a gap at the top nor select a trailing zero.
    std::size_t last = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] > 0.0) last = j;
    }
    for (std::size_t j = last; j < cdf_.size(); ++j) cdf_[j] = 1.0;
}

template <typename Sink>
void CategoricalSampler::draw(std::size_t n, std::uint64_t seed, Sink&& sink) const {
    if (n == 0) throw Error("sample size must be at least 1");
    std::mt19937_64 rng(seed);
    const auto begin = cdf_.begin();
    const auto end = cdf_.end();
    for (std::size_t i = 0; i < n; ++i) {
        // 53 random bits -> uniform in [0,1); independent of the library's
        // distribution implementations.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        sink(static_cast<std::size_t>(std::upper_bound(begin, end, u) - begin));
    }
}

SampleBatch CategoricalSampler::sample(std::size_t n, std::uint64_t seed) const {
    std::vector<std::size_t> obs;
    obs.reserve(n);
    draw(n, seed, [&](std::size_t j) { obs.push_back(j); });
    return SampleBatch(support_, std::move(obs));
}

CountTable CategoricalSampler::sample_counts(std::size_t n, std::uint64_t seed) const {
    std::vector<std::uint64_t> counts(cdf_.size(), 0);
    draw(n, seed, [&](std::size_t j) { ++counts[j]; });
    return CountTable(support_, std::move(counts));
}

SampleBatch sample_categorical(const ProbabilityVector& p, std::size_t n, std::uint64_t seed) {
    return CategoricalSampler(p).sample(n, seed);
}

}  // namespace phidiv
