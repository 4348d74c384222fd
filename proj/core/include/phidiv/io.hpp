#pragma once

// File formats:
//   count table CSV    header "label,count", one row per support point
//   sample file        one label per line, UTF-8; blank lines ignored
//   distribution JSON  {"support": ["c1", ...], "probs": [0.4, ...]}
//   result JSON        {measure, mode, value, stderr, variance_p, variance_q,
//                       n, m, z, p_value, ci: [low, high], level, degenerate}

#include <iosfwd>
#include <string>
#include <vector>

#include "phidiv/inference.hpp"
#include "phidiv/measures.hpp"
#include "phidiv/pmf.hpp"

namespace phidiv::io {

// Malformed or unreadable input.
class InputError : public Error {
public:
    using Error::Error;
};

CountTable parse_count_csv(std::istream& in, const std::string& source = "<stream>");
CountTable read_count_csv(const std::string& path);
void write_count_csv(const CountTable& counts, std::ostream& out);

std::vector<std::string> parse_sample_labels(std::istream& in);
std::vector<std::string> read_sample_labels(const std::string& path);

ProbabilityVector parse_distribution_json(const std::string& text,
                                          const std::string& source = "<string>");
ProbabilityVector read_distribution_json(const std::string& path);
std::string distribution_to_json(const ProbabilityVector& p);

// Puts `counts` on `target`'s label order; the label sets must agree.
CountTable align_counts(const CountTable& counts, const SupportPtr& target);
ProbabilityVector align_pmf(const ProbabilityVector& p, const SupportPtr& target);

std::string result_to_json(const TestResult& result);

// Constants document: the measure's named constants plus its rate certificate
// for every mode.
std::string constants_to_json(const NamedConstants& constants,
                              const std::vector<RateCertificate>& certificates);

}  // namespace phidiv::io
