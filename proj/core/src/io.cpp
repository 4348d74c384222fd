#include "phidiv/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace phidiv::io {

using nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return in;
}

ordered_json number_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

}  // namespace

CountTable parse_count_csv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::vector<std::string> labels;
    std::vector<std::uint64_t> counts;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = trim(line);
        if (row.empty()) continue;
        if (!header) {
            if (row != "label,count") {
                throw InputError(source + ":" + std::to_string(line_no) +
                                 ": expected header 'label,count'");
            }
            header = true;
            continue;
        }
        const auto comma = row.rfind(',');
        if (comma == std::string::npos) {
            throw InputError(source + ":" + std::to_string(line_no) + ": expected 'label,count'");
        }
        const std::string label = trim(std::string_view(row).substr(0, comma));
        const std::string count_text = trim(std::string_view(row).substr(comma + 1));
        std::uint64_t count = 0;
        auto res = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
        if (label.empty() || res.ec != std::errc() ||
            res.ptr != count_text.data() + count_text.size()) {
            throw InputError(source + ":" + std::to_string(line_no) +
                             ": invalid row '" + row + "'");
        }
        labels.push_back(label);
        counts.push_back(count);
    }
    if (!header) throw InputError(source + ": empty count table");
    try {
        return CountTable(make_support(std::move(labels)), std::move(counts));
    } catch (const Error& e) {
        throw InputError(source + ": " + e.what());
    }
}

CountTable read_count_csv(const std::string& path) {
    auto in = open_input(path);
    return parse_count_csv(in, path);
}

void write_count_csv(const CountTable& counts, std::ostream& out) {
    out << "label,count\n";
    for (std::size_t j = 0; j < counts.counts().size(); ++j) {
        out << counts.support()->label(j) << ',' << counts.counts()[j] << '\n';
    }
}

std::vector<std::string> parse_sample_labels(std::istream& in) {
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string label = trim(line);
        if (!label.empty()) out.push_back(std::move(label));
    }
    return out;
}

std::vector<std::string> read_sample_labels(const std::string& path) {
    auto in = open_input(path);
    auto labels = parse_sample_labels(in);
    if (labels.empty()) throw InputError(path + ": empty sample");
    return labels;
}

ProbabilityVector parse_distribution_json(const std::string& text, const std::string& source) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw InputError(source + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("support") || !doc.contains("probs")) {
        throw InputError(source + ": expected {\"support\": [...], \"probs\": [...]}");
    }
    try {
        auto labels = doc.at("support").get<std::vector<std::string>>();
        auto probs = doc.at("probs").get<std::vector<double>>();
        return ProbabilityVector(make_support(std::move(labels)), std::move(probs));
    } catch (const ordered_json::exception& e) {
        throw InputError(source + ": " + e.what());
    } catch (const Error& e) {
        throw InputError(source + ": " + e.what());
    }
}

ProbabilityVector read_distribution_json(const std::string& path) {
    auto in = open_input(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_distribution_json(buf.str(), path);
}

std::string distribution_to_json(const ProbabilityVector& p) {
    ordered_json doc;
    doc["support"] = p.support()->labels();
    doc["probs"] = std::vector<double>(p.probs().begin(), p.probs().end());
    return doc.dump();
}

namespace {

std::vector<std::size_t> permutation_onto(const SupportPtr& from, const SupportPtr& target) {
    if (from->size() != target->size()) {
        throw SupportMismatch("support mismatch: " + std::to_string(from->size()) + " vs " +
                              std::to_string(target->size()) + " labels");
    }
    std::vector<std::size_t> perm(target->size());
    for (std::size_t j = 0; j < target->size(); ++j) {
        auto i = from->find(target->label(j));
        if (!i) throw SupportMismatch("support mismatch: label '" + target->label(j) + "' missing");
        perm[j] = *i;
    }
    return perm;
}

}  // namespace

CountTable align_counts(const CountTable& counts, const SupportPtr& target) {
    if (same_support(counts.support(), target)) return CountTable(target, {counts.counts().begin(), counts.counts().end()});
    const auto perm = permutation_onto(counts.support(), target);
    std::vector<std::uint64_t> c(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j) c[j] = counts.counts()[perm[j]];
    return CountTable(target, std::move(c));
}

ProbabilityVector align_pmf(const ProbabilityVector& p, const SupportPtr& target) {
    if (same_support(p.support(), target)) return ProbabilityVector(target, {p.probs().begin(), p.probs().end()});
    const auto perm = permutation_onto(p.support(), target);
    std::vector<double> v(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j) v[j] = p[perm[j]];
    return ProbabilityVector(target, std::move(v));
}

std::string result_to_json(const TestResult& r) {
    const DivergenceEstimate& e = r.estimate;
    ordered_json doc;
    doc["measure"] = e.measure.to_string();
    doc["mode"] = std::string(to_string(e.mode));
    doc["value"] = number_or_null(e.value);
    doc["stderr"] = number_or_null(e.standard_error());
    doc["variance_p"] = e.variance_p;
    doc["variance_q"] = e.variance_q;
    doc["n"] = e.n ? ordered_json(*e.n) : ordered_json(nullptr);
    doc["m"] = e.m ? ordered_json(*e.m) : ordered_json(nullptr);
    doc["z"] = r.z ? number_or_null(*r.z) : ordered_json(nullptr);
    doc["p_value"] = r.p_value ? number_or_null(*r.p_value) : ordered_json(nullptr);
    doc["ci"] = ordered_json::array({r.ci_low, r.ci_high});
    doc["level"] = r.level;
    doc["degenerate"] = r.degenerate;
    if (r.tested) {
        doc["null_value"] = r.null_value;
        doc["alternative"] = std::string(to_string(r.alternative));
    }
    return doc.dump(2);
}

std::string constants_to_json(const NamedConstants& c,
                              const std::vector<RateCertificate>& certificates) {
    ordered_json doc;
    doc["measure"] = c.kind.to_string();
    ordered_json values = ordered_json::object();
    for (const auto& [name, value] : c.entries()) values[name] = value;
    doc["constants"] = values;
    if (c.kind.family == Family::renyi && c.tsallis_a && c.tsallis_v) {
        // V_R_k * S_k^2 == V_T_k and A_R_k * S_k == A_T_k, with S_k the
        // direction's S_alpha.
        const std::array<double, 4> s{*c.s_alpha_pq, *c.s_alpha_pq, *c.s_alpha_qp,
                                      *c.s_alpha_qp};
        double worst_v = 0.0, worst_a = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            worst_v = std::max(worst_v, std::abs(c.v[k] * s[k] * s[k] - (*c.tsallis_v)[k]));
            worst_a = std::max(worst_a, std::abs(c.a[k] * s[k] - (*c.tsallis_a)[k]));
        }
        doc["check_V_R_equals_V_T_over_S2"] = worst_v <= 1e-12;
        doc["check_A_R_equals_A_T_over_S"] = worst_a <= 1e-12;
    }
    ordered_json certs = ordered_json::array();
    for (const auto& cert : certificates) {
        certs.push_back({{"mode", std::string(to_string(cert.mode))},
                         {"bound", cert.bound},
                         {"statement", cert.statement}});
    }
    doc["as_bounds"] = certs;
    return doc.dump(2);
}

}  // namespace phidiv::io
