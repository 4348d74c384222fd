#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "phidiv/montecarlo.hpp"

namespace phidiv {

using nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ordered_json num(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

double num_from(const ordered_json& j) { return j.is_null() ? kNaN : j.get<double>(); }

// Shortest round-trip representation; identical bytes for identical doubles.
std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::vector<std::pair<std::string, double>> cell_statistics(const CellSummary& c) {
    return {
        {"replications", static_cast<double>(c.replications)},
        {"failed", static_cast<double>(c.failed)},
        {"true_value", c.true_value},
        {"true_variance_p", c.true_variance_p},
        {"true_variance_q", c.true_variance_q},
        {"mean_estimate", c.mean_estimate},
        {"sd_estimate", c.sd_estimate},
        {"bias", c.bias},
        {"mean_abs_error", c.mean_abs_error},
        {"standardized_mean", c.standardized_mean},
        {"standardized_sd", c.standardized_sd},
        {"ks_statistic", c.ks_statistic},
        {"ks_p_value", c.ks_p_value},
        {"ci_coverage", c.ci_coverage},
        {"as_bound", c.as_bound},
        {"as_ratio_median", c.as_ratio_median},
        {"as_ratio_max", c.as_ratio_max},
        {"as_exceedance_fraction", c.as_exceedance_fraction},
        {"as_excluded", static_cast<double>(c.as_excluded)},
    };
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
    if (text == "json") return ReportFormat::json;
    if (text == "csv") return ReportFormat::csv;
    throw Error("unknown report format '" + std::string(text) + "' (expected json or csv)");
}

const std::vector<std::string>& csv_statistic_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : cell_statistics(CellSummary{})) out.push_back(name);
        return out;
    }();
    return names;
}

std::string report_to_json(const SimulationReport& r, bool include_draws) {
    ordered_json doc;
    doc["mode"] = std::string(to_string(r.mode));
    doc["master_seed"] = r.master_seed;
    doc["replications"] = r.replications;
    doc["ci_level"] = r.ci_level;
    doc["as_slack"] = r.as_slack;
    doc["support"] = r.labels;
    doc["p"] = r.p;
    doc["q"] = r.q;
    doc["sizes"] = r.sizes;
    ordered_json cells = ordered_json::array();
    for (const CellSummary& c : r.cells) {
        ordered_json j;
        j["measure"] = c.measure;
        j["size"] = c.size;
        j["replications"] = c.replications;
        j["failed"] = c.failed;
        j["true_value"] = num(c.true_value);
        j["true_variance_p"] = num(c.true_variance_p);
        j["true_variance_q"] = num(c.true_variance_q);
        j["mean_estimate"] = num(c.mean_estimate);
        j["sd_estimate"] = num(c.sd_estimate);
        j["bias"] = num(c.bias);
        j["mean_abs_error"] = num(c.mean_abs_error);
        j["standardized_available"] = c.standardized_available;
        j["standardized_mean"] = num(c.standardized_mean);
        j["standardized_sd"] = num(c.standardized_sd);
        j["ks_statistic"] = num(c.ks_statistic);
        j["ks_p_value"] = num(c.ks_p_value);
        j["ci_coverage"] = num(c.ci_coverage);
        j["as_bound"] = num(c.as_bound);
        j["as_ratio_median"] = num(c.as_ratio_median);
        j["as_ratio_max"] = num(c.as_ratio_max);
        j["as_exceedance_fraction"] = num(c.as_exceedance_fraction);
        j["as_excluded"] = c.as_excluded;
        if (include_draws) j["standardized_draws"] = c.standardized_draws;
        cells.push_back(std::move(j));
    }
    doc["cells"] = std::move(cells);
    return doc.dump(2) + "\n";
}

SimulationReport report_from_json(const std::string& text) {
    SimulationReport r;
    try {
        const ordered_json doc = ordered_json::parse(text);
        r.mode = parse_mode(doc.at("mode").get<std::string>());
        r.master_seed = doc.at("master_seed").get<std::uint64_t>();
        r.replications = doc.at("replications").get<std::size_t>();
        r.ci_level = doc.at("ci_level").get<double>();
        r.as_slack = doc.at("as_slack").get<double>();
        r.labels = doc.at("support").get<std::vector<std::string>>();
        r.p = doc.at("p").get<std::vector<double>>();
        r.q = doc.at("q").get<std::vector<double>>();
        r.sizes = doc.at("sizes").get<std::vector<std::size_t>>();
        for (const auto& j : doc.at("cells")) {
            CellSummary c;
            c.measure = j.at("measure").get<std::string>();
            c.size = j.at("size").get<std::size_t>();
            c.replications = j.at("replications").get<std::size_t>();
            c.failed = j.at("failed").get<std::size_t>();
            c.true_value = num_from(j.at("true_value"));
            c.true_variance_p = num_from(j.at("true_variance_p"));
            c.true_variance_q = num_from(j.at("true_variance_q"));
            c.mean_estimate = num_from(j.at("mean_estimate"));
            c.sd_estimate = num_from(j.at("sd_estimate"));
            c.bias = num_from(j.at("bias"));
            c.mean_abs_error = num_from(j.at("mean_abs_error"));
            c.standardized_available = j.at("standardized_available").get<bool>();
            c.standardized_mean = num_from(j.at("standardized_mean"));
            c.standardized_sd = num_from(j.at("standardized_sd"));
            c.ks_statistic = num_from(j.at("ks_statistic"));
            c.ks_p_value = num_from(j.at("ks_p_value"));
            c.ci_coverage = num_from(j.at("ci_coverage"));
            c.as_bound = num_from(j.at("as_bound"));
            c.as_ratio_median = num_from(j.at("as_ratio_median"));
            c.as_ratio_max = num_from(j.at("as_ratio_max"));
            c.as_exceedance_fraction = num_from(j.at("as_exceedance_fraction"));
            c.as_excluded = j.at("as_excluded").get<std::size_t>();
            if (j.contains("standardized_draws")) {
                c.standardized_draws = j.at("standardized_draws").get<std::vector<double>>();
            }
            r.cells.push_back(std::move(c));
        }
    } catch (const ordered_json::exception& e) {
        throw Error(std::string("invalid simulation report: ") + e.what());
    }
    return r;
}

std::string report_to_csv(const SimulationReport& r) {
    std::string out = "measure,size,statistic,value\n";
    for (const CellSummary& c : r.cells) {
        for (const auto& [name, value] : cell_statistics(c)) {
            out += c.measure + ',' + std::to_string(c.size) + ',' + name + ',' +
                   format_double(value) + '\n';
        }
    }
    return out;
}

void emit(const SimulationReport& report, ReportFormat format, std::ostream& out,
          bool include_draws) {
    out << (format == ReportFormat::json ? report_to_json(report, include_draws)
                                         : report_to_csv(report));
    if (!out) throw Error("failed to write simulation report");
}

void emit(const SimulationReport& report, ReportFormat format, const std::string& path,
          bool include_draws) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    emit(report, format, out, include_draws);
}

void write_draws(const CellSummary& cell, std::ostream& out) {
    for (double z : cell.standardized_draws) out << format_double(z) << '\n';
    if (!out) throw Error("failed to write standardized draws");
}

}  // namespace phidiv
