#include "cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include <CLI11.hpp>

#include "phidiv/inference.hpp"
#include "phidiv/io.hpp"
#include "phidiv/measures.hpp"
#include "phidiv/montecarlo.hpp"

namespace phidiv::cli {

namespace {

// Raised for invocations that parse but make no sense together.
class UsageError : public Error {
public:
    using Error::Error;
};

struct DegenerateFailure : Error {
    using Error::Error;
};

struct InputOptions {
    std::string measure;
    std::string mode;
    std::string p_counts, q_counts;
    std::string p_samples, q_samples;
    std::string p_dist, q_dist;
    std::string support;
    std::optional<double> smooth;
    std::string sym_variance = "exact";
    double level = 0.95;
    std::string output;
};

struct TestOptions {
    double null_value = 0.0;
    std::string alternative = "two-sided";
    bool require_p_value = false;
};

struct SimulateOptions {
    std::string p_dist, q_dist;
    std::vector<std::string> measures;
    std::string mode = "two-sample";
    std::string sizes;
    std::size_t replications = 2000;
    std::optional<std::uint64_t> seed;
    double level = 0.95;
    double slack = 0.05;
    bool paper_defaults = false;
    std::string format = "json";
    std::string output;
    std::string dump_draws;
    bool include_draws = false;
    unsigned threads = 0;
    std::optional<double> smooth;
    std::string sym_variance = "exact";
};

struct ConstantsOptions {
    std::string p_dist, q_dist, measure;
    std::string output;
};

void add_input_options(CLI::App* cmd, InputOptions& o) {
    cmd->add_option("--measure", o.measure, "l2 | kl | tsallis:<alpha> | renyi:<alpha>, optional :sym")
        ->required();
    cmd->add_option("--mode", o.mode, "one-sample-p | one-sample-q | two-sample (inferred if omitted)");
    cmd->add_option("--p-counts", o.p_counts, "count table CSV (label,count) for the p sample");
    cmd->add_option("--q-counts", o.q_counts, "count table CSV (label,count) for the q sample");
    cmd->add_option("--p-samples", o.p_samples, "sample file, one label per line, for p");
    cmd->add_option("--q-samples", o.q_samples, "sample file, one label per line, for q");
    cmd->add_option("--p-dist", o.p_dist, "known p as distribution JSON");
    cmd->add_option("--q-dist", o.q_dist, "known q as distribution JSON");
    cmd->add_option("--support", o.support, "comma-separated label order for sample files");
    cmd->add_option("--smooth", o.smooth, "additive smoothing lambda (default: strict, no smoothing)");
    cmd->add_option("--sym-variance", o.sym_variance, "symmetrized variance: exact | paper");
    cmd->add_option("--level", o.level, "confidence level in (0,1)");
    cmd->add_option("--output", o.output, "write the document here instead of stdout");
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

SymmetrizedVarianceMode parse_sym_variance(const std::string& text) {
    if (text == "exact") return SymmetrizedVarianceMode::exact;
    if (text == "paper") return SymmetrizedVarianceMode::paper;
    throw UsageError("unknown --sym-variance '" + text + "' (expected exact or paper)");
}

void require_level(double level) {
    if (!(level > 0.0 && level < 1.0)) throw UsageError("--level must lie strictly between 0 and 1");
}

void write_document(const std::string& doc, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << doc;
        if (doc.empty() || doc.back() != '\n') out << '\n';
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io::InputError("cannot write '" + path + "'");
    f << doc;
    if (doc.empty() || doc.back() != '\n') f << '\n';
}

// Resolves files into an estimation request over one label order.
EstimateRequest build_request(const InputOptions& o) {
    const bool p_sampled = !o.p_counts.empty() || !o.p_samples.empty();
    const bool q_sampled = !o.q_counts.empty() || !o.q_samples.empty();
    if (!o.p_counts.empty() && !o.p_samples.empty()) {
        throw UsageError("give either --p-counts or --p-samples, not both");
    }
    if (!o.q_counts.empty() && !o.q_samples.empty()) {
        throw UsageError("give either --q-counts or --q-samples, not both");
    }
    if (p_sampled && !o.p_dist.empty()) throw UsageError("p is both sampled and known");
    if (q_sampled && !o.q_dist.empty()) throw UsageError("q is both sampled and known");

    Mode mode;
    if (!o.mode.empty()) {
        mode = parse_mode(o.mode);
    } else if (p_sampled && q_sampled) {
        mode = Mode::two_sample;
    } else if (p_sampled) {
        mode = Mode::one_sample_p;
    } else if (q_sampled) {
        mode = Mode::one_sample_q;
    } else {
        throw UsageError("no sample given; use --p-counts/--p-samples and/or --q-counts/--q-samples");
    }
    if (samples_p(mode) != p_sampled || samples_q(mode) != q_sampled) {
        throw UsageError("inputs do not match --mode " + std::string(to_string(mode)));
    }
    if (!samples_p(mode) && o.p_dist.empty()) throw UsageError("mode needs --p-dist");
    if (!samples_q(mode) && o.q_dist.empty()) throw UsageError("mode needs --q-dist");

    std::optional<ProbabilityVector> p_dist, q_dist;
    std::optional<CountTable> p_counts, q_counts;
    std::vector<std::string> p_labels, q_labels;
    if (!o.p_dist.empty()) p_dist = io::read_distribution_json(o.p_dist);
    if (!o.q_dist.empty()) q_dist = io::read_distribution_json(o.q_dist);
    if (!o.p_counts.empty()) p_counts = io::read_count_csv(o.p_counts);
    if (!o.q_counts.empty()) q_counts = io::read_count_csv(o.q_counts);
    if (!o.p_samples.empty()) p_labels = io::read_sample_labels(o.p_samples);
    if (!o.q_samples.empty()) q_labels = io::read_sample_labels(o.q_samples);

    SupportPtr support;
    if (!o.support.empty()) support = make_support(split_commas(o.support));
    else if (p_dist) support = p_dist->support();
    else if (q_dist) support = q_dist->support();
    else if (p_counts) support = p_counts->support();
    else if (q_counts) support = q_counts->support();
    else {
        // Sample files only: labels in order of first appearance.
        std::vector<std::string> order;
        std::unordered_set<std::string> seen;
        for (const auto* labels : {&p_labels, &q_labels}) {
            for (const auto& l : *labels) {
                if (seen.insert(l).second) order.push_back(l);
            }
        }
        support = make_support(std::move(order));
    }

    EstimateRequest req;
    req.mode = mode;
    req.measure = MeasureKind::parse(o.measure);
    req.symmetrized_variance = parse_sym_variance(o.sym_variance);
    if (o.smooth) req.smoothing = SmoothingPolicy::smooth(*o.smooth);
    if (p_dist) req.p_known = io::align_pmf(*p_dist, support);
    if (q_dist) req.q_known = io::align_pmf(*q_dist, support);
    if (p_counts) req.p_counts = io::align_counts(*p_counts, support);
    if (q_counts) req.q_counts = io::align_counts(*q_counts, support);
    if (!o.p_samples.empty()) req.p_counts = count_observations(SampleBatch::from_labels(support, p_labels));
    if (!o.q_samples.empty()) req.q_counts = count_observations(SampleBatch::from_labels(support, q_labels));
    return req;
}

int cmd_estimate(const InputOptions& o, std::ostream& out) {
    require_level(o.level);
    const DivergenceEstimate est = estimate(build_request(o));
    write_document(io::result_to_json(summarize(est, o.level)), o.output, out);
    return kOk;
}

int cmd_test(const InputOptions& o, const TestOptions& t, std::ostream& out) {
    require_level(o.level);
    const Alternative alt = parse_alternative(t.alternative);
    const DivergenceEstimate est = estimate(build_request(o));
    const TestResult result = wald_test(est, t.null_value, alt, o.level);
    write_document(io::result_to_json(result), o.output, out);
    if (result.degenerate && t.require_p_value) {
        throw DegenerateFailure(
            "plug-in variance is below the floor; no normal p-value exists for this sample");
    }
    return kOk;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> sizes;
    for (const auto& item : split_commas(text)) {
        std::size_t v = 0;
        auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc() || res.ptr != item.data() + item.size() || v == 0) {
            throw UsageError("invalid sample size '" + item + "' in --sizes");
        }
        sizes.push_back(v);
    }
    if (sizes.empty()) throw UsageError("--sizes is empty");
    return sizes;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
    require_level(o.level);
    if (o.replications < 1) throw UsageError("--replications must be at least 1");
    const ReportFormat format = parse_report_format(o.format);

    std::optional<SimulationConfig> cfg;
    if (o.paper_defaults) {
        cfg = reference_config();
        if (!o.p_dist.empty() || !o.q_dist.empty()) {
            throw UsageError("--paper-defaults fixes p and q; drop --p-dist/--q-dist");
        }
    } else {
        if (o.p_dist.empty() || o.q_dist.empty()) {
            throw UsageError("simulate needs --p-dist and --q-dist (or --paper-defaults)");
        }
        const ProbabilityVector p = io::read_distribution_json(o.p_dist);
        const ProbabilityVector q = io::align_pmf(io::read_distribution_json(o.q_dist), p.support());
        cfg.emplace(p, q);
    }
    if (!o.measures.empty()) {
        cfg->measures.clear();
        for (const auto& m : o.measures) cfg->measures.push_back(MeasureKind::parse(m));
    }
    if (cfg->measures.empty()) throw UsageError("simulate needs at least one --measure");
    cfg->mode = parse_mode(o.mode);
    if (!o.sizes.empty()) cfg->sizes = parse_sizes(o.sizes);
    cfg->replications = o.replications;
    if (o.seed) {
        cfg->master_seed = *o.seed;
    } else {
        cfg->master_seed = 1;
        err << "warning: no --seed given; using seed 1\n";
    }
    cfg->ci_level = o.level;
    cfg->as_slack = o.slack;
    cfg->threads = o.threads;
    if (o.smooth) cfg->smoothing = SmoothingPolicy::smooth(*o.smooth);
    cfg->symmetrized_variance = parse_sym_variance(o.sym_variance);
    cfg->keep_draws = o.include_draws || !o.dump_draws.empty();
    cfg->validate();

    const SimulationReport report = run(*cfg);
    std::ostringstream doc;
    emit(report, format, doc, o.include_draws);
    write_document(doc.str(), o.output, out);

    if (!o.dump_draws.empty()) {
        std::filesystem::create_directories(o.dump_draws);
        for (const CellSummary& c : report.cells) {
            if (!c.standardized_available) continue;
            std::string name = c.measure + "_" + std::to_string(c.size) + ".txt";
            for (char& ch : name) {
                if (ch == ':') ch = '_';
            }
            std::ofstream f(std::filesystem::path(o.dump_draws) / name, std::ios::binary);
            if (!f) throw io::InputError("cannot write draws into '" + o.dump_draws + "'");
            write_draws(c, f);
        }
    }
    return kOk;
}

int cmd_constants(const ConstantsOptions& o, std::ostream& out) {
    const ProbabilityVector p = io::read_distribution_json(o.p_dist);
    const ProbabilityVector q = io::align_pmf(io::read_distribution_json(o.q_dist), p.support());
    const MeasureKind kind = MeasureKind::parse(o.measure);
    const NamedConstants constants = named_constants(kind, p, q);
    std::vector<RateCertificate> certs;
    for (Mode m : {Mode::one_sample_p, Mode::one_sample_q, Mode::two_sample}) {
        certs.push_back(as_rate_certificate(p, q, kind, m));
    }
    write_document(io::constants_to_json(constants, certs), o.output, out);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Plug-in estimation and inference for divergences between discrete distributions",
                 "phidiv"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand help for every subcommand");

    InputOptions est_opts;
    auto* estimate_cmd = app.add_subcommand("estimate", "Plug-in divergence estimate with standard error");
    add_input_options(estimate_cmd, est_opts);

    InputOptions test_in;
    TestOptions test_opts;
    auto* test_cmd = app.add_subcommand("test", "Wald test of the divergence against a null value");
    add_input_options(test_cmd, test_in);
    test_cmd->add_option("--null", test_opts.null_value, "null value of the divergence");
    test_cmd->add_option("--alt", test_opts.alternative, "two-sided | greater | less");
    test_cmd->add_flag("--require-p-value", test_opts.require_p_value,
                       "exit 4 when the variance is degenerate and no p-value exists");

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Seeded Monte Carlo study of the estimators");
    sim_cmd->add_option("--p-dist", sim.p_dist, "p as distribution JSON");
    sim_cmd->add_option("--q-dist", sim.q_dist, "q as distribution JSON");
    sim_cmd->add_option("--measure", sim.measures, "measure (repeatable)");
    sim_cmd->add_option("--mode", sim.mode, "one-sample-p | one-sample-q | two-sample");
    sim_cmd->add_option("--sizes", sim.sizes, "comma-separated increasing sample sizes");
    sim_cmd->add_option("--replications", sim.replications, "replications per (measure, size)");
    sim_cmd->add_option("--seed", sim.seed, "master seed");
    sim_cmd->add_option("--level", sim.level, "confidence level for coverage");
    sim_cmd->add_option("--slack", sim.slack, "relative slack on the almost-sure bound");
    sim_cmd->add_flag("--paper-defaults", sim.paper_defaults,
                      "reference setting: p=(0.4,0.25,0.35), q=(0.27,0.32,0.41) and its measures");
    sim_cmd->add_option("--format", sim.format, "json | csv");
    sim_cmd->add_option("--output", sim.output, "write the report here instead of stdout");
    sim_cmd->add_option("--dump-draws", sim.dump_draws,
                        "directory for standardized draws, one file per cell");
    sim_cmd->add_flag("--include-draws", sim.include_draws, "embed standardized draws in JSON");
    sim_cmd->add_option("--threads", sim.threads, "worker threads (0 = all cores)");
    sim_cmd->add_option("--smooth", sim.smooth, "additive smoothing lambda");
    sim_cmd->add_option("--sym-variance", sim.sym_variance, "exact | paper");

    ConstantsOptions consts;
    auto* const_cmd = app.add_subcommand("constants", "Named bound and variance constants");
    const_cmd->add_option("--p-dist", consts.p_dist, "p as distribution JSON")->required();
    const_cmd->add_option("--q-dist", consts.q_dist, "q as distribution JSON")->required();
    const_cmd->add_option("--measure", consts.measure, "measure")->required();
    const_cmd->add_option("--output", consts.output, "write the document here instead of stdout");

    std::vector<const char*> argv;
    argv.push_back("phidiv");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    try {
        if (estimate_cmd->parsed()) return cmd_estimate(est_opts, out);
        if (test_cmd->parsed()) return cmd_test(test_in, test_opts, out);
        if (sim_cmd->parsed()) return cmd_simulate(sim, out, err);
        if (const_cmd->parsed()) return cmd_constants(consts, out);
    } catch (const BdViolation& e) {
        err << "error: " << e.what() << '\n';
        return kBdViolation;
    } catch (const DegenerateFailure& e) {
        err << "error: " << e.what() << '\n';
        return kDegenerate;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

}  // namespace phidiv::cli
