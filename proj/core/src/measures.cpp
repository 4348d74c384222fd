#include "phidiv/measures.hpp"

#include <charconv>
#include <cmath>

namespace phidiv {

AlphaParam::AlphaParam(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha) || !(alpha > 0.0)) {
        throw Error("alpha must be a positive number");
    }
    if (std::abs(alpha - 1.0) < kMinDistanceFromOne) {
        throw Error("alpha must differ from 1; use 'kl' for the alpha -> 1 limit");
    }
}

namespace {

bool needs_alpha(Family f) { return f == Family::tsallis || f == Family::renyi; }

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_alpha(std::string_view text) {
    double value = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw Error("invalid alpha '" + std::string(text) + "'");
    }
    return value;
}

// exp(a * (log x - log y)) == (x/y)^a
double ratio_pow(double x, double y, double a) { return std::exp(a * (std::log(x) - std::log(y))); }

void require_positive(const MeasureKind& kind, const ProbabilityVector& p,
                      const ProbabilityVector& q) {
    require_same_support(p.support(), q.support());
    if (kind.tolerates_zeros()) return;
    if (auto j = p.first_zero()) throw BdViolation(p.support()->label(*j), *j, "first argument");
    if (auto j = q.first_zero()) throw BdViolation(q.support()->label(*j), *j, "second argument");
}

double one_direction(const MeasureKind& kind, const ProbabilityVector& p,
                     const ProbabilityVector& q) {
    double s = 0.0;
    switch (kind.family) {
        case Family::l2:
            for (std::size_t j = 0; j < p.size(); ++j) s += (p[j] - q[j]) * (p[j] - q[j]);
            return s;
        case Family::kl:
            for (std::size_t j = 0; j < p.size(); ++j) s += p[j] * std::log(p[j] / q[j]);
            return s;
        case Family::tsallis: {
            const double a = kind.alpha->value();
            return (s_alpha(p, q, *kind.alpha) - 1.0) / (a - 1.0);
        }
        case Family::renyi: {
            const double a = kind.alpha->value();
            return std::log(s_alpha(p, q, *kind.alpha)) / (a - 1.0);
        }
    }
    return s;
}

const char* family_key(Family f) {
    switch (f) {
        case Family::l2: return "L2";
        case Family::kl: return "KL";
        case Family::tsallis: return "T_alpha";
        case Family::renyi: return "R_alpha";
    }
    return "";
}

// Closed-form gradients for the four directions, unscaled by any S.
std::array<std::vector<double>, 4> closed_form_gradients(Family family, double alpha,
                                                         const ProbabilityVector& p,
                                                         const ProbabilityVector& q) {
    const std::size_t r = p.size();
    std::array<std::vector<double>, 4> g;
    for (auto& v : g) v.resize(r);
    for (std::size_t j = 0; j < r; ++j) {
        const double pj = p[j];
        const double qj = q[j];
        switch (family) {
            case Family::l2:
                g[0][j] = 2.0 * (pj - qj);
                g[1][j] = -2.0 * (pj - qj);
                g[2][j] = 2.0 * (qj - pj);
                g[3][j] = -2.0 * (qj - pj);
                break;
            case Family::kl:
                g[0][j] = 1.0 + std::log(pj / qj);
                g[1][j] = -pj / qj;
                g[2][j] = 1.0 + std::log(qj / pj);
                g[3][j] = -qj / pj;
                break;
            case Family::tsallis:
            case Family::renyi: {
                const double c = alpha / (alpha - 1.0);
                g[0][j] = c * ratio_pow(pj, qj, alpha - 1.0);
                g[1][j] = -ratio_pow(pj, qj, alpha);
                g[2][j] = c * ratio_pow(qj, pj, alpha - 1.0);
                g[3][j] = -ratio_pow(qj, pj, alpha);
                break;
            }
        }
    }
    return g;
}

double abs_sum(const std::vector<double>& g) {
    double s = 0.0;
    for (double x : g) s += std::abs(x);
    return s;
}

}  // namespace

double MeasureKind::alpha_value() const {
    if (!alpha) throw Error("measure '" + to_string() + "' has no alpha parameter");
    return alpha->value();
}

MeasureKind MeasureKind::parse(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    bool sym = false;
    if (parts.size() > 1 && parts.back() == "sym") {
        sym = true;
        parts.pop_back();
    }
    const std::string_view head = parts.front();
    if (head == "kl" || head == "l2") {
        if (parts.size() != 1) throw Error("measure '" + std::string(text) + "' takes no alpha");
        return head == "kl" ? kl(sym) : l2(sym);
    }
    if (head == "tsallis" || head == "renyi") {
        if (parts.size() != 2) {
            throw Error("measure '" + std::string(head) + "' requires an alpha, e.g. " +
                        std::string(head) + ":0.5");
        }
        const double a = parse_alpha(parts[1]);
        return head == "tsallis" ? tsallis(a, sym) : renyi(a, sym);
    }
    throw Error("unknown measure '" + std::string(text) +
                "' (expected l2, kl, tsallis:<alpha> or renyi:<alpha>, optionally with :sym)");
}

std::string MeasureKind::to_string() const {
    std::string out;
    switch (family) {
        case Family::l2: out = "l2"; break;
        case Family::kl: out = "kl"; break;
        case Family::tsallis: out = "tsallis:" + format_double(alpha_value()); break;
        case Family::renyi: out = "renyi:" + format_double(alpha_value()); break;
    }
    if (symmetrized) out += ":sym";
    return out;
}

double s_alpha(const ProbabilityVector& p, const ProbabilityVector& q, AlphaParam alpha) {
    require_positive(MeasureKind{Family::tsallis, alpha, false}, p, q);
    const double a = alpha.value();
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        s += std::exp(a * std::log(p[j]) + (1.0 - a) * std::log(q[j]));
    }
    return s;
}

double divergence(const MeasureKind& kind, const ProbabilityVector& p,
                  const ProbabilityVector& q) {
    if (needs_alpha(kind.family) && !kind.alpha) throw Error("measure requires an alpha");
    require_positive(kind, p, q);
    if (!kind.symmetrized) return one_direction(kind, p, q);
    return 0.5 * (one_direction(kind, p, q) + one_direction(kind, q, p));
}

PhiSpec phi_spec_for(const MeasureKind& kind) {
    PhiSpec spec;
    spec.name = MeasureKind{kind.family, kind.alpha, false}.to_string();
    switch (kind.family) {
        case Family::l2:
            spec.phi = [](double x, double y) { return (x - y) * (x - y); };
            spec.d1 = [](double x, double y) { return 2.0 * (x - y); };
            spec.d2 = [](double x, double y) { return -2.0 * (x - y); };
            spec.requires_positive = false;
            break;
        case Family::kl:
            spec.phi = [](double x, double y) { return x * std::log(x / y); };
            spec.d1 = [](double x, double y) { return 1.0 + std::log(x / y); };
            spec.d2 = [](double x, double y) { return -x / y; };
            break;
        case Family::tsallis:
        case Family::renyi: {
            const double a = kind.alpha_value();
            spec.phi = [a](double x, double y) {
                return std::exp(a * std::log(x) + (1.0 - a) * std::log(y));
            };
            spec.d1 = [a](double x, double y) { return a * ratio_pow(x, y, a - 1.0); };
            spec.d2 = [a](double x, double y) { return (1.0 - a) * ratio_pow(x, y, a); };
            if (kind.family == Family::tsallis) {
                spec.transform = [a](double s) { return (s - 1.0) / (a - 1.0); };
                spec.transform_derivative = [a](double) { return 1.0 / (a - 1.0); };
            } else {
                spec.transform = [a](double s) { return std::log(s) / (a - 1.0); };
                spec.transform_derivative = [a](double s) { return 1.0 / ((a - 1.0) * s); };
            }
            break;
        }
    }
    return spec;
}

NamedConstants named_constants(const MeasureKind& kind, const ProbabilityVector& p,
                               const ProbabilityVector& q) {
    if (needs_alpha(kind.family) && !kind.alpha) throw Error("measure requires an alpha");
    require_positive(kind, p, q);
    if (!kind.tolerates_zeros()) {
        // The reverse-direction constants need both vectors positive as well.
        require_positive(kind, q, p);
    }
    const double alpha = kind.alpha ? kind.alpha->value() : 0.0;
    const auto g = closed_form_gradients(kind.family, alpha, p, q);

    NamedConstants c;
    c.kind = kind;
    // Constants 1 and 4 vary the p-sample, 2 and 3 the q-sample.
    const std::array<const ProbabilityVector*, 4> weights{&p, &q, &q, &p};
    for (std::size_t k = 0; k < 4; ++k) {
        c.v[k] = asymptotic_variance(*weights[k], g[k]);
        c.a[k] = abs_sum(g[k]);
    }
    if (kind.family == Family::tsallis || kind.family == Family::renyi) {
        c.s_alpha_pq = s_alpha(p, q, *kind.alpha);
        c.s_alpha_qp = s_alpha(q, p, *kind.alpha);
    }
    if (kind.family == Family::renyi) {
        c.tsallis_a = c.a;
        c.tsallis_v = c.v;
        const std::array<double, 4> s{*c.s_alpha_pq, *c.s_alpha_pq, *c.s_alpha_qp,
                                      *c.s_alpha_qp};
        for (std::size_t k = 0; k < 4; ++k) {
            c.a[k] /= s[k];
            c.v[k] /= s[k] * s[k];
        }
    }
    c.a_sym_1 = 0.5 * (c.a[0] + c.a[3]);
    c.a_sym_2 = 0.5 * (c.a[1] + c.a[2]);
    c.v_1_4 = c.v[0] + c.v[3];
    c.v_2_3 = c.v[1] + c.v[2];
    return c;
}

std::vector<std::pair<std::string, double>> NamedConstants::entries() const {
    const std::string key = family_key(kind.family);
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t k = 0; k < 4; ++k) {
        out.emplace_back("A_" + key + "_" + std::to_string(k + 1), a[k]);
    }
    for (std::size_t k = 0; k < 4; ++k) {
        out.emplace_back("V_" + key + "_" + std::to_string(k + 1), v[k]);
    }
    out.emplace_back("A_" + key + "_1_sym", a_sym_1);
    out.emplace_back("A_" + key + "_2_sym", a_sym_2);
    out.emplace_back("V_" + key + "_1_4", v_1_4);
    out.emplace_back("V_" + key + "_2_3", v_2_3);
    if (s_alpha_pq) out.emplace_back("S_alpha", *s_alpha_pq);
    if (s_alpha_qp) out.emplace_back("S_alpha_reverse", *s_alpha_qp);
    if (tsallis_a && tsallis_v) {
        for (std::size_t k = 0; k < 4; ++k) {
            out.emplace_back("A_T_alpha_" + std::to_string(k + 1), (*tsallis_a)[k]);
        }
        for (std::size_t k = 0; k < 4; ++k) {
            out.emplace_back("V_T_alpha_" + std::to_string(k + 1), (*tsallis_v)[k]);
        }
    }
    return out;
}

}  // namespace phidiv
