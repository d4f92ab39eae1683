#include "latlab/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "latlab/asymptotics.hpp"
#include "latlab/errors.hpp"

namespace latlab::pipelines {

using lattice::gauge_equal;

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(15) << v;
    return os.str();
}

std::string format_real(long double v) {
    std::ostringstream os;
    os << std::setprecision(18) << v;
    return os.str();
}

void Report::add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
void Report::add(const std::string& key, double value) { add(key, format_real(value)); }
void Report::add(const std::string& key, long double value) { add(key, format_real(value)); }
void Report::add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
void Report::add(const std::string& key, long value) { add(key, std::to_string(value)); }
void Report::add(const std::string& key, int value) { add(key, std::to_string(value)); }
void Report::add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

void Report::append(const Report& other, const std::string& prefix) {
    for (const auto& [k, v] : other.entries_) entries_.emplace_back(prefix + k, v);
}

std::optional<std::string> Report::get(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

void Report::write_kv(std::ostream& os) const {
    for (const auto& [k, v] : entries_) os << k << "=" << v << "\n";
}

void Report::write_table(std::ostream& os) const {
    std::size_t width = 0;
    for (const auto& e : entries_) width = std::max(width, e.first.size());
    for (const auto& [k, v] : entries_) os << std::left << std::setw(static_cast<int>(width) + 2) << k << v << "\n";
}

void Report::write_json(std::ostream& os) const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : entries_) j[k] = v;
    os << j.dump(2) << "\n";
}

Report code_report(const codes::BinaryCode& code) {
    Report r;
    r.add("code", code.name().empty() ? std::string("(unnamed)") : code.name());
    r.add("n", code.n());
    r.add("k", code.k());
    r.add("d", code.d());
    r.add("A_d", code.a_d());
    return r;
}

Report kissing_report(const lattice::LatticeD& lat, const lattice::KissingReport& rep) {
    Report r = code_report(lat.code);
    r.add("t", rep.t);
    r.add("scale", rep.scale);
    r.add("nu", rep.nu);
    r.add("N_s", rep.count);
    r.add("method", lattice::method_name(rep.method));
    r.add("elapsed_ms", rep.elapsed_ms);
    r.add("rescale", rep.rescale);
    r.add("integral_count", rep.integral_count);
    r.add("fractional_count", rep.fractional_count);
    r.add("subgroup_size", rep.subgroup_size);
    r.add("vectors_examined", rep.vectors_examined);
    r.add("anomalies", rep.anomalies);
    r.add("minimal_anomalies", rep.minimal_anomalies);
    if (!rep.first_anomaly.empty()) r.add("first_anomaly", lattice::format_vector(rep.first_anomaly, rep.t));
    r.add("min_G_fractional", rep.min_g_fractional);
    r.add("min_G_integral", rep.min_g_integral);
    if (rep.method == lattice::Method::CosetExact) {
        r.add("rerank_checks", rep.rerank_checks);
        r.add("rerank_violations", rep.rerank_violations);
    }
    if (rep.method == lattice::Method::BruteForce) r.add("oracle_complete", rep.oracle_complete);
    r.add("witnesses_stored", static_cast<std::uint64_t>(rep.witnesses.size()));
    r.add("witnesses_truncated", rep.witnesses_truncated);
    return r;
}

CodewordCheck check_codewords(const lattice::LatticeD& lat, const bodies::BodySpec& spec, double nu, double scale) {
    CodewordCheck c;
    c.min_gauge = std::numeric_limits<double>::infinity();
    for (codes::BitVec w : lat.code.min_weight_set()) {
        for (int sign : {1, -1}) {
            lattice::Numerators u(static_cast<std::size_t>(lat.n()), 0);
            for (int i = 0; i < lat.n(); ++i) u[static_cast<std::size_t>(i)] = sign * static_cast<long>((w >> i) & 1U);
            const double g = bodies::gauge(spec, lattice::to_real(u, lat.t, scale));
            ++c.vectors;
            if (gauge_equal(g, nu)) ++c.at_minimum;
            c.max_gauge = std::max(c.max_gauge, g);
            c.min_gauge = std::min(c.min_gauge, g);
        }
    }
    return c;
}

// ---------------------------------------------------------------------------

Theorem3Result verify_theorem3(codes::BinaryCode code, double p, const lattice::KissingOptions& options) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidParameter("p must be >= 1");
    codes::min_distance(code);
    Theorem3Result r;
    r.p = p;
    const int d = code.d();
    r.t = lattice::choose_t_lp(p, d);
    r.t_clamped = lattice::robust_ceil(std::pow(static_cast<double>(d), 1.0 / p)) < 2;
    r.nu_codewords = std::pow(static_cast<double>(d), 1.0 / p) / r.t;
    r.lattice = lattice::build_lattice(std::move(code), r.t);
    const bodies::BodySpec spec = bodies::lp_body(r.lattice.n(), p);
    r.kissing = lattice::kissing_count(r.lattice, spec, options);
    r.codewords = check_codewords(r.lattice, spec, r.kissing.nu, options.scale);
    r.codewords_minimal = r.codewords.at_minimum == r.codewords.vectors;
    r.count_ok = r.kissing.count >= static_cast<std::uint64_t>(r.lattice.code.a_d());
    if (!r.kissing.witnesses.empty()) {
        const auto x = lattice::to_real(r.kissing.witnesses.front(), r.t, options.scale * r.kissing.rescale);
        r.rescaled_unit = gauge_equal(bodies::gauge(spec, x), 1.0);
    }
    r.pass = r.codewords_minimal && r.count_ok && r.rescaled_unit;
    return r;
}

Report Theorem3Result::report() const {
    Report rep;
    rep.add("theorem", "3");
    rep.add("p", p);
    rep.append(kissing_report(lattice, kissing));
    rep.add("t_clamped", t_clamped);
    rep.add("nu_codewords", nu_codewords);
    rep.add("codeword_vectors", codewords.vectors);
    rep.add("codeword_vectors_at_min", codewords.at_minimum);
    rep.add("codewords_minimal", codewords_minimal);
    rep.add("two_A_d", static_cast<std::uint64_t>(2 * lattice.code.a_d()));
    rep.add("count_ge_A_d", count_ok);
    rep.add("rescaled_unit", rescaled_unit);
    rep.add("verdict", pass ? "PASS" : "FAIL");
    return rep;
}

// ---------------------------------------------------------------------------

Theorem4Plan plan_theorem4(const bodies::BodySpec& spec, const codes::BinaryCode& code, PivotPolicy policy) {
    bodies::validate(spec);
    if (!code.has_distance()) throw std::logic_error("plan_theorem4 needs a code with computed distance");
    Theorem4Plan plan;
    plan.n = spec.n;
    plan.d = code.d();

    std::vector<int> family_of(spec.blocks.size());
    for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
        const auto& g = spec.blocks[j].gauge;
        auto it = std::find(plan.families.begin(), plan.families.end(), g);
        family_of[j] = static_cast<int>(it - plan.families.begin());
        if (it == plan.families.end()) plan.families.push_back(g);
        plan.k = std::max(plan.k, g.arity());
        const double e = spec.blocks[j].exponent;
        if (std::find(plan.exponents.begin(), plan.exponents.end(), e) == plan.exponents.end()) {
            plan.exponents.push_back(e);
        }
    }
    std::sort(plan.exponents.begin(), plan.exponents.end());
    const int m = static_cast<int>(plan.families.size());
    const int l = static_cast<int>(plan.exponents.size());

    std::vector<int> family_tally(static_cast<std::size_t>(m), 0);
    for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
        family_tally[static_cast<std::size_t>(family_of[j])] += static_cast<int>(spec.blocks[j].coords.size());
    }
    plan.j0 = static_cast<int>(std::max_element(family_tally.begin(), family_tally.end()) - family_tally.begin());
    plan.tally_T0 = family_tally[static_cast<std::size_t>(plan.j0)];

    int best_tally = -1;
    for (double e : plan.exponents) {
        int tally = 0;
        for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
            if (family_of[j] == plan.j0 && spec.blocks[j].exponent == e) {
                tally += static_cast<int>(spec.blocks[j].coords.size());
            }
        }
        if (tally > best_tally) {
            best_tally = tally;
            plan.p_j1 = e;
        }
    }
    plan.tally_T1 = best_tally;
    plan.pigeonhole_T0 = static_cast<long>(plan.tally_T0) * m >= plan.n;
    plan.pigeonhole_T1 = static_cast<long>(plan.tally_T1) * l >= plan.tally_T0;

    // Qualifying blocks in order of their first coordinate.
    std::vector<std::size_t> qualifying;
    for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
        if (family_of[j] == plan.j0 && spec.blocks[j].exponent == plan.p_j1) qualifying.push_back(j);
    }
    std::sort(qualifying.begin(), qualifying.end(), [&](std::size_t a, std::size_t b) {
        return *std::min_element(spec.blocks[a].coords.begin(), spec.blocks[a].coords.end()) <
               *std::min_element(spec.blocks[b].coords.begin(), spec.blocks[b].coords.end());
    });
    plan.qualifying_blocks = static_cast<int>(qualifying.size());
    if (plan.qualifying_blocks < code.n()) {
        throw InsufficientBlocks("plan needs " + std::to_string(code.n()) + " blocks of family " +
                                 std::to_string(plan.j0) + " with exponent " + format_real(plan.p_j1) +
                                 ", found " + std::to_string(plan.qualifying_blocks));
    }

    const bodies::BlockGauge& f = plan.families[static_cast<std::size_t>(plan.j0)];
    if (policy == PivotPolicy::First) {
        const auto mono = bodies::check_monotonicity(f, 0);
        if (!mono.pass) {
            throw MonotonicityError("first coordinate of " + f.describe() + " fails monotonicity", mono.witness);
        }
        plan.pivot = 0;
    } else {
        plan.pivot = bodies::default_pivot(f);
        if (plan.pivot < 0) {
            throw MonotonicityError("no coordinate of " + f.describe() + " passes monotonicity",
                                    bodies::check_monotonicity(f, 0).witness);
        }
    }

    for (int i = 0; i < code.n(); ++i) {
        const std::size_t j = qualifying[static_cast<std::size_t>(i)];
        plan.T1_blocks.push_back(static_cast<int>(j));
        plan.positions.push_back(spec.blocks[j].coords[static_cast<std::size_t>(plan.pivot)]);
    }
    plan.unit_value = f.unit_value(plan.pivot);
    plan.nu_n = std::pow(plan.unit_value, plan.p_j1) * plan.d;
    plan.rho = bodies::min_integer_gauge(f).rho;
    const long t = std::max(lattice::robust_ceil(plan.nu_n), lattice::robust_ceil(1.0 / plan.rho));
    plan.t_clamped = t < 2;
    plan.t = static_cast<int>(std::max(2L, t));
    plan.mu = 1.0 / (static_cast<double>(plan.k) * l * m);
    plan.rate_c = asymptotics::constant_c(plan.mu);
    return plan;
}

Report Theorem4Plan::report() const {
    Report r;
    r.add("families", static_cast<int>(families.size()));
    r.add("exponents", static_cast<int>(exponents.size()));
    r.add("max_arity", k);
    r.add("j0", j0);
    r.add("j0_gauge", families[static_cast<std::size_t>(j0)].describe());
    r.add("T0_coords", tally_T0);
    r.add("p_j1", p_j1);
    r.add("T1_coords", tally_T1);
    r.add("qualifying_blocks", qualifying_blocks);
    std::string blocks, pos;
    for (std::size_t i = 0; i < T1_blocks.size(); ++i) {
        blocks += (i ? "," : "") + std::to_string(T1_blocks[i] + 1);
        pos += (i ? "," : "") + std::to_string(positions[i] + 1);
    }
    r.add("T1_blocks", blocks);
    r.add("positions", pos);
    r.add("pivot", pivot + 1);
    r.add("nu_n", nu_n);
    r.add("rho", rho);
    r.add("t", t);
    r.add("t_clamped", t_clamped);
    r.add("mu", mu);
    r.add("rate_c", rate_c);
    r.add("pigeonhole_T0", pigeonhole_T0);
    r.add("pigeonhole_T1", pigeonhole_T1);
    r.add("tie_break", "lowest family index, then smallest exponent");
    return r;
}

Theorem4Result verify_theorem4(const bodies::BodySpec& spec, const codes::BinaryCode& code_in,
                               const lattice::KissingOptions& options, bool with_oracle, PivotPolicy policy) {
    codes::BinaryCode code = code_in;
    codes::min_distance(code);
    Theorem4Result r;
    r.plan = plan_theorem4(spec, code, policy);
    r.lattice = lattice::build_lattice(codes::lengthen(code, r.plan.positions, spec.n), r.plan.t);
    r.kissing = lattice::kissing_count(r.lattice, spec, options);
    r.codewords = check_codewords(r.lattice, spec, r.kissing.nu, options.scale);
    r.codewords_minimal = r.codewords.at_minimum == r.codewords.vectors;
    r.count_ok = r.kissing.count >= static_cast<std::uint64_t>(code.a_d());

    const double tp = std::pow(static_cast<double>(r.plan.t), r.plan.p_j1);
    if (!std::isnan(r.kissing.min_g_fractional) && options.scale == 1.0) {
        r.g_fractional_ok = r.kissing.min_g_fractional >= r.plan.nu_n / tp * (1.0 - 1e-9);
    }
    if (!std::isnan(r.kissing.min_g_integral) && options.scale == 1.0) {
        r.g_integral_ok = r.kissing.min_g_integral >= std::pow(r.plan.rho, r.plan.p_j1) * (1.0 - 1e-9);
    }
    if (with_oracle) {
        lattice::KissingOptions o = options;
        o.method = lattice::Method::BruteForce;
        r.oracle = lattice::kissing_count(r.lattice, spec, o);
        r.oracle_agrees = r.oracle->oracle_complete && r.oracle->count == r.kissing.count &&
                          gauge_equal(r.oracle->nu, r.kissing.nu) && r.oracle->witnesses == r.kissing.witnesses;
    }
    r.pass = r.codewords_minimal && r.count_ok && r.oracle_agrees.value_or(true);
    return r;
}

Report Theorem4Result::report() const {
    Report rep;
    rep.add("theorem", "4");
    rep.append(plan.report(), "plan.");
    rep.append(kissing_report(lattice, kissing));
    rep.add("nu_codewords_G", plan.nu_n / std::pow(static_cast<double>(plan.t), plan.p_j1));
    rep.add("codeword_vectors", codewords.vectors);
    rep.add("codeword_vectors_at_min", codewords.at_minimum);
    rep.add("codewords_minimal", codewords_minimal);
    rep.add("count_ge_A_d", count_ok);
    rep.add("G_fractional_bound", g_fractional_ok ? (*g_fractional_ok ? "holds" : "violated") : "not computed");
    rep.add("G_integral_bound", g_integral_ok ? (*g_integral_ok ? "holds" : "violated") : "not computed");
    if (oracle) {
        rep.add("oracle.nu", oracle->nu);
        rep.add("oracle.N_s", oracle->count);
        rep.add("oracle.complete", oracle->oracle_complete);
        rep.add("oracle_agrees", *oracle_agrees);
    }
    rep.add("verdict", pass ? "PASS" : "FAIL");
    return rep;
}

}  // namespace latlab::pipelines
