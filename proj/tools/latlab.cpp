#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "latlab/asymptotics.hpp"
#include "latlab/errors.hpp"
#include "latlab/pipelines.hpp"

using namespace latlab;
using pipelines::Report;

namespace {

enum Exit { kPass = 0, kFail = 1, kError = 2 };

struct OutputOptions {
    std::string format = "both";
};

void add_format_option(CLI::App* app, OutputOptions& out) {
    app->add_option("--format", out.format, "table, kv, json or both (table then kv)")
        ->check(CLI::IsMember({"table", "kv", "json", "both"}));
}

void emit(const Report& r, const OutputOptions& out) {
    if (out.format == "table" || out.format == "both") r.write_table(std::cout);
    if (out.format == "both") std::cout << "---\n";
    if (out.format == "kv" || out.format == "both") r.write_kv(std::cout);
    if (out.format == "json") r.write_json(std::cout);
}

struct KissingArgs {
    std::string method = "auto";
    double scale = 1.0;
    int threads = 0;
    int box = 1;
    std::size_t witness_cap = lattice::kWitnessCap;
    int show = 0;
};

void add_kissing_options(CLI::App* app, KissingArgs& k) {
    app->add_option("--method", k.method, "auto, coset-exact, basis-enum or brute-force");
    app->add_option("--scale", k.scale, "count on scale * lattice")->check(CLI::PositiveNumber);
    app->add_option("--threads", k.threads, "worker threads (0: all cores)");
    app->add_option("--box", k.box, "brute-force box radius")->check(CLI::PositiveNumber);
    app->add_option("--witness-cap", k.witness_cap, "witnesses kept in the report");
    app->add_option("--show", k.show, "print this many witnesses");
}

lattice::KissingOptions to_options(const KissingArgs& k) {
    lattice::KissingOptions o;
    o.method = lattice::parse_method(k.method);
    o.scale = k.scale;
    o.threads = k.threads;
    o.oracle_box = k.box;
    o.witness_cap = k.witness_cap;
    return o;
}

void show_witnesses(const lattice::KissingReport& rep, int count) {
    for (int i = 0; i < count && i < static_cast<int>(rep.witnesses.size()); ++i) {
        std::cout << "witness " << lattice::format_vector(rep.witnesses[static_cast<std::size_t>(i)], rep.t) << "\n";
    }
}

std::vector<long> parse_list(const std::string& s) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const long v = std::stol(item, &used);
        if (used != item.size()) throw FormatError("bad integer '" + item + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latlab: lattices from binary codes, kissing counts under superball gauges"};
    app.require_subcommand(1);
    OutputOptions out;
    int exit_code = kPass;

    // code info
    auto* code_cmd = app.add_subcommand("code", "binary codes")->require_subcommand(1);
    auto* code_info = code_cmd->add_subcommand("info", "parameters and weight distribution");
    std::string code_name;
    code_info->add_option("--code", code_name, "named code or generator file")->required();
    add_format_option(code_info, out);
    code_info->callback([&]() {
        auto code = codes::analyzed(codes::load_code(code_name));
        Report r = pipelines::code_report(code);
        const auto dist = codes::weight_distribution(code);
        std::string wd;
        for (std::size_t w = 0; w < dist.size(); ++w) {
            if (dist[w] == 0) continue;
            if (!wd.empty()) wd += " ";
            wd += std::to_string(w) + ":" + std::to_string(dist[w]);
        }
        r.add("weights", wd);
        std::string rows;
        for (auto row : code.rows()) rows += (rows.empty() ? "" : " ") + codes::to_string(row, code.n());
        r.add("generator", rows);
        emit(r, out);
    });

    // body check
    auto* body_cmd = app.add_subcommand("body", "generalized superballs")->require_subcommand(1);
    auto* body_check = body_cmd->add_subcommand("check", "validate a body file");
    std::string body_path;
    body_check->add_option("file", body_path, "body DSL file")->required();
    add_format_option(body_check, out);
    body_check->callback([&]() {
        const auto spec = bodies::read_body_file(body_path);
        Report r;
        r.add("n", spec.n);
        r.add("blocks", static_cast<int>(spec.blocks.size()));
        for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
            const auto& b = spec.blocks[j];
            const std::string key = "block." + std::to_string(j + 1);
            std::string coords;
            for (int c : b.coords) coords += (coords.empty() ? "" : ",") + std::to_string(c + 1);
            r.add(key + ".coords", "[" + coords + "]");
            r.add(key + ".gauge", b.gauge.describe());
            r.add(key + ".p", b.exponent);
            std::string mono;
            for (int i = 0; i < b.gauge.arity(); ++i) {
                mono += (mono.empty() ? "" : ",") + std::string(bodies::check_monotonicity(b.gauge, i).pass ? "ok" : "fail");
            }
            r.add(key + ".monotone", mono);
            r.add(key + ".rho", bodies::min_integer_gauge(b.gauge).rho);
        }
        emit(r, out);
    });

    // lattice kissing
    auto* lat_cmd = app.add_subcommand("lattice", "lattices Z^n + (1/t)<C_d>")->require_subcommand(1);
    auto* kissing = lat_cmd->add_subcommand("kissing", "minimal vectors under a body gauge");
    std::string t_arg = "auto", body_arg = "lp:2";
    bool force_oracle = false;
    KissingArgs kargs;
    kissing->add_option("--code", code_name, "named code or generator file")->required();
    kissing->add_option("--t", t_arg, "denominator, or auto (l_p bodies: smallest t with t^p >= d)");
    kissing->add_option("--body", body_arg, "body file or lp:<p>");
    kissing->add_flag("--oracle", force_oracle, "brute-force enumeration");
    add_kissing_options(kissing, kargs);
    add_format_option(kissing, out);
    kissing->callback([&]() {
        auto code = codes::analyzed(codes::load_code(code_name));
        const auto spec = bodies::load_body(body_arg, code.n());
        int t = 0;
        bool clamped = false;
        if (t_arg == "auto") {
            if (!spec.is_separable_lp() || spec.blocks.front().gauge.unit_value(0) != 1.0) {
                throw InvalidParameter("--t auto needs an unweighted l_p body");
            }
            const double p = spec.blocks.front().exponent;
            t = lattice::choose_t_lp(p, code.d());
            clamped = lattice::robust_ceil(std::pow(static_cast<double>(code.d()), 1.0 / p)) < 2;
        } else {
            t = std::stoi(t_arg);
        }
        auto opts = to_options(kargs);
        if (force_oracle) opts.method = lattice::Method::BruteForce;
        const auto lat = lattice::build_lattice(std::move(code), t);
        const auto rep = lattice::kissing_count(lat, spec, opts);
        Report r = pipelines::kissing_report(lat, rep);
        if (clamped) r.add("t_clamped", true);
        emit(r, out);
        show_witnesses(rep, kargs.show);
    });

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "exponent constants and rate table")->require_subcommand(1);
    auto* table_cmd = bounds_cmd->add_subcommand("table", "n^2+n versus 2^{Mn} and 1.015^n");
    std::string n_list = "8,24,64,256,4096";
    table_cmd->add_option("--n", n_list, "comma-separated dimensions");
    add_format_option(table_cmd, out);
    table_cmd->callback([&]() {
        const auto table = asymptotics::bound_table(parse_list(n_list));
        if (out.format == "table" || out.format == "both") {
            std::cout << std::setw(8) << "n" << std::setw(16) << "n^2+n" << std::setw(14) << "log2 2^{Mn}"
                      << std::setw(16) << "2^{Mn}" << std::setw(16) << "1.015^n" << "\n";
            for (const auto& row : table.rows) {
                std::cout << std::setw(8) << row.n << std::setw(16) << static_cast<double>(row.swinnerton_dyer)
                          << std::setw(14) << std::setprecision(6) << static_cast<double>(row.rate_log2)
                          << std::setw(16) << static_cast<double>(row.rate) << std::setw(16)
                          << static_cast<double>(row.rate_1015) << "\n";
            }
            std::cout << "crossover " << table.crossover << "\n";
            std::cout << "constant factors (Omega, kappa, h): unspecified\n";
        }
        if (out.format != "table") {
            if (out.format == "both") std::cout << "---\n";
            Report r;
            for (const auto& row : table.rows) {
                const std::string key = "n" + std::to_string(row.n);
                r.add(key + ".sd", row.swinnerton_dyer);
                r.add(key + ".rate_log2", row.rate_log2);
                r.add(key + ".rate", row.rate);
                r.add(key + ".rate_1015", row.rate_1015);
                r.add(key + ".rate_exceeds_sd", row.rate_exceeds_sd);
            }
            r.add("crossover", table.crossover);
            r.add("constant_factors", "unspecified");
            if (out.format == "json") {
                r.write_json(std::cout);
            } else {
                r.write_kv(std::cout);
            }
        }
    });
    auto* const_cmd = bounds_cmd->add_subcommand("constants", "M, c and the exponent maximizer");
    add_format_option(const_cmd, out);
    const_cmd->callback([&]() {
        Report r;
        const long double m = asymptotics::constant_M();
        r.add("M", m);
        r.add("c", asymptotics::constant_c(1.0L));
        r.add("c_closed_form", asymptotics::constant_M_closed_form_power());
        r.add("identity_error", std::fabs(std::exp2(m) - asymptotics::constant_M_closed_form_power()));
        const auto e = asymptotics::exponent_E(0.5L);
        r.add("E(0.5)", e.value);
        r.add("E(0.5).argmax_s", e.argmax);
        r.add("E_3(0.5)", asymptotics::exponent_Es(3, 0.5L));
        const auto z = asymptotics::zeros_of_Es(3);
        r.add("E_3.delta1", z.delta1);
        r.add("E_3.delta2", z.delta2);
        r.add("crossover", asymptotics::rate_crossover());
        emit(r, out);
    });

    // theorem3 verify
    auto* t3 = app.add_subcommand("theorem3", "l_p construction")->require_subcommand(1);
    auto* t3v = t3->add_subcommand("verify", "check the minimal set of Z^n + (1/t)<C_d> under l_p");
    double p = 2.0;
    t3v->add_option("--code", code_name, "named code or generator file")->required();
    t3v->add_option("--p", p, "exponent p >= 1")->required();
    add_kissing_options(t3v, kargs);
    add_format_option(t3v, out);
    t3v->callback([&]() {
        const auto res = pipelines::verify_theorem3(codes::load_code(code_name), p, to_options(kargs));
        emit(res.report(), out);
        show_witnesses(res.kissing, kargs.show);
        exit_code = res.pass ? kPass : kFail;
    });

    // theorem4 verify
    auto* t4 = app.add_subcommand("theorem4", "generalized superball construction")->require_subcommand(1);
    auto* t4v = t4->add_subcommand("verify", "plan, embed and count under a body gauge");
    std::string pivot = "least";
    bool with_oracle = false;
    t4v->add_option("--code", code_name, "named code or generator file")->required();
    t4v->add_option("--body", body_arg, "body DSL file")->required();
    t4v->add_option("--pivot", pivot, "least (least f(e_i) among monotone coordinates) or first")
        ->check(CLI::IsMember({"least", "first"}));
    t4v->add_flag("--oracle", with_oracle, "also run the brute-force oracle and compare");
    add_kissing_options(t4v, kargs);
    add_format_option(t4v, out);
    t4v->callback([&]() {
        const auto spec = bodies::load_body(body_arg, 0);
        const auto policy = pivot == "first" ? pipelines::PivotPolicy::First : pipelines::PivotPolicy::LeastUnitValue;
        const auto res = pipelines::verify_theorem4(spec, codes::load_code(code_name), to_options(kargs), with_oracle, policy);
        emit(res.report(), out);
        show_witnesses(res.kissing, kargs.show);
        exit_code = res.pass ? kPass : kFail;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return exit_code;
}
