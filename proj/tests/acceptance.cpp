// Acceptance runner: one PASS/FAIL line per criterion.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "latlab/asymptotics.hpp"
#include "latlab/bodies.hpp"
#include "latlab/codes.hpp"
#include "latlab/errors.hpp"
#include "latlab/lattice.hpp"
#include "latlab/pipelines.hpp"

using namespace latlab;

namespace {

const std::string kData = LATLAB_DATA_DIR;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Vectors gathered by criteria 3-6 for the support check.
struct AnomalyLedger {
    std::uint64_t runs = 0;
    std::uint64_t examined_anomalies = 0;
    std::uint64_t minimal_anomalies = 0;
    std::uint64_t decomposed = 0;
    std::uint64_t decomposition_anomalies = 0;
    std::vector<std::string> first;

    void record(const std::string& label, const lattice::LatticeD& lat, const lattice::KissingReport& rep) {
        ++runs;
        examined_anomalies += rep.anomalies;
        minimal_anomalies += rep.minimal_anomalies;
        std::uint64_t thrown = 0;
        for (const auto& u : rep.witnesses) {
            ++decomposed;
            try {
                lattice::decompose(u, lat);
            } catch (const DecompositionAnomaly&) {
                ++thrown;
            }
        }
        decomposition_anomalies += thrown;
        if ((rep.anomalies > 0 || thrown > 0) && first.size() < 6) {
            std::ostringstream os;
            os << label << " anomalies=" << rep.anomalies << " minimal=" << rep.minimal_anomalies
               << " decompose_throws=" << thrown;
            first.push_back(os.str());
        }
    }
};

AnomalyLedger g_ledger;

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;
    void fail(const std::string& why) {
        pass = false;
        if (notes.size() < 12) notes.push_back(why);
    }
    void note(const std::string& s) { notes.push_back(s); }
};

void emit(int id, const std::string& title, const Outcome& out, double elapsed, double budget) {
    const bool in_time = elapsed <= budget;
    std::cout << "CRITERION " << id << " " << ((out.pass && in_time) ? "PASS" : "FAIL") << " " << title << " ("
              << elapsed << " s, budget " << budget << " s)\n";
    for (const auto& n : out.notes) std::cout << "    " << n << "\n";
    if (!in_time) std::cout << "    runtime over budget\n";
}

// Exhaustive span enumeration over the generator rows.
std::pair<int, std::uint64_t> enumerate_min_weight(const codes::BinaryCode& code) {
    const auto& rows = code.rows();
    const std::uint64_t total = std::uint64_t{1} << rows.size();
    int d = 1 << 30;
    std::uint64_t count = 0;
    for (std::uint64_t mask = 1; mask < total; ++mask) {
        codes::BitVec c = 0;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if ((mask >> i) & 1U) c ^= rows[i];
        const int w = std::popcount(c);
        if (w < d) {
            d = w;
            count = 0;
        }
        if (w == d) ++count;
    }
    return {d, count};
}

// ---------------------------------------------------------------- criterion 1

Outcome criterion1() {
    Outcome out;
    const long double M = asymptotics::constant_M();
    const long double M_ref = (1.0L / 7.0L - std::log2(64.0L / 63.0L)) / 64.0L;
    if (std::fabs(M - 0.001877L) > 1e-6L) out.fail("M outside 0.001877 +- 1e-6");
    if (std::fabs(M - M_ref) > 1e-18L) out.fail("M disagrees with direct evaluation");
    const long double c1 = asymptotics::constant_c(1.0L);
    if (!(c1 > 1.0013L && c1 < 1.0014L)) out.fail("c(1) outside (1.0013, 1.0014)");
    const long double lhs = std::pow(2.0L, M);
    const long double rhs = std::pow(63.0L * std::pow(2.0L, -41.0L / 7.0L), 1.0L / 64.0L);
    const long double gap = std::fabs(lhs - rhs);
    if (gap > 1e-15L) out.fail("2^M product identity gap above 1e-15");
    std::ostringstream os;
    os.precision(12);
    os << "M=" << static_cast<double>(M) << " c(1)=" << static_cast<double>(c1)
       << " identity_gap=" << static_cast<double>(gap);
    out.note(os.str());
    return out;
}

// ---------------------------------------------------------------- criterion 2

Outcome criterion2() {
    Outcome out;
    for (int i = 1; i <= 19; ++i) {
        const long double delta = 0.05L * i;
        const auto e = asymptotics::exponent_E(delta, 40);
        if (!(e.value > 0.0L)) out.fail("E not positive at delta=" + std::to_string(static_cast<double>(delta)));
    }
    const auto half = asymptotics::exponent_E(0.5L, 40);
    if (half.argmax != 3) out.fail("argmax at 0.5 is s=" + std::to_string(half.argmax));
    const auto z = asymptotics::zeros_of_Es(3);
    if (!(z.delta1 < 0.5L && 0.5L < z.delta2 && z.delta2 < 0.984375L)) out.fail("zeros of E_3 out of order");
    const long double r1 = std::fabs(asymptotics::exponent_Es(3, z.delta1));
    const long double r2 = std::fabs(asymptotics::exponent_Es(3, z.delta2));
    if (r1 > 1e-9L || r2 > 1e-9L) out.fail("residual of E_3 above 1e-9 at a root");
    std::ostringstream os;
    os.precision(12);
    os << "argmax(0.5)=" << half.argmax << " delta1=" << static_cast<double>(z.delta1)
       << " delta2=" << static_cast<double>(z.delta2) << " residuals=" << static_cast<double>(r1) << ","
       << static_cast<double>(r2);
    out.note(os.str());
    return out;
}

// ------------------------------------------------------------ criteria 3 and 8

struct MatrixCell {
    std::string code;
    int t;
    std::string body_label;
    bodies::BodySpec body;
};

std::vector<MatrixCell> small_matrix() {
    std::vector<MatrixCell> cells;
    for (std::string name : {"repetition(4)", "parity(8)", "hamming8"}) {
        const int n = codes::named_code(name).n();
        for (int t : {2, 3, 4}) {
            cells.push_back({name, t, "l1", bodies::lp_body(n, 1.0)});
            cells.push_back({name, t, "l2", bodies::lp_body(n, 2.0)});
            cells.push_back({name, t, "l3", bodies::lp_body(n, 3.0)});
            if (n == 8)
                cells.push_back({name, t, "mixed8", bodies::read_body_file(kData + "/mixed8.body")});
            else
                cells.push_back({name, t, "mixed4", bodies::read_body_file(kData + "/mixed4.body")});
        }
    }
    return cells;
}

std::string cell_label(const MatrixCell& c) {
    return c.code + " t=" + std::to_string(c.t) + " " + c.body_label;
}

Outcome criterion3() {
    Outcome out;
    std::size_t agreed = 0;
    const auto cells = small_matrix();
    for (const auto& cell : cells) {
        const auto lat = lattice::build_lattice(codes::named_code(cell.code), cell.t);
        lattice::KissingOptions exact;
        exact.method = lattice::Method::CosetExact;
        exact.witness_cap = 1'000'000;
        lattice::KissingOptions brute = exact;
        brute.method = lattice::Method::BruteForce;
        const auto a = lattice::kissing_count(lat, cell.body, exact);
        const auto b = lattice::kissing_count(lat, cell.body, brute);
        g_ledger.record(cell_label(cell) + " coset-exact", lat, a);
        g_ledger.record(cell_label(cell) + " brute-force", lat, b);
        bool ok = true;
        if (!b.oracle_complete) ok = false, out.fail(cell_label(cell) + ": brute-force box incomplete");
        if (a.witnesses_truncated || b.witnesses_truncated) ok = false, out.fail(cell_label(cell) + ": truncated");
        if (!lattice::gauge_equal(a.nu, b.nu)) ok = false, out.fail(cell_label(cell) + ": nu differs");
        if (a.count != b.count) ok = false, out.fail(cell_label(cell) + ": N_s differs");
        if (a.witnesses != b.witnesses) ok = false, out.fail(cell_label(cell) + ": witness sets differ");
        if (ok) ++agreed;
    }
    out.note(std::to_string(agreed) + "/" + std::to_string(cells.size()) + " lattices agree");
    return out;
}

Outcome criterion8() {
    Outcome out;
    std::size_t agreed = 0;
    const auto cells = small_matrix();
    for (const auto& cell : cells) {
        const auto lat = lattice::build_lattice(codes::named_code(cell.code), cell.t);
        lattice::KissingOptions o;
        o.method = lattice::Method::CosetExact;
        const auto base = lattice::kissing_count(lat, cell.body, o);
        bool ok = true;
        for (double s : {0.5, 2.0, 1.0 / base.nu}) {
            o.scale = s;
            const auto r = lattice::kissing_count(lat, cell.body, o);
            if (r.count != base.count) {
                ok = false;
                out.fail(cell_label(cell) + ": N_s changes at scale " + std::to_string(s));
            }
        }
        if (ok) ++agreed;
    }
    out.note(std::to_string(agreed) + "/" + std::to_string(cells.size()) + " lattices invariant under scales 1/2, 2, 1/nu");
    return out;
}

// ---------------------------------------------------------------- criterion 4

Outcome criterion4() {
    Outcome out;
    const auto lat = lattice::build_lattice(codes::hamming8(), 2);
    const auto spec = bodies::lp_body(8, 2.0);
    lattice::KissingOptions o;
    o.method = lattice::Method::BruteForce;
    const auto rep = lattice::kissing_count(lat, spec, o);
    g_ledger.record("E8 brute-force", lat, rep);
    o.scale = rep.rescale;
    const auto unit = lattice::kissing_count(lat, spec, o);
    if (!rep.oracle_complete) out.fail("brute-force box incomplete");
    if (rep.count != 240) out.fail("N_s=" + std::to_string(rep.count));
    if (unit.count != 240) out.fail("rescaled N_s=" + std::to_string(unit.count));
    if (std::fabs(unit.nu - 1.0) > 1e-12) out.fail("rescaled nu=" + std::to_string(unit.nu));
    out.note("N_s=" + std::to_string(rep.count) + " nu_rescaled=" + pipelines::format_real(unit.nu));
    return out;
}

// ---------------------------------------------------------------- criterion 5

Outcome criterion5() {
    Outcome out;
    struct Case {
        std::string code;
        std::uint64_t expected_a_d;
    };
    int passed = 0;
    int total = 0;
    for (const Case& c : {Case{"hamming8", 14}, Case{"rm(1,4)", 30}, Case{"golay24", 759}}) {
        const auto code = codes::named_code(c.code);
        const auto [d, a_d] = enumerate_min_weight(code);
        if (a_d != c.expected_a_d) out.fail(c.code + ": enumerated A_d=" + std::to_string(a_d));
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            ++total;
            const auto r = pipelines::verify_theorem3(code, p);
            const std::string label = c.code + " p=" + pipelines::format_real(p) + " t=" + std::to_string(r.t);
            g_ledger.record("theorem3 " + label, r.lattice, r.kissing);
            if (r.lattice.code.d() != d || static_cast<std::uint64_t>(r.lattice.code.a_d()) != a_d)
                out.fail(label + ": library (d, A_d) disagrees with enumeration");
            const bool ok = r.pass && r.codewords_minimal && r.kissing.count >= a_d;
            if (ok) {
                ++passed;
            } else {
                out.fail(label + ": nu=" + pipelines::format_real(r.kissing.nu) + " expected " +
                         pipelines::format_real(r.nu_codewords) + ", codewords at minimum " +
                         std::to_string(r.codewords.at_minimum) + "/" + std::to_string(r.codewords.vectors) +
                         ", N_s=" + std::to_string(r.kissing.count));
            }
        }
    }
    out.note(std::to_string(passed) + "/" + std::to_string(total) + " cases pass");
    return out;
}

// ---------------------------------------------------------------- criterion 6

Outcome criterion6() {
    Outcome out;
    struct Case {
        std::string body;
        std::string code;
        bool oracle;
    };
    for (const Case& c : {Case{"pairs16_l2.body", "hamming8", false}, Case{"pairs12_l2_max4.body", "hamming8", false},
                          Case{"pairs4_l2.body", "repetition(4)", true}}) {
        const auto spec = bodies::read_body_file(kData + "/" + c.body);
        const auto r = pipelines::verify_theorem4(spec, codes::named_code(c.code), {}, c.oracle);
        const std::string label = c.body + " with " + c.code;
        g_ledger.record("theorem4 " + label, r.lattice, r.kissing);
        if (r.oracle) g_ledger.record("theorem4 oracle " + label, r.lattice, *r.oracle);
        const auto& pl = r.plan;
        const int m = static_cast<int>(pl.families.size());
        const int l = static_cast<int>(pl.exponents.size());
        const bool t0 = static_cast<long>(pl.tally_T0) * m >= pl.n;
        const bool t1 = static_cast<long>(pl.tally_T1) * l >= pl.tally_T0;
        if (!r.pass) out.fail(label + ": verdict FAIL");
        if (!t0 || !pl.pigeonhole_T0) out.fail(label + ": |T0| m < n");
        if (!t1 || !pl.pigeonhole_T1) out.fail(label + ": |T1| l < |T0|");
        if (r.g_fractional_ok == false || r.g_integral_ok == false) out.fail(label + ": G bound violated");
        if (c.oracle) {
            if (!r.oracle || !r.oracle_agrees.value_or(false) || r.oracle->count != r.kissing.count)
                out.fail(label + ": oracle disagreement");
        }
        std::ostringstream os;
        os << label << ": t=" << pl.t << " nu=" << pipelines::format_real(r.kissing.nu) << " N_s=" << r.kissing.count
           << " |T0|=" << pl.tally_T0 << " |T1|=" << pl.tally_T1 << " m=" << m << " l=" << l;
        if (r.oracle) os << " oracle_N_s=" << r.oracle->count;
        out.note(os.str());
    }
    return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome criterion7() {
    Outcome out;
    if (g_ledger.runs == 0) {
        out.fail("criteria 3-6 did not run");
        return out;
    }
    if (g_ledger.examined_anomalies > 0)
        out.fail("fractional parts with support below d: " + std::to_string(g_ledger.examined_anomalies) +
                 " among examined cosets/vectors, " + std::to_string(g_ledger.minimal_anomalies) +
                 " among minimal vectors");
    if (g_ledger.decomposition_anomalies > 0)
        out.fail("decomposition anomalies: " + std::to_string(g_ledger.decomposition_anomalies) + " of " +
                 std::to_string(g_ledger.decomposed) + " witnesses");
    for (const auto& s : g_ledger.first) out.note(s);
    out.note(std::to_string(g_ledger.runs) + " runs, " + std::to_string(g_ledger.decomposed) + " witnesses decomposed");
    return out;
}

// ---------------------------------------------------------------- criterion 9

Outcome criterion9() {
    Outcome out;
    const long double M = (1.0L / 7.0L - std::log2(64.0L / 63.0L)) / 64.0L;
    long scan = 1;
    while (!(std::exp2(M * scan) > static_cast<long double>(scan) * scan + scan)) ++scan;
    const long crossover = asymptotics::rate_crossover();
    if (crossover != scan) out.fail("crossover " + std::to_string(crossover) + " vs scan " + std::to_string(scan));
    const auto table = asymptotics::bound_table({scan - 1, scan, scan + 1});
    if (table.crossover != scan) out.fail("bound_table crossover " + std::to_string(table.crossover));
    if (table.rows.size() != 3 || table.rows[0].rate_exceeds_sd || !table.rows[1].rate_exceeds_sd ||
        !table.rows[2].rate_exceeds_sd)
        out.fail("bound_table rows inconsistent with the crossover");
    out.note("asymptotic growth claims need n -> infinity and are not reproduced; substituted by the property "
             "checks above and this crossover report");
    out.note("least n with 2^(Mn) > n^2 + n: " + std::to_string(crossover));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latlab acceptance criteria"};
    std::vector<int> only;
    app.add_option("--only", only, "criteria to run (default: all)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    struct Entry {
        int id;
        std::string title;
        double budget;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> entries = {
        {1, "constants", 1.0, criterion1},
        {2, "exponent landscape", 1.0, criterion2},
        {3, "oracle equivalence", 120.0, criterion3},
        {4, "E8 coincidence", 10.0, criterion4},
        {5, "l_p construction suite", 300.0, criterion5},
        {6, "generalized superball suite", 300.0, criterion6},
        {7, "fractional support invariant", 420.0, criterion7},
        {8, "rescaling invariance", 120.0, criterion8},
        {9, "crossover report", 1.0, criterion9},
    };
    auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
    // criterion 7 audits the vectors of criteria 3-6
    std::vector<int> run_ids;
    for (const auto& e : entries) {
        if (wanted(e.id) || (wanted(7) && e.id >= 3 && e.id <= 6)) run_ids.push_back(e.id);
    }

    bool all = true;
    double audited = 0.0;
    for (const auto& e : entries) {
        if (std::find(run_ids.begin(), run_ids.end(), e.id) == run_ids.end()) continue;
        const auto start = Clock::now();
        Outcome out;
        try {
            out = e.run();
        } catch (const std::exception& ex) {
            out.fail(std::string("error: ") + ex.what());
        }
        double elapsed = seconds_since(start);
        if (e.id >= 3 && e.id <= 6) audited += elapsed;
        if (e.id == 7) elapsed += audited;
        if (!wanted(e.id)) continue;
        emit(e.id, e.title, out, elapsed, e.budget);
        all = all && out.pass && elapsed <= e.budget;
    }
    return all ? 0 : 1;
}
