#pragma once

// End-to-end checks of the l_p and generalized-superball lower-bound
// constructions, and flat report emission shared by the CLI and tests.

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "latlab/bodies.hpp"
#include "latlab/codes.hpp"
#include "latlab/lattice.hpp"

namespace latlab::pipelines {

// Ordered key/value document. Values are preformatted strings.
class Report {
public:
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, const char* value) { add(key, std::string(value)); }
    void add(const std::string& key, double value);
    void add(const std::string& key, long double value);
    void add(const std::string& key, std::uint64_t value);
    void add(const std::string& key, long value);
    void add(const std::string& key, int value);
    void add(const std::string& key, bool value);
    void append(const Report& other, const std::string& prefix = "");

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    std::optional<std::string> get(const std::string& key) const;

    // key=value lines
    void write_kv(std::ostream& os) const;
    // two aligned columns
    void write_table(std::ostream& os) const;
    // flat JSON object (all values as strings)
    void write_json(std::ostream& os) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_real(double v);
std::string format_real(long double v);

Report code_report(const codes::BinaryCode& code);
// Fields n, k, d, A_d, t, nu, N_s, method, elapsed_ms and the diagnostics.
Report kissing_report(const lattice::LatticeD& lat, const lattice::KissingReport& rep);

// Gauges of ±c/t for c in C_d, relative to the reported minimum.
struct CodewordCheck {
    std::uint64_t vectors = 0;    // 2 A_d
    std::uint64_t at_minimum = 0;
    double max_gauge = 0.0;
    double min_gauge = 0.0;
};
CodewordCheck check_codewords(const lattice::LatticeD& lat, const bodies::BodySpec& spec, double nu,
                              double scale = 1.0);

struct Theorem3Result {
    double p = 1.0;
    int t = 2;
    bool t_clamped = false;       // ceil(d^{1/p}) < 2
    double nu_codewords = 0.0;    // d^{1/p} / t
    lattice::LatticeD lattice;
    lattice::KissingReport kissing;
    CodewordCheck codewords;
    bool codewords_minimal = false;  // every ±c/t attains nu
    bool count_ok = false;           // N_s >= A_d
    bool rescaled_unit = false;      // nu^{-1} Λ has minimum gauge 1
    bool pass = false;
    Report report() const;
};

Theorem3Result verify_theorem3(codes::BinaryCode code, double p, const lattice::KissingOptions& options = {});

enum class PivotPolicy { LeastUnitValue, First };

struct Theorem4Plan {
    int n = 0;
    std::vector<bodies::BlockGauge> families;  // distinct gauges, first-appearance order
    std::vector<double> exponents;             // distinct exponents, ascending
    int k = 0;                                 // largest block arity
    int j0 = 0;                                // family index
    int tally_T0 = 0;                          // coordinates in family-j0 blocks
    double p_j1 = 1.0;                         // selected exponent
    int tally_T1 = 0;                          // coordinates in family-j0 blocks with exponent p_j1
    int qualifying_blocks = 0;
    std::vector<int> T1_blocks;                // the first code.n qualifying blocks
    int pivot = 0;                             // coordinate within each block
    std::vector<int> positions;                // embedding coordinates
    double unit_value = 0.0;                   // f_j0(e_pivot)
    int d = 0;
    double nu_n = 0.0;                         // f_j0(e_pivot)^{p_j1} d
    double rho = 0.0;
    int t = 2;
    bool t_clamped = false;
    double mu = 1.0;                           // 1/(k l m)
    long double rate_c = 1.0L;                 // 2^{M mu}
    bool pigeonhole_T0 = false;                // |T0| m >= n
    bool pigeonhole_T1 = false;                // |T1| l >= |T0|
    Report report() const;
};

Theorem4Plan plan_theorem4(const bodies::BodySpec& spec, const codes::BinaryCode& code,
                           PivotPolicy policy = PivotPolicy::LeastUnitValue);

struct Theorem4Result {
    Theorem4Plan plan;
    lattice::LatticeD lattice;
    lattice::KissingReport kissing;
    CodewordCheck codewords;
    bool codewords_minimal = false;
    bool count_ok = false;
    // G over fractional vectors >= nu_n / t^{p_j1}; G over nonzero integral
    // vectors >= rho^{p_j1}. Empty when the method does not compute G minima.
    std::optional<bool> g_fractional_ok;
    std::optional<bool> g_integral_ok;
    std::optional<lattice::KissingReport> oracle;  // brute force, when requested
    std::optional<bool> oracle_agrees;
    bool pass = false;
    Report report() const;
};

Theorem4Result verify_theorem4(const bodies::BodySpec& spec, const codes::BinaryCode& code,
                               const lattice::KissingOptions& options = {}, bool with_oracle = false,
                               PivotPolicy policy = PivotPolicy::LeastUnitValue);

}  // namespace latlab::pipelines
