#pragma once

// Lattices Z^n + (1/t)<C_d> built from the minimum-weight codewords of a
// binary code, and exact counting of their minimal vectors under a
// generalized-superball gauge.
//
// Lattice vectors are held as integer numerator vectors u = t*v. Three
// independent routes find the minimal vectors:
//   coset-exact  sweep of Λ/Z^n with a blockwise per-coset minimization
//   basis-enum   depth-first enumeration over a triangular basis of tΛ
//   brute-force  exhaustive box sweep with a dual-module membership test

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "latlab/bodies.hpp"
#include "latlab/codes.hpp"

namespace latlab::lattice {

using Numerators = std::vector<long>;

inline constexpr std::uint64_t kCosetGuard = std::uint64_t{1} << 24;
inline constexpr std::size_t kWitnessCap = 10000;
inline constexpr double kTieRel = 1e-9;

// |a - b| <= 1e-9 * max(1, a)
bool gauge_equal(double a, double b);

struct LatticeD {
    codes::BinaryCode code;  // weight caches filled
    int t = 2;
    int n() const { return code.n(); }
};

// Throws InvalidParameter for t < 2 or t > 255.
LatticeD build_lattice(codes::BinaryCode code, int t);

// Upper-triangular basis (Hermite form) of the numerator lattice
// tΛ = tZ^n + Z<C_d>. Row i has zeros before column i and a positive
// diagonal entry dividing t; entries right of the diagonal lie in [0, t).
struct NumeratorBasis {
    int n = 0;
    int t = 0;
    std::vector<std::vector<long>> rows;
    // |Λ/Z^n| = t^n / prod(diagonal), as a double (may exceed 2^64).
    double subgroup_size() const;
    // log2 of the same.
    double subgroup_log2() const;
    bool contains(const Numerators& u) const;
};

NumeratorBasis numerator_basis(const LatticeD& lat);

// Λ/Z^n as residue vectors in {0..t-1}^n.
class CosetSubgroup {
public:
    int t() const { return t_; }
    int n() const { return n_; }
    std::size_t size() const { return size_; }
    // Residues of rep i (i = 0 is the zero coset).
    std::vector<int> rep(std::size_t i) const;
    const std::uint8_t* rep_data(std::size_t i) const { return data_.data() + i * static_cast<std::size_t>(n_); }
    bool contains(const std::vector<int>& residues) const;

private:
    friend CosetSubgroup coset_subgroup(const LatticeD& lat, std::uint64_t guard);
    int t_ = 0;
    int n_ = 0;
    std::size_t size_ = 0;
    std::vector<std::uint8_t> data_;
    std::vector<std::uint32_t> table_;  // open addressing, index+1 (0 = empty)
    std::uint64_t hash(const std::uint8_t* r) const;
    std::size_t find_slot(const std::uint8_t* r) const;
};

// Breadth-first closure of {c mod t : c in C_d}, generators taken in
// ascending integer order. Throws ResourceLimit (carrying the size reached,
// or the projected size) if the closure would exceed `guard`.
CosetSubgroup coset_subgroup(const LatticeD& lat, std::uint64_t guard = kCosetGuard);

// Minimum of the gauge over one coset rep/t + Z^n.
struct CosetMinimum {
    double value = 0.0;          // gauge
    double g_value = 0.0;        // G-functional at the minimizer
    std::uint64_t count = 0;     // number of minimizers
    std::vector<Numerators> witnesses;  // up to the cap, sorted
    std::uint64_t rerank_checks = 0;
    std::uint64_t rerank_violations = 0;
};

// For rep = 0 this is the shortest nonzero vector of Z^n.
CosetMinimum shortest_in_coset(const std::vector<int>& rep, const bodies::BodySpec& spec, int t,
                               double scale = 1.0);

enum class Method { Auto, CosetExact, BasisEnum, BruteForce };
std::string method_name(Method m);
Method parse_method(const std::string& s);

struct KissingOptions {
    Method method = Method::Auto;
    double scale = 1.0;            // count on scale * Λ
    int oracle_box = 1;            // brute-force box radius
    std::size_t witness_cap = kWitnessCap;
    int threads = 0;               // 0: hardware concurrency
    std::uint64_t coset_guard = kCosetGuard;
    std::uint64_t node_guard = 20'000'000'000ULL;  // basis-enum visited nodes
};

struct KissingReport {
    double nu = 0.0;               // minimal nonzero gauge
    std::uint64_t count = 0;       // N_s
    std::vector<Numerators> witnesses;  // numerators t*v (of Λ, unscaled), sorted
    bool witnesses_truncated = false;
    double rescale = 0.0;          // 1 / nu
    Method method = Method::CosetExact;
    double elapsed_ms = 0.0;
    int t = 0;
    double scale = 1.0;

    std::uint64_t integral_count = 0;     // minimal vectors in Z^n
    std::uint64_t fractional_count = 0;   // minimal vectors outside Z^n
    double subgroup_size = 0.0;           // |Λ/Z^n|
    std::uint64_t vectors_examined = 0;   // cosets, nodes or box points

    // Fractional parts with support below d among the examined vectors
    // (all cosets for coset-exact).
    std::uint64_t anomalies = 0;
    Numerators first_anomaly;
    std::uint64_t minimal_anomalies = 0;  // same, restricted to minimal vectors

    // min G over fractional / integral nonzero vectors (NaN if not computed).
    double min_g_fractional = std::numeric_limits<double>::quiet_NaN();
    double min_g_integral = std::numeric_limits<double>::quiet_NaN();

    std::uint64_t rerank_checks = 0;
    std::uint64_t rerank_violations = 0;
    bool oracle_complete = true;  // brute-force: box provably covers all minima
};

KissingReport kissing_count(const LatticeD& lat, const bodies::BodySpec& spec,
                            const KissingOptions& options = {});

// Lattice vectors (numerators) with all entries of v in [-box, box], v != 0,
// whose gauge does not exceed `max_gauge`, sorted by gauge then
// lexicographically. Throws ResourceLimit unless n <= 10 and
// (2*box*t+1)^n <= 1e9.
struct ShortVector {
    Numerators u;
    double gauge = 0.0;
};
std::vector<ShortVector> brute_force_short_vectors(const LatticeD& lat, const bodies::BodySpec& spec, int box,
                                                   double max_gauge = std::numeric_limits<double>::infinity(),
                                                   double scale = 1.0);

// Independent membership for the oracle: residue r lies in Λ/Z^n iff
// <r, y> = 0 mod t for every y in the annihilator of C_d. Requires t^n <= 1e7.
class DualMembership {
public:
    explicit DualMembership(const LatticeD& lat);
    bool contains(const std::vector<int>& residues) const;
    bool contains_index(std::uint64_t index) const { return member_[index]; }
    std::uint64_t size() const { return members_; }
    const std::vector<std::vector<int>>& dual_generators() const { return dual_gens_; }

private:
    int t_ = 0;
    int n_ = 0;
    std::vector<bool> member_;
    std::uint64_t members_ = 0;
    std::vector<std::vector<int>> dual_gens_;
};

struct Decomposition {
    int r = 0;          // 0 if v is integral, else 1
    Numerators v0;      // in {0..t-1}^n
    Numerators v1;      // integer part: v = (r/t) v0 + v1
};

// Splits v = u/t. Throws NotInLattice, or DecompositionAnomaly when the
// fractional support is below d.
Decomposition decompose(const Numerators& u, const LatticeD& lat);

// Smallest t >= 2 with t^p >= d, i.e. max(2, ceil(d^(1/p))).
int choose_t_lp(double p, int d);

// ceil that ignores relative round-off below 1e-9.
long robust_ceil(double x);

std::vector<double> to_real(const Numerators& u, int t, double scale = 1.0);
std::string format_vector(const Numerators& u, int t);

}  // namespace latlab::lattice
