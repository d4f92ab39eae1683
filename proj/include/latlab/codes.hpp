#pragma once

// Binary linear codes over GF(2) with exhaustive weight analysis.
//
// Codewords are packed into one 64-bit word, bit i holding coordinate i, so
// lengths are limited to 64. All weight data is computed by a full sweep of
// the 2^k codewords; there is no sampling or bound-based shortcut.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace latlab::codes {

using BitVec = std::uint64_t;

inline constexpr int kMaxLength = 64;
inline constexpr int kMaxEnumDimension = 28;

int weight(BitVec v);

// '0'/'1' string of length n, coordinate 0 first.
std::string to_string(BitVec v, int n);
BitVec from_string(std::string_view bits);

class BinaryCode {
public:
    int n() const { return n_; }
    int k() const { return static_cast<int>(rows_.size()); }
    // Generator rows in reduced row-echelon form.
    const std::vector<BitVec>& rows() const { return rows_; }

    bool has_distance() const { return d_.has_value(); }
    // Throws std::logic_error if min_distance() has not run on this code.
    int d() const;
    const std::vector<BitVec>& min_weight_set() const;
    int a_d() const { return static_cast<int>(min_weight_set().size()); }

    // Membership by reduction against the echelon rows.
    bool contains(BitVec v) const;

    // Optional human label ("golay24", file name, ...).
    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

private:
    friend BinaryCode make_code(const std::vector<BitVec>& rows, int n);
    friend int min_distance(BinaryCode& code);
    friend const std::vector<BitVec>& min_weight_codewords(BinaryCode& code);
    friend BinaryCode lengthen(const BinaryCode& code, const std::vector<int>& positions, int n);

    int n_ = 0;
    std::vector<BitVec> rows_;
    std::vector<int> pivots_;
    std::optional<int> d_;
    std::optional<std::vector<BitVec>> min_set_;
    std::string name_;
};

// Span of `rows`, each of length `n` (1..64). Throws FormatError on a bad
// length or stray bits above n, DegenerateCode if the span is {0}.
BinaryCode make_code(const std::vector<BitVec>& rows, int n);
// Rows given as '0'/'1' strings; lengths must agree.
BinaryCode make_code(const std::vector<std::string>& rows);

// Calls `visit(codeword)` for all 2^k codewords (including 0) in Gray-code
// order. Throws ResourceLimit when k exceeds kMaxEnumDimension.
template <typename Visit>
void for_each_codeword(const BinaryCode& code, Visit&& visit);

// Number of codewords of each weight 0..n.
std::vector<std::uint64_t> weight_distribution(const BinaryCode& code);

// Exact minimum distance; caches d and C_d on the code.
int min_distance(BinaryCode& code);
// Exact set C_d of minimum-weight codewords, sorted ascending as integers.
const std::vector<BitVec>& min_weight_codewords(BinaryCode& code);

// Convenience: copy of `code` with the weight caches filled.
BinaryCode analyzed(BinaryCode code);

// Named families: "repetition(n)", "parity(n)", "hamming8",
// "reed_muller(r,m)" (alias "rm(r,m)"), "golay24". Throws FormatError for an
// unknown or malformed name.
BinaryCode named_code(std::string_view spec);
BinaryCode repetition_code(int n);
BinaryCode parity_code(int n);
BinaryCode hamming8();
BinaryCode reed_muller(int r, int m);
BinaryCode golay24();

// Reads one row per line of '0'/'1' characters; blank lines and lines
// starting with '#' are skipped.
BinaryCode read_code_file(const std::string& path);

// Named code if `spec` parses as one, otherwise a code file path.
BinaryCode load_code(const std::string& spec);

// Embedding that sends coordinate i of `code` to `positions[i]` of a
// length-`n` word, zero elsewhere. Weight caches are carried over.
BinaryCode lengthen(const BinaryCode& code, const std::vector<int>& positions, int n);
BitVec embed(BitVec v, const std::vector<int>& positions);

// ---------------------------------------------------------------------------

[[noreturn]] void throw_enum_limit(int k);

template <typename Visit>
void for_each_codeword(const BinaryCode& code, Visit&& visit) {
    if (code.k() > kMaxEnumDimension) {
        throw_enum_limit(code.k());
    }
    const auto& rows = code.rows();
    const std::uint64_t total = std::uint64_t{1} << code.k();
    BitVec c = 0;
    visit(c);
    for (std::uint64_t i = 1; i < total; ++i) {
        // Gray code step flips the row indexed by the lowest set bit of i.
        c ^= rows[static_cast<std::size_t>(__builtin_ctzll(i))];
        visit(c);
    }
}

}  // namespace latlab::codes
