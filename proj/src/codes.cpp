#include "latlab/codes.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <fstream>
#include <regex>
#include <sstream>

#include "latlab/errors.hpp"

namespace latlab::codes {

namespace {

BitVec length_mask(int n) {
    return n == 64 ? ~BitVec{0} : ((BitVec{1} << n) - 1);
}

}  // namespace

int weight(BitVec v) { return std::popcount(v); }

std::string to_string(BitVec v, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i) {
        if ((v >> i) & 1U) s[static_cast<std::size_t>(i)] = '1';
    }
    return s;
}

BitVec from_string(std::string_view bits) {
    if (bits.empty() || bits.size() > static_cast<std::size_t>(kMaxLength)) {
        throw FormatError("bit string length must be in 1..64, got " +
                          std::to_string(bits.size()));
    }
    BitVec v = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            v |= BitVec{1} << i;
        } else if (bits[i] != '0') {
            throw FormatError("unexpected character '" + std::string(1, bits[i]) +
                              "' in bit string");
        }
    }
    return v;
}

void throw_enum_limit(int k) {
    throw ResourceLimit("codeword sweep needs 2^" + std::to_string(k) +
                            " steps; dimension guard is " + std::to_string(kMaxEnumDimension),
                        static_cast<unsigned long long>(k));
}

int BinaryCode::d() const {
    if (!d_) throw std::logic_error("minimum distance not computed");
    return *d_;
}

const std::vector<BitVec>& BinaryCode::min_weight_set() const {
    if (!min_set_) throw std::logic_error("minimum-weight set not computed");
    return *min_set_;
}

bool BinaryCode::contains(BitVec v) const {
    if (v & ~length_mask(n_)) return false;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if ((v >> pivots_[i]) & 1U) v ^= rows_[i];
    }
    return v == 0;
}

BinaryCode make_code(const std::vector<BitVec>& rows, int n) {
    if (n < 1 || n > kMaxLength) {
        throw FormatError("code length must be in 1..64, got " + std::to_string(n));
    }
    if (rows.empty()) throw FormatError("no generator rows given");
    const BitVec mask = length_mask(n);
    std::vector<BitVec> work;
    for (BitVec r : rows) {
        if (r & ~mask) throw FormatError("generator row has bits beyond length n");
        work.push_back(r);
    }

    // Gauss-Jordan elimination; pivot is the lowest set coordinate.
    std::vector<BitVec> echelon;
    std::vector<int> pivots;
    for (int col = 0; col < n; ++col) {
        const BitVec bit = BitVec{1} << col;
        auto it = std::find_if(work.begin(), work.end(), [&](BitVec r) { return r & bit; });
        if (it == work.end()) continue;
        BitVec pivot_row = *it;
        work.erase(it);
        for (auto& r : work) {
            if (r & bit) r ^= pivot_row;
        }
        for (auto& r : echelon) {
            if (r & bit) r ^= pivot_row;
        }
        echelon.push_back(pivot_row);
        pivots.push_back(col);
    }
    if (echelon.empty()) throw DegenerateCode("generator rows span the zero code");

    BinaryCode code;
    code.n_ = n;
    code.rows_ = std::move(echelon);
    code.pivots_ = std::move(pivots);
    return code;
}

BinaryCode make_code(const std::vector<std::string>& rows) {
    if (rows.empty()) throw FormatError("no generator rows given");
    const std::size_t n = rows.front().size();
    std::vector<BitVec> bits;
    for (const auto& r : rows) {
        if (r.size() != n) {
            throw FormatError("inconsistent row lengths: " + std::to_string(n) + " vs " +
                              std::to_string(r.size()));
        }
        bits.push_back(from_string(r));
    }
    return make_code(bits, static_cast<int>(n));
}

std::vector<std::uint64_t> weight_distribution(const BinaryCode& code) {
    std::vector<std::uint64_t> dist(static_cast<std::size_t>(code.n()) + 1, 0);
    for_each_codeword(code, [&](BitVec c) { ++dist[static_cast<std::size_t>(weight(c))]; });
    return dist;
}

int min_distance(BinaryCode& code) {
    if (code.d_) return *code.d_;
    int best = code.n() + 1;
    std::vector<BitVec> light;
    for_each_codeword(code, [&](BitVec c) {
        if (c == 0) return;
        const int w = weight(c);
        if (w < best) {
            best = w;
            light.clear();
        }
        if (w == best) light.push_back(c);
    });
    std::sort(light.begin(), light.end());
    code.d_ = best;
    code.min_set_ = std::move(light);
    return best;
}

const std::vector<BitVec>& min_weight_codewords(BinaryCode& code) {
    min_distance(code);
    return *code.min_set_;
}

BinaryCode analyzed(BinaryCode code) {
    min_distance(code);
    return code;
}

BinaryCode repetition_code(int n) {
    auto code = make_code({length_mask(n)}, n);
    code.set_name("repetition(" + std::to_string(n) + ")");
    return code;
}

BinaryCode parity_code(int n) {
    if (n < 2) throw FormatError("parity code needs n >= 2");
    std::vector<BitVec> rows;
    for (int i = 0; i + 1 < n; ++i) rows.push_back((BitVec{1} << i) | (BitVec{1} << (n - 1)));
    auto code = make_code(rows, n);
    code.set_name("parity(" + std::to_string(n) + ")");
    return code;
}

BinaryCode hamming8() {
    auto code = make_code(std::vector<std::string>{
        "11110000",
        "00111100",
        "00001111",
        "01010101",
    });
    code.set_name("hamming8");
    return code;
}

// RM(r,m): evaluations of all monomials of degree <= r on the points of
// GF(2)^m, point p being coordinate p.
BinaryCode reed_muller(int r, int m) {
    if (m < 1 || m > 6 || r < 0 || r > m) {
        throw FormatError("reed_muller(r,m) needs 0 <= r <= m <= 6");
    }
    const int n = 1 << m;
    std::vector<BitVec> rows;
    for (int mono = 0; mono < n; ++mono) {
        if (std::popcount(static_cast<unsigned>(mono)) > r) continue;
        BitVec row = 0;
        for (int p = 0; p < n; ++p) {
            if ((p & mono) == mono) row |= BitVec{1} << p;
        }
        rows.push_back(row);
    }
    auto code = make_code(rows, n);
    code.set_name("reed_muller(" + std::to_string(r) + "," + std::to_string(m) + ")");
    return code;
}

// Cyclic [23,12,7] code from g(x) = 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11,
// extended by an overall parity bit at coordinate 23.
BinaryCode golay24() {
    constexpr BitVec g = 0b110001110101;
    std::vector<BitVec> rows;
    for (int s = 0; s < 12; ++s) {
        BitVec row = g << s;
        if (std::popcount(row) % 2 == 1) row |= BitVec{1} << 23;
        rows.push_back(row);
    }
    auto code = make_code(rows, 24);
    code.set_name("golay24");
    return code;
}

BinaryCode named_code(std::string_view spec) {
    const std::string s(spec);
    static const std::regex one_arg(R"(^\s*(repetition|parity)\s*\(\s*(\d+)\s*\)\s*$)");
    static const std::regex two_arg(R"(^\s*(reed_muller|rm)\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$)");
    std::smatch m;
    if (s == "hamming8") return hamming8();
    if (s == "golay24") return golay24();
    if (std::regex_match(s, m, one_arg)) {
        const int n = std::stoi(m[2].str());
        if (n < 1 || n > kMaxLength) throw FormatError("length out of range in '" + s + "'");
        return m[1].str() == "repetition" ? repetition_code(n) : parity_code(n);
    }
    if (std::regex_match(s, m, two_arg)) {
        return reed_muller(std::stoi(m[2].str()), std::stoi(m[3].str()));
    }
    throw FormatError("unknown code name '" + s + "'");
}

BinaryCode read_code_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open code file '" + path + "'");
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::string trimmed;
        for (char ch : line) {
            if (!std::isspace(static_cast<unsigned char>(ch))) trimmed.push_back(ch);
        }
        if (trimmed.empty() || trimmed.front() == '#') continue;
        rows.push_back(trimmed);
    }
    auto code = make_code(rows);
    code.set_name(path);
    return code;
}

BinaryCode load_code(const std::string& spec) {
    try {
        return named_code(spec);
    } catch (const FormatError&) {
        std::ifstream probe(spec);
        if (!probe) throw;
    }
    return read_code_file(spec);
}

BitVec embed(BitVec v, const std::vector<int>& positions) {
    BitVec out = 0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if ((v >> i) & 1U) out |= BitVec{1} << positions[i];
    }
    return out;
}

BinaryCode lengthen(const BinaryCode& code, const std::vector<int>& positions, int n) {
    if (static_cast<int>(positions.size()) != code.n()) {
        throw FormatError("embedding needs exactly " + std::to_string(code.n()) + " positions");
    }
    if (n < code.n() || n > kMaxLength) throw FormatError("target length out of range");
    BitVec seen = 0;
    for (int p : positions) {
        if (p < 0 || p >= n) throw FormatError("embedding position out of range");
        if ((seen >> p) & 1U) throw FormatError("duplicate embedding position");
        seen |= BitVec{1} << p;
    }
    std::vector<BitVec> rows;
    for (BitVec r : code.rows()) rows.push_back(embed(r, positions));
    auto out = make_code(rows, n);
    if (code.d_) {
        out.d_ = code.d_;
        std::vector<BitVec> light;
        for (BitVec c : *code.min_set_) light.push_back(embed(c, positions));
        std::sort(light.begin(), light.end());
        out.min_set_ = std::move(light);
    }
    out.set_name(code.name().empty() ? "lengthened" : "lengthen(" + code.name() + ")");
    return out;
}

}  // namespace latlab::codes
