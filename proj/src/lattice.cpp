#include "latlab/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "latlab/errors.hpp"

namespace latlab::lattice {

using bodies::BodySpec;
using codes::BitVec;

bool gauge_equal(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
    return std::abs(a - b) <= kTieRel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

long robust_ceil(double x) {
    const double c = std::ceil(x - 1e-9 * std::max(1.0, std::abs(x)));
    return static_cast<long>(c);
}

int choose_t_lp(double p, int d) {
    if (!(p >= 1.0)) throw InvalidParameter("p must be >= 1");
    if (d < 1) throw InvalidParameter("d must be positive");
    const long t = robust_ceil(std::pow(static_cast<double>(d), 1.0 / p));
    return static_cast<int>(std::max(2L, t));
}

std::vector<double> to_real(const Numerators& u, int t, double scale) {
    std::vector<double> x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) x[i] = scale * static_cast<double>(u[i]) / t;
    return x;
}

std::string format_vector(const Numerators& u, int t) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (i) os << ",";
        const long g = std::gcd(std::abs(u[i]), static_cast<long>(t));
        if (u[i] == 0) {
            os << "0";
        } else if (g == t) {
            os << u[i] / t;
        } else {
            os << u[i] / g << "/" << t / g;
        }
    }
    os << ")";
    return os.str();
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Auto: return "auto";
        case Method::CosetExact: return "coset-exact";
        case Method::BasisEnum: return "basis-enum";
        case Method::BruteForce: return "brute-force";
    }
    return "?";
}

Method parse_method(const std::string& s) {
    if (s == "auto") return Method::Auto;
    if (s == "coset" || s == "coset-exact") return Method::CosetExact;
    if (s == "enum" || s == "basis-enum") return Method::BasisEnum;
    if (s == "oracle" || s == "brute" || s == "brute-force") return Method::BruteForce;
    throw FormatError("unknown method '" + s + "'");
}

LatticeD build_lattice(codes::BinaryCode code, int t) {
    if (t < 2) throw InvalidParameter("t must be >= 2, got " + std::to_string(t));
    if (t > 255) throw InvalidParameter("t must be <= 255");
    codes::min_distance(code);
    return LatticeD{std::move(code), t};
}

namespace {

long mod(long a, long t) {
    const long r = a % t;
    return r < 0 ? r + t : r;
}

// Extended gcd: returns g = gcd(a, b) > 0 with x*a + y*b = g.
long ext_gcd(long a, long b, long& x, long& y) {
    long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, tt = 1;
    while (r != 0) {
        const long q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
        std::tie(old_t, tt) = std::make_pair(tt, old_t - q * tt);
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    x = old_s;
    y = old_t;
    return old_r;
}

// Hermite form of tZ^n + Z<gens>, computed modulo t.
std::vector<std::vector<long>> hermite_mod_t(int n, int t, const std::vector<std::vector<long>>& gens) {
    std::vector<std::vector<long>> rows(static_cast<std::size_t>(n), std::vector<long>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = t;

    auto insert = [&](std::vector<long> g, int from) {
        for (int i = from; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            for (int c = i; c < n; ++c) g[static_cast<std::size_t>(c)] = mod(g[static_cast<std::size_t>(c)], t);
            if (g[ui] == 0) continue;
            auto& row = rows[ui];
            long x = 0, y = 0;
            const long a = row[ui], b = g[ui];
            const long g0 = ext_gcd(a, b, x, y);
            std::vector<long> new_row(static_cast<std::size_t>(n), 0);
            std::vector<long> new_g(static_cast<std::size_t>(n), 0);
            for (int c = i; c < n; ++c) {
                const auto uc = static_cast<std::size_t>(c);
                new_row[uc] = x * row[uc] + y * g[uc];
                new_g[uc] = (b / g0) * row[uc] - (a / g0) * g[uc];
            }
            new_row[ui] = g0;
            for (int c = i + 1; c < n; ++c) new_row[static_cast<std::size_t>(c)] = mod(new_row[static_cast<std::size_t>(c)], t);
            row = std::move(new_row);
            g = std::move(new_g);
        }
    };

    for (const auto& g : gens) insert(g, 0);
    // t*e_j must lie in the span; (t/h_j) row_j differs from it by a vector
    // supported right of column j.
    for (int j = 0; j < n; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        const long h = rows[uj][uj];
        if (h == t) continue;
        std::vector<long> g(static_cast<std::size_t>(n), 0);
        for (int c = j + 1; c < n; ++c) g[static_cast<std::size_t>(c)] = (t / h) * rows[uj][static_cast<std::size_t>(c)];
        insert(std::move(g), j + 1);
    }
    return rows;
}

std::vector<std::vector<long>> generator_numerators(const LatticeD& lat, const std::vector<int>& perm) {
    std::vector<std::vector<long>> gens;
    for (BitVec c : lat.code.min_weight_set()) {
        std::vector<long> g(static_cast<std::size_t>(lat.n()), 0);
        for (int pos = 0; pos < lat.n(); ++pos) {
            g[static_cast<std::size_t>(pos)] = static_cast<long>((c >> perm[static_cast<std::size_t>(pos)]) & 1U);
        }
        gens.push_back(std::move(g));
    }
    return gens;
}


}  // namespace

double NumeratorBasis::subgroup_size() const {
    double size = 1.0;
    for (int i = 0; i < n; ++i) size *= static_cast<double>(t / rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]);
    return size;
}

double NumeratorBasis::subgroup_log2() const {
    double lg = n * std::log2(static_cast<double>(t));
    for (int i = 0; i < n; ++i) lg -= std::log2(static_cast<double>(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]));
    return lg;
}

bool NumeratorBasis::contains(const Numerators& u) const {
    if (static_cast<int>(u.size()) != n) return false;
    Numerators w = u;
    for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const long h = rows[ui][ui];
        if (w[ui] % h != 0) return false;
        const long q = w[ui] / h;
        if (q == 0) continue;
        for (int c = i; c < n; ++c) w[static_cast<std::size_t>(c)] -= q * rows[ui][static_cast<std::size_t>(c)];
    }
    return true;
}

NumeratorBasis numerator_basis(const LatticeD& lat) {
    std::vector<int> identity(static_cast<std::size_t>(lat.n()));
    std::iota(identity.begin(), identity.end(), 0);
    NumeratorBasis b;
    b.n = lat.n();
    b.t = lat.t;
    b.rows = hermite_mod_t(lat.n(), lat.t, generator_numerators(lat, identity));
    return b;
}

// ---------------------------------------------------------------------------
// Coset subgroup

std::uint64_t CosetSubgroup::hash(const std::uint8_t* r) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL;
    for (int i = 0; i < n_; ++i) {
        h ^= r[i];
        h *= 0x100000001B3ULL;
        h ^= h >> 29;
    }
    return h;
}

std::size_t CosetSubgroup::find_slot(const std::uint8_t* r) const {
    const std::size_t mask = table_.size() - 1;
    std::size_t slot = static_cast<std::size_t>(hash(r)) & mask;
    while (true) {
        const std::uint32_t e = table_[slot];
        if (e == 0) return slot;
        if (std::equal(r, r + n_, rep_data(e - 1))) return slot;
        slot = (slot + 1) & mask;
    }
}

std::vector<int> CosetSubgroup::rep(std::size_t i) const {
    const std::uint8_t* r = rep_data(i);
    return std::vector<int>(r, r + n_);
}

bool CosetSubgroup::contains(const std::vector<int>& residues) const {
    if (static_cast<int>(residues.size()) != n_) return false;
    std::vector<std::uint8_t> r(residues.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<std::uint8_t>(mod(residues[i], t_));
    return table_[find_slot(r.data())] != 0;
}

CosetSubgroup coset_subgroup(const LatticeD& lat, std::uint64_t guard) {
    const NumeratorBasis basis = numerator_basis(lat);
    const double projected = basis.subgroup_size();
    if (projected > static_cast<double>(guard)) {
        throw ResourceLimit("coset subgroup has " + std::to_string(static_cast<unsigned long long>(projected)) +
                                " elements (2^" + std::to_string(basis.subgroup_log2()) +
                                "); guard is " + std::to_string(guard),
                            static_cast<unsigned long long>(std::min(projected, 1.8e19)));
    }
    CosetSubgroup s;
    s.t_ = lat.t;
    s.n_ = lat.n();
    const auto n = static_cast<std::size_t>(lat.n());
    const auto expected = static_cast<std::size_t>(projected + 0.5);
    std::size_t cap = 16;
    while (cap < 2 * expected + 2) cap <<= 1;
    s.table_.assign(cap, 0);
    s.data_.reserve(expected * n);

    auto insert = [&](const std::uint8_t* r) {
        const std::size_t slot = s.find_slot(r);
        if (s.table_[slot] != 0) return;
        if (s.size_ >= guard) {
            throw ResourceLimit("coset closure exceeded guard", s.size_);
        }
        s.data_.insert(s.data_.end(), r, r + n);
        ++s.size_;
        s.table_[slot] = static_cast<std::uint32_t>(s.size_);
    };

    std::vector<std::uint8_t> zero(n, 0);
    insert(zero.data());
    std::vector<std::vector<std::uint8_t>> gens;
    for (BitVec c : lat.code.min_weight_set()) {
        std::vector<std::uint8_t> g(n);
        for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<std::uint8_t>((c >> i) & 1U);
        gens.push_back(std::move(g));
    }
    std::vector<std::uint8_t> next(n);
    for (std::size_t idx = 0; idx < s.size_; ++idx) {
        for (const auto& g : gens) {
            const std::uint8_t* cur = s.rep_data(idx);
            for (std::size_t i = 0; i < n; ++i) {
                next[i] = static_cast<std::uint8_t>((cur[i] + g[i]) % lat.t);
            }
            insert(next.data());
        }
    }
    if (s.size_ != expected) {
        throw NumericalError("coset closure size " + std::to_string(s.size_) +
                             " disagrees with Hermite-form index " + std::to_string(expected));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Blockwise minimization

namespace {

struct BlockMin {
    double value = 0.0;  // f at scale 1
    std::uint64_t count = 1;
    std::vector<std::vector<long>> minimizers;  // numerators on the block coords
    double runner_up = std::numeric_limits<double>::infinity();
};

// Minimum of f over the block coset {u/t : u_i = r_i mod t}; also records the
// next distinct value if it lies within a 5% margin in f^p.
BlockMin block_minimum(const bodies::Block& block, const std::vector<int>& residues, int t) {
    const int k = static_cast<int>(block.coords.size());
    BlockMin out;
    bool all_zero = std::all_of(residues.begin(), residues.end(), [](int r) { return r == 0; });
    if (all_zero) {
        out.value = 0.0;
        out.minimizers.push_back(std::vector<long>(static_cast<std::size_t>(k), 0));
        return out;
    }
    // Upper bound from the nearest-residue point.
    std::vector<double> x(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const int r = residues[static_cast<std::size_t>(i)];
        const long u = (2 * r <= t) ? r : r - t;
        x[static_cast<std::size_t>(i)] = static_cast<double>(u) / t;
    }
    const double upper = block.gauge(x);
    const double margin = upper * std::pow(1.05, 1.0 / block.exponent) * (1.0 + 1e-12);

    std::vector<std::vector<long>> choices(static_cast<std::size_t>(k));
    double volume = 1.0;
    for (int i = 0; i < k; ++i) {
        const long bound = static_cast<long>(std::floor(t * block.gauge.coord_radius(i) * margin + 1e-9));
        const long r = residues[static_cast<std::size_t>(i)];
        auto& c = choices[static_cast<std::size_t>(i)];
        for (long u = r - t * ((r + bound) / t + 1); u <= bound; u += t) {
            if (std::abs(u) <= bound) c.push_back(u);
        }
        if (c.empty()) c.push_back(2 * r <= t ? r : r - t);
        volume *= static_cast<double>(c.size());
    }
    if (volume > 5e7) throw ResourceLimit("block coset search too large", static_cast<unsigned long long>(volume));

    out.value = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    std::vector<long> u(static_cast<std::size_t>(k));
    std::vector<std::pair<double, std::vector<long>>> seen;
    while (true) {
        for (int i = 0; i < k; ++i) {
            u[static_cast<std::size_t>(i)] = choices[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
            x[static_cast<std::size_t>(i)] = static_cast<double>(u[static_cast<std::size_t>(i)]) / t;
        }
        const double v = block.gauge(x);
        if (v <= margin) seen.emplace_back(v, u);
        if (v < out.value) out.value = v;
        int i = 0;
        while (i < k && ++idx[static_cast<std::size_t>(i)] == choices[static_cast<std::size_t>(i)].size()) {
            idx[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == k) break;
    }
    out.count = 0;
    for (auto& [v, vec] : seen) {
        if (gauge_equal(v, out.value)) {
            out.minimizers.push_back(vec);
            ++out.count;
        } else if (v > out.value && std::pow(v, block.exponent) <= 1.05 * std::pow(out.value, block.exponent)) {
            out.runner_up = std::min(out.runner_up, v);
        }
    }
    std::sort(out.minimizers.begin(), out.minimizers.end());
    return out;
}

// Per-block caches keyed by the residue pattern of the block's coordinates.
class BlockMinimizer {
public:
    BlockMinimizer(const BodySpec& spec, int t) : spec_(spec), t_(t), cache_(spec.blocks.size()) {}

    const BlockMin& get(std::size_t j, const std::uint8_t* rep) {
        const auto& coords = spec_.blocks[j].coords;
        std::uint64_t key = 0;
        for (auto it = coords.rbegin(); it != coords.rend(); ++it) key = key * static_cast<std::uint64_t>(t_) + rep[*it];
        auto& m = cache_[j];
        auto found = m.find(key);
        if (found != m.end()) return found->second;
        std::vector<int> residues;
        for (int c : coords) residues.push_back(rep[c]);
        return m.emplace(key, block_minimum(spec_.blocks[j], residues, t_)).first->second;
    }

private:
    const BodySpec& spec_;
    int t_;
    std::vector<std::unordered_map<std::uint64_t, BlockMin>> cache_;
};

struct ZeroCoset {
    double value = std::numeric_limits<double>::infinity();  // scaled gauge
    double g_value = std::numeric_limits<double>::infinity();
    std::uint64_t count = 0;
    std::vector<Numerators> witnesses;
};

// Shortest nonzero integer vectors: a single nonzero block at its integer
// minimum (any second nonzero block strictly increases the gauge).
ZeroCoset zero_coset_minimum(const BodySpec& spec, int t, double scale) {
    ZeroCoset z;
    struct Cand {
        std::size_t block;
        double value;
        bodies::IntegerMinimum im;
    };
    std::vector<Cand> cands;
    std::vector<double> values(spec.blocks.size(), 0.0);
    for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
        auto im = bodies::min_integer_gauge(spec.blocks[j].gauge);
        values.assign(spec.blocks.size(), 0.0);
        values[j] = scale * im.rho;
        const double g = bodies::gauge_from_block_values(spec, values);
        cands.push_back({j, g, std::move(im)});
        z.g_value = std::min(z.g_value, std::pow(scale * cands.back().im.rho, spec.blocks[j].exponent));
    }
    for (const auto& c : cands) z.value = std::min(z.value, c.value);
    for (const auto& c : cands) {
        if (!gauge_equal(c.value, z.value)) continue;
        z.count += c.im.minimizers.size();
        for (const auto& m : c.im.minimizers) {
            Numerators u(static_cast<std::size_t>(spec.n), 0);
            const auto& coords = spec.blocks[c.block].coords;
            for (std::size_t i = 0; i < coords.size(); ++i) u[static_cast<std::size_t>(coords[i])] = m[i] * t;
            z.witnesses.push_back(std::move(u));
        }
    }
    std::sort(z.witnesses.begin(), z.witnesses.end());
    return z;
}

struct CosetEval {
    double value;
    double g_value;
};

// Gauge and G at the blockwise minimizer of one coset, plus the re-rank
// check against per-block runners-up.
CosetEval evaluate_coset(const BodySpec& spec, BlockMinimizer& bm, const std::uint8_t* rep, double scale,
                         std::vector<double>& values, std::uint64_t* checks, std::uint64_t* violations) {
    double g = 0.0;
    for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
        const BlockMin& b = bm.get(j, rep);
        values[j] = scale * b.value;
        g += std::pow(values[j], spec.blocks[j].exponent);
    }
    const double v = bodies::gauge_from_block_values(spec, values);
    if (checks) {
        for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
            const BlockMin& b = bm.get(j, rep);
            if (!std::isfinite(b.runner_up)) continue;
            const double keep = values[j];
            values[j] = scale * b.runner_up;
            const double alt = bodies::gauge_from_block_values(spec, values);
            values[j] = keep;
            ++*checks;
            if (alt < v || gauge_equal(alt, v)) ++*violations;
        }
    }
    return {v, g};
}

void expand_witnesses(const BodySpec& spec, BlockMinimizer& bm, const std::uint8_t* rep, int n,
                      std::size_t limit, std::vector<Numerators>& out) {
    const std::size_t nb = spec.blocks.size();
    std::vector<const BlockMin*> mins(nb);
    for (std::size_t j = 0; j < nb; ++j) mins[j] = &bm.get(j, rep);
    std::vector<std::size_t> idx(nb, 0);
    Numerators u(static_cast<std::size_t>(n), 0);
    for (std::size_t produced = 0; produced < limit; ++produced) {
        for (std::size_t j = 0; j < nb; ++j) {
            const auto& m = mins[j]->minimizers[idx[j]];
            const auto& coords = spec.blocks[j].coords;
            for (std::size_t i = 0; i < coords.size(); ++i) u[static_cast<std::size_t>(coords[i])] = m[i];
        }
        out.push_back(u);
        std::size_t j = 0;
        while (j < nb && ++idx[j] == mins[j]->minimizers.size()) {
            idx[j] = 0;
            ++j;
        }
        if (j == nb) break;
    }
}

void cap_sorted(std::vector<Numerators>& w, std::size_t cap) {
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    if (w.size() > cap) w.resize(cap);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1U, 16U));
}

// Runs fn(chunk) for chunk in [0, chunks) on `threads` workers.
void parallel_chunks(std::size_t chunks, int threads, const std::function<void(std::size_t)>& fn) {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t c = next++; c < chunks; c = next++) fn(c);
    };
    const int nt = std::max(1, std::min<int>(threads, static_cast<int>(chunks)));
    if (nt == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int i = 0; i < nt; ++i) {
        pool.emplace_back([&]() {
            try {
                worker();
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next = chunks;
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

void check_spec(const LatticeD& lat, const BodySpec& spec) {
    bodies::validate(spec);
    if (spec.n != lat.n()) {
        throw FormatError("body dimension " + std::to_string(spec.n) + " does not match lattice dimension " +
                          std::to_string(lat.n()));
    }
    for (const auto& b : spec.blocks) {
        if (static_cast<int>(b.coords.size()) > bodies::kMaxEnumArity) {
            throw ResourceLimit("block arity above enumeration guard", b.coords.size());
        }
    }
}

}  // namespace

CosetMinimum shortest_in_coset(const std::vector<int>& rep, const BodySpec& spec, int t, double scale) {
    bodies::validate(spec);
    if (static_cast<int>(rep.size()) != spec.n) throw FormatError("coset rep dimension mismatch");
    for (const auto& b : spec.blocks) {
        if (static_cast<int>(b.coords.size()) > bodies::kMaxEnumArity) {
            throw ResourceLimit("block arity above enumeration guard", b.coords.size());
        }
    }
    std::vector<std::uint8_t> r(rep.size());
    bool zero = true;
    for (std::size_t i = 0; i < rep.size(); ++i) {
        r[i] = static_cast<std::uint8_t>(mod(rep[i], t));
        zero = zero && r[i] == 0;
    }
    CosetMinimum out;
    if (zero) {
        ZeroCoset z = zero_coset_minimum(spec, t, scale);
        out.value = z.value;
        out.g_value = z.g_value;
        out.count = z.count;
        out.witnesses = std::move(z.witnesses);
        return out;
    }
    BlockMinimizer bm(spec, t);
    std::vector<double> values(spec.blocks.size());
    const CosetEval e = evaluate_coset(spec, bm, r.data(), scale, values, &out.rerank_checks, &out.rerank_violations);
    out.value = e.value;
    out.g_value = e.g_value;
    out.count = 1;
    for (std::size_t j = 0; j < spec.blocks.size(); ++j) out.count *= bm.get(j, r.data()).count;
    expand_witnesses(spec, bm, r.data(), spec.n, kWitnessCap, out.witnesses);
    cap_sorted(out.witnesses, kWitnessCap);
    return out;
}

// ---------------------------------------------------------------------------
// kissing_count: coset-exact

namespace {

KissingReport kissing_coset(const LatticeD& lat, const BodySpec& spec, const KissingOptions& opt) {
    const CosetSubgroup sub = coset_subgroup(lat, opt.coset_guard);
    const int t = lat.t;
    const int n = lat.n();
    const int d = lat.code.d();
    const double scale = opt.scale;
    const int threads = resolve_threads(opt.threads);

    KissingReport rep;
    rep.method = Method::CosetExact;
    rep.t = t;
    rep.scale = scale;
    rep.subgroup_size = static_cast<double>(sub.size());
    rep.vectors_examined = sub.size();

    ZeroCoset zero = zero_coset_minimum(spec, t, scale);
    rep.min_g_integral = zero.g_value;

    const std::size_t total = sub.size() - 1;  // reps 1..size-1
    const std::size_t chunks = std::min<std::size_t>(256, std::max<std::size_t>(1, total));
    auto chunk_range = [&](std::size_t c) {
        const std::size_t lo = 1 + c * total / chunks;
        const std::size_t hi = 1 + (c + 1) * total / chunks;
        return std::make_pair(lo, hi);
    };

    struct Pass1 {
        double min_value = std::numeric_limits<double>::infinity();
        double min_g = std::numeric_limits<double>::infinity();
        std::uint64_t anomalies = 0;
        std::size_t first_anomaly = 0;
        std::uint64_t checks = 0;
        std::uint64_t violations = 0;
    };
    std::vector<Pass1> p1(chunks);
    parallel_chunks(total == 0 ? 0 : chunks, threads, [&](std::size_t c) {
        BlockMinimizer bm(spec, t);
        std::vector<double> values(spec.blocks.size());
        auto [lo, hi] = chunk_range(c);
        Pass1& r = p1[c];
        for (std::size_t i = lo; i < hi; ++i) {
            const std::uint8_t* residues = sub.rep_data(i);
            const CosetEval e = evaluate_coset(spec, bm, residues, scale, values, &r.checks, &r.violations);
            r.min_value = std::min(r.min_value, e.value);
            r.min_g = std::min(r.min_g, e.g_value);
            int support = 0;
            for (int k = 0; k < n; ++k) support += residues[k] != 0;
            if (support < d) {
                if (r.anomalies == 0) r.first_anomaly = i;
                ++r.anomalies;
            }
        }
    });

    double nu = zero.value;
    double min_g = std::numeric_limits<double>::infinity();
    for (const auto& r : p1) {
        nu = std::min(nu, r.min_value);
        min_g = std::min(min_g, r.min_g);
        rep.rerank_checks += r.checks;
        rep.rerank_violations += r.violations;
        if (r.anomalies && rep.anomalies == 0) {
            const std::uint8_t* a = sub.rep_data(r.first_anomaly);
            rep.first_anomaly.assign(a, a + n);
        }
        rep.anomalies += r.anomalies;
    }
    rep.min_g_fractional = min_g;

    struct Pass2 {
        std::uint64_t count = 0;
        std::uint64_t anomalies = 0;
        std::vector<Numerators> witnesses;
        bool truncated = false;
    };
    std::vector<Pass2> p2(chunks);
    parallel_chunks(total == 0 ? 0 : chunks, threads, [&](std::size_t c) {
        BlockMinimizer bm(spec, t);
        std::vector<double> values(spec.blocks.size());
        auto [lo, hi] = chunk_range(c);
        Pass2& r = p2[c];
        for (std::size_t i = lo; i < hi; ++i) {
            const std::uint8_t* residues = sub.rep_data(i);
            if (p1[c].min_value > nu && !gauge_equal(p1[c].min_value, nu)) break;
            const CosetEval e = evaluate_coset(spec, bm, residues, scale, values, nullptr, nullptr);
            if (!gauge_equal(e.value, nu)) continue;
            std::uint64_t cnt = 1;
            for (std::size_t j = 0; j < spec.blocks.size(); ++j) cnt *= bm.get(j, residues).count;
            r.count += cnt;
            int support = 0;
            for (int k = 0; k < n; ++k) support += residues[k] != 0;
            if (support < d) r.anomalies += cnt;
            const std::size_t limit = 1'000'000;
            if (cnt > limit) r.truncated = true;
            expand_witnesses(spec, bm, residues, n, limit, r.witnesses);
            if (r.witnesses.size() > 4 * opt.witness_cap) cap_sorted(r.witnesses, opt.witness_cap);
        }
        cap_sorted(r.witnesses, opt.witness_cap);
    });

    std::vector<Numerators> witnesses;
    if (gauge_equal(zero.value, nu)) {
        rep.integral_count = zero.count;
        witnesses = zero.witnesses;
    }
    for (auto& r : p2) {
        rep.fractional_count += r.count;
        rep.minimal_anomalies += r.anomalies;
        rep.witnesses_truncated = rep.witnesses_truncated || r.truncated;
        witnesses.insert(witnesses.end(), std::make_move_iterator(r.witnesses.begin()),
                         std::make_move_iterator(r.witnesses.end()));
    }
    rep.nu = nu;
    rep.count = rep.integral_count + rep.fractional_count;
    cap_sorted(witnesses, opt.witness_cap);
    rep.witnesses_truncated = rep.witnesses_truncated || rep.count > witnesses.size();
    rep.witnesses = std::move(witnesses);
    rep.rescale = 1.0 / nu;
    return rep;
}

// ---------------------------------------------------------------------------
// kissing_count: depth-first enumeration over a triangular basis of tΛ

class BasisEnumerator {
public:
    BasisEnumerator(const LatticeD& lat, const BodySpec& spec, const KissingOptions& opt)
        : lat_(lat), spec_(spec), opt_(opt), n_(lat.n()), t_(lat.t), d_(lat.code.d()) {
        // Coordinates grouped by block so block values complete early.
        for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
            const auto& coords = spec.blocks[j].coords;
            for (std::size_t i = 0; i < coords.size(); ++i) {
                perm_.push_back(coords[i]);
                pos_block_.push_back(static_cast<int>(j));
                pos_in_block_.push_back(static_cast<int>(i));
                pos_block_end_.push_back(i + 1 == coords.size());
            }
        }
        basis_ = hermite_mod_t(n_, t_, generator_numerators(lat, perm_));
        acc_.assign(static_cast<std::size_t>(n_ + 1), std::vector<long>(static_cast<std::size_t>(n_), 0));
        u_.assign(static_cast<std::size_t>(n_), 0);
        x_.assign(static_cast<std::size_t>(n_), 0.0);
        values_.assign(spec.blocks.size(), 0.0);
        lq_partial_.assign(static_cast<std::size_t>(n_ + 1), 0.0);
    }

    KissingReport run() {
        KissingReport rep;
        rep.method = Method::BasisEnum;
        rep.t = t_;
        rep.scale = opt_.scale;
        double size = 1.0;
        for (int i = 0; i < n_; ++i) size *= static_cast<double>(t_ / basis_[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]);
        rep.subgroup_size = size;

        // Initial bound from known lattice vectors: integral minima and C_d/t.
        ZeroCoset zero = zero_coset_minimum(spec_, t_, opt_.scale);
        best_ = zero.value;
        for (BitVec c : lat_.code.min_weight_set()) {
            Numerators u(static_cast<std::size_t>(n_), 0);
            for (int i = 0; i < n_; ++i) u[static_cast<std::size_t>(i)] = static_cast<long>((c >> i) & 1U);
            best_ = std::min(best_, bodies::gauge(spec_, to_real(u, t_, opt_.scale)));
        }
        bound_ = best_ * (1.0 + 2 * kTieRel) + 1e-300;
        best_ = std::numeric_limits<double>::infinity();

        search(0);

        rep.nu = best_;
        rep.count = count_;
        rep.integral_count = integral_;
        rep.fractional_count = count_ - integral_;
        rep.vectors_examined = nodes_;
        rep.anomalies = anomalies_;
        rep.first_anomaly = first_anomaly_;
        rep.minimal_anomalies = minimal_anomalies_;
        cap_sorted(witnesses_, opt_.witness_cap);
        rep.witnesses = std::move(witnesses_);
        rep.witnesses_truncated = rep.count > rep.witnesses.size();
        rep.rescale = 1.0 / best_;
        return rep;
    }

private:
    double block_budget_value(int block) const {
        // Largest admissible f for `block` given completed blocks and bound_.
        double phi = 0.0;
        for (int j = 0; j < block; ++j) {
            if (values_[static_cast<std::size_t>(j)] > 0.0) {
                phi += std::pow(values_[static_cast<std::size_t>(j)] / bound_, spec_.blocks[static_cast<std::size_t>(j)].exponent);
            }
        }
        const double rem = 1.0 - phi;
        if (rem <= 0.0) return rem > -1e-12 ? 0.0 : -1.0;
        return bound_ * std::pow(rem, 1.0 / spec_.blocks[static_cast<std::size_t>(block)].exponent);
    }

    // Largest |x| allowed at position pos (in real units).
    double coord_limit(int pos, double fmax) const {
        const auto& block = spec_.blocks[static_cast<std::size_t>(pos_block_[static_cast<std::size_t>(pos)])];
        const auto& g = block.gauge;
        const int i = pos_in_block_[static_cast<std::size_t>(pos)];
        if (g.kind() == bodies::BlockGauge::Kind::WeightedLq) {
            // scale^q * sum w |x|^q <= fmax^q
            const double q = g.q();
            const double room = std::pow(fmax / g.scale(), q) - lq_partial_[static_cast<std::size_t>(pos)];
            if (room <= 0.0) return 0.0;
            return std::pow(room / g.weights()[static_cast<std::size_t>(i)], 1.0 / q);
        }
        return fmax * g.coord_radius(i);
    }

    void search(int pos) {
        if (++nodes_ > opt_.node_guard) throw ResourceLimit("basis enumeration node guard exceeded", nodes_);
        const auto upos = static_cast<std::size_t>(pos);
        const int block = pos_block_[upos];
        const auto& blk = spec_.blocks[static_cast<std::size_t>(block)];
        if (pos_in_block_[upos] == 0) {
            fmax_[static_cast<std::size_t>(block)] = block_budget_value(block);
            lq_partial_[upos] = 0.0;
        }
        const double fmax = fmax_[static_cast<std::size_t>(block)];
        if (fmax < 0.0) return;
        const double xlim = coord_limit(pos, fmax) * (1.0 + 1e-9);
        const long ulim = static_cast<long>(std::floor(xlim * t_ / opt_.scale + 1e-9));
        const long h = basis_[upos][upos];
        const long base = mod(acc_[upos][upos], h);  // residue of u_pos mod h

        // Values u = base + h*m ordered by |u|.
        long lo = base - h, hi = base;
        while (true) {
            long u;
            const bool hi_ok = hi <= ulim;
            const bool lo_ok = lo >= -ulim;
            if (!hi_ok && !lo_ok) break;
            if (hi_ok && (!lo_ok || std::abs(hi) <= std::abs(lo))) {
                u = hi;
                hi += h;
            } else {
                u = lo;
                lo -= h;
            }
            descend(pos, u, blk);
        }
    }

    void descend(int pos, long u, const bodies::Block& blk) {
        const auto upos = static_cast<std::size_t>(pos);
        const long h = basis_[upos][upos];
        const long z = (u - acc_[upos][upos]) / h;
        u_[upos] = u;
        x_[upos] = opt_.scale * static_cast<double>(u) / t_;
        const auto& row = basis_[upos];
        auto& next = acc_[upos + 1];
        const auto& cur = acc_[upos];
        for (int c = pos + 1; c < n_; ++c) next[static_cast<std::size_t>(c)] = cur[static_cast<std::size_t>(c)] + z * row[static_cast<std::size_t>(c)];

        const int block = pos_block_[upos];
        const auto& g = blk.gauge;
        if (g.kind() == bodies::BlockGauge::Kind::WeightedLq && pos + 1 < n_) {
            const int i = pos_in_block_[upos];
            lq_partial_[upos + 1] = lq_partial_[upos] + g.weights()[static_cast<std::size_t>(i)] * std::pow(std::abs(x_[upos]), g.q());
        }
        if (pos_block_end_[upos]) {
            const std::size_t k = blk.coords.size();
            const double v = g(std::span<const double>(x_.data() + pos + 1 - k, k));
            if (v > fmax_[static_cast<std::size_t>(block)] * (1.0 + 1e-9) + 1e-300) return;
            values_[static_cast<std::size_t>(block)] = v;
        }
        if (pos + 1 < n_) {
            search(pos + 1);
        } else {
            leaf();
        }
    }

    void leaf() {
        bool zero = true;
        int support = 0;
        for (int i = 0; i < n_; ++i) {
            zero = zero && u_[static_cast<std::size_t>(i)] == 0;
            support += mod(u_[static_cast<std::size_t>(i)], t_) != 0;
        }
        if (zero) return;
        const double v = bodies::gauge_from_block_values(spec_, values_);
        if (v > bound_) return;
        const bool anomalous = support > 0 && support < d_;
        Numerators u(static_cast<std::size_t>(n_));
        for (int pos = 0; pos < n_; ++pos) u[static_cast<std::size_t>(perm_[static_cast<std::size_t>(pos)])] = u_[static_cast<std::size_t>(pos)];
        if (anomalous) {
            if (anomalies_ == 0) first_anomaly_ = u;
            ++anomalies_;
        }
        if (!gauge_equal(v, best_) && v < best_) {
            best_ = v;
            bound_ = v * (1.0 + kTieRel) + 1e-300;
            count_ = 0;
            integral_ = 0;
            minimal_anomalies_ = 0;
            witnesses_.clear();
        }
        if (gauge_equal(v, best_)) {
            ++count_;
            if (support == 0) ++integral_;
            if (anomalous) ++minimal_anomalies_;
            witnesses_.push_back(std::move(u));
            if (witnesses_.size() > 4 * opt_.witness_cap) cap_sorted(witnesses_, opt_.witness_cap);
        }
    }

    const LatticeD& lat_;
    const BodySpec& spec_;
    const KissingOptions& opt_;
    int n_, t_, d_;
    std::vector<int> perm_, pos_block_, pos_in_block_;
    std::vector<bool> pos_block_end_;
    std::vector<std::vector<long>> basis_;
    std::vector<std::vector<long>> acc_;
    std::vector<long> u_;
    std::vector<double> x_;
    std::vector<double> values_;
    std::vector<double> lq_partial_;
    std::vector<double> fmax_ = std::vector<double>(spec_.blocks.size(), 0.0);
    double best_ = 0.0;
    double bound_ = 0.0;
    std::uint64_t count_ = 0, integral_ = 0, nodes_ = 0;
    std::uint64_t anomalies_ = 0, minimal_anomalies_ = 0;
    Numerators first_anomaly_;
    std::vector<Numerators> witnesses_;
};

// ---------------------------------------------------------------------------
// Brute force

void check_oracle_size(const LatticeD& lat, int box) {
    if (box < 1) throw InvalidParameter("oracle box must be >= 1");
    if (lat.n() > 10) throw ResourceLimit("brute force needs n <= 10", static_cast<unsigned long long>(lat.n()));
    const double side = 2.0 * box * lat.t + 1.0;
    const double volume = std::pow(side, lat.n());
    if (volume > 1e9) throw ResourceLimit("brute-force box has too many points", static_cast<unsigned long long>(volume));
}

// Calls visit(u) for every nonzero u in [-box*t, box*t]^n whose residue
// index lies in [lo, hi) and passes the dual-membership test. Residue
// classes are visited in index order, lifts in odometer order.
template <typename Visit>
void sweep_residues(const LatticeD& lat, const DualMembership& dm, int box, std::uint64_t lo, std::uint64_t hi,
                    Visit&& visit) {
    const int n = lat.n();
    const int t = lat.t;
    const long b = static_cast<long>(box) * t;
    std::vector<std::vector<long>> lifts(static_cast<std::size_t>(n));
    std::vector<std::size_t> idx(static_cast<std::size_t>(n));
    Numerators u(static_cast<std::size_t>(n));
    for (std::uint64_t index = lo; index < hi; ++index) {
        if (!dm.contains_index(index)) continue;
        std::uint64_t rest = index;
        for (int i = 0; i < n; ++i) {
            const long r = static_cast<long>(rest % static_cast<std::uint64_t>(t));
            rest /= static_cast<std::uint64_t>(t);
            auto& l = lifts[static_cast<std::size_t>(i)];
            l.clear();
            for (long v = r - t * ((r + b) / t); v <= b; v += t) {
                if (v >= -b) l.push_back(v);
            }
            idx[static_cast<std::size_t>(i)] = 0;
            u[static_cast<std::size_t>(i)] = l.front();
        }
        while (true) {
            bool zero = index == 0;
            if (zero) {
                for (long x : u) zero = zero && x == 0;
            }
            if (!zero) visit(u);
            int i = 0;
            while (i < n && ++idx[static_cast<std::size_t>(i)] == lifts[static_cast<std::size_t>(i)].size()) {
                idx[static_cast<std::size_t>(i)] = 0;
                u[static_cast<std::size_t>(i)] = lifts[static_cast<std::size_t>(i)].front();
                ++i;
            }
            if (i == n) break;
            u[static_cast<std::size_t>(i)] = lifts[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
        }
    }
}

void block_values(const BodySpec& spec, const Numerators& u, int t, double scale, std::vector<double>& part,
                  std::vector<double>& values) {
    values.resize(spec.blocks.size());
    for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
        part.clear();
        for (int c : spec.blocks[j].coords) part.push_back(scale * static_cast<double>(u[static_cast<std::size_t>(c)]) / t);
        values[j] = spec.blocks[j].gauge(part);
    }
}

double power(double v, double p) {
    if (p == 1.0) return v;
    if (p == 2.0) return v * v;
    if (p == 3.0) return v * v * v;
    return std::pow(v, p);
}

struct OracleSlice {
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t count = 0, integral = 0, examined = 0, anomalies = 0, minimal_anomalies = 0;
    Numerators first_anomaly;
    std::vector<Numerators> witnesses;
    double min_g_frac = std::numeric_limits<double>::infinity();
    double min_g_int = std::numeric_limits<double>::infinity();
};

KissingReport kissing_brute(const LatticeD& lat, const BodySpec& spec, const KissingOptions& opt) {
    check_oracle_size(lat, opt.oracle_box);
    const DualMembership dm(lat);
    const int t = lat.t;
    const int d = lat.code.d();
    const long b = static_cast<long>(opt.oracle_box) * t;
    const auto space = static_cast<std::uint64_t>(std::pow(static_cast<double>(t), lat.n()) + 0.5);
    std::vector<OracleSlice> slices(static_cast<std::size_t>(std::min<std::uint64_t>(64, space)));

    parallel_chunks(slices.size(), resolve_threads(opt.threads), [&](std::size_t c) {
        OracleSlice& s = slices[c];
        std::vector<double> part, values;
        const std::uint64_t lo = space * c / slices.size();
        const std::uint64_t hi = space * (c + 1) / slices.size();
        sweep_residues(lat, dm, opt.oracle_box, lo, hi, [&](const Numerators& u) {
            ++s.examined;
            int support = 0;
            for (long x : u) support += mod(x, t) != 0;
            const bool anomalous = support > 0 && support < d;
            if (anomalous) {
                if (s.anomalies == 0) s.first_anomaly = u;
                ++s.anomalies;
            }
            block_values(spec, u, t, opt.scale, part, values);
            double g = 0.0;
            for (std::size_t j = 0; j < values.size(); ++j) g += power(values[j], spec.blocks[j].exponent);
            if (support == 0) {
                s.min_g_int = std::min(s.min_g_int, g);
            } else {
                s.min_g_frac = std::min(s.min_g_frac, g);
            }
            // G(x / best) > 1 means the gauge exceeds best; skip the root solve.
            if (std::isfinite(s.best)) {
                double phi = 0.0;
                for (std::size_t j = 0; j < values.size(); ++j) phi += power(values[j] / s.best, spec.blocks[j].exponent);
                if (phi > 1.0 + 1e-6) return;
            }
            const double v = bodies::gauge_from_block_values(spec, values);
            if (v < s.best && !gauge_equal(v, s.best)) {
                s.best = v;
                s.count = s.integral = s.minimal_anomalies = 0;
                s.witnesses.clear();
            }
            if (gauge_equal(v, s.best)) {
                ++s.count;
                if (support == 0) ++s.integral;
                if (anomalous) ++s.minimal_anomalies;
                s.witnesses.push_back(u);
                if (s.witnesses.size() > 4 * opt.witness_cap) cap_sorted(s.witnesses, opt.witness_cap);
            }
        });
    });

    KissingReport rep;
    rep.method = Method::BruteForce;
    rep.t = t;
    rep.scale = opt.scale;
    rep.subgroup_size = static_cast<double>(dm.size());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : slices) best = std::min(best, s.best);
    double min_g_frac = std::numeric_limits<double>::infinity();
    double min_g_int = std::numeric_limits<double>::infinity();
    std::vector<Numerators> witnesses;
    for (auto& s : slices) {
        rep.vectors_examined += s.examined;
        if (s.anomalies && rep.anomalies == 0) rep.first_anomaly = s.first_anomaly;
        rep.anomalies += s.anomalies;
        min_g_frac = std::min(min_g_frac, s.min_g_frac);
        min_g_int = std::min(min_g_int, s.min_g_int);
        if (!gauge_equal(s.best, best)) continue;
        rep.count += s.count;
        rep.integral_count += s.integral;
        rep.minimal_anomalies += s.minimal_anomalies;
        witnesses.insert(witnesses.end(), std::make_move_iterator(s.witnesses.begin()),
                         std::make_move_iterator(s.witnesses.end()));
    }
    rep.nu = best;
    rep.fractional_count = rep.count - rep.integral_count;
    rep.min_g_fractional = min_g_frac;
    rep.min_g_integral = min_g_int;
    cap_sorted(witnesses, opt.witness_cap);
    rep.witnesses = std::move(witnesses);
    rep.witnesses_truncated = rep.count > rep.witnesses.size();
    rep.rescale = 1.0 / best;
    // Every vector of gauge <= nu has |v_i| <= radius_i * nu.
    const auto owner = spec.block_of();
    for (int c = 0; c < spec.n; ++c) {
        const auto& block = spec.blocks[static_cast<std::size_t>(owner[static_cast<std::size_t>(c)])];
        const auto it = std::find(block.coords.begin(), block.coords.end(), c);
        const int i = static_cast<int>(it - block.coords.begin());
        const double reach = block.gauge.coord_radius(i) * best / opt.scale;
        const long max_num = static_cast<long>(std::floor(reach * t * (1.0 + 1e-9)));
        if (max_num > b) rep.oracle_complete = false;
    }
    return rep;
}

}  // namespace

KissingReport kissing_count(const LatticeD& lat, const BodySpec& spec, const KissingOptions& options) {
    check_spec(lat, spec);
    if (!(options.scale > 0.0)) throw InvalidParameter("scale must be positive");
    const auto start = std::chrono::steady_clock::now();
    KissingReport rep;
    Method m = options.method;
    if (m == Method::Auto) {
        const double projected = numerator_basis(lat).subgroup_size();
        m = projected <= static_cast<double>(options.coset_guard) ? Method::CosetExact : Method::BasisEnum;
    }
    switch (m) {
        case Method::CosetExact:
            rep = kissing_coset(lat, spec, options);
            break;
        case Method::BasisEnum:
            rep = BasisEnumerator(lat, spec, options).run();
            break;
        case Method::BruteForce:
            rep = kissing_brute(lat, spec, options);
            break;
        case Method::Auto:
            break;
    }
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::vector<ShortVector> brute_force_short_vectors(const LatticeD& lat, const BodySpec& spec, int box,
                                                   double max_gauge, double scale) {
    check_spec(lat, spec);
    check_oracle_size(lat, box);
    const DualMembership dm(lat);
    std::vector<ShortVector> out;
    const auto space = static_cast<std::uint64_t>(std::pow(static_cast<double>(lat.t), lat.n()) + 0.5);
    std::vector<double> part, values;
    sweep_residues(lat, dm, box, 0, space, [&](const Numerators& u) {
        block_values(spec, u, lat.t, scale, part, values);
        const double v = bodies::gauge_from_block_values(spec, values);
        if (v <= max_gauge) out.push_back({u, v});
    });
    std::sort(out.begin(), out.end(), [](const ShortVector& a, const ShortVector& b) {
        if (a.gauge != b.gauge) return a.gauge < b.gauge;
        return a.u < b.u;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Dual membership

DualMembership::DualMembership(const LatticeD& lat) : t_(lat.t), n_(lat.n()) {
    const double space = std::pow(static_cast<double>(t_), n_);
    if (space > 1e7) throw ResourceLimit("dual membership needs t^n <= 1e7", static_cast<unsigned long long>(space));
    const auto size = static_cast<std::uint64_t>(space + 0.5);
    const auto& cd = lat.code.min_weight_set();

    auto decode = [&](std::uint64_t idx, std::vector<int>& r) {
        for (int i = 0; i < n_; ++i) {
            r[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::uint64_t>(t_));
            idx /= static_cast<std::uint64_t>(t_);
        }
    };
    auto encode = [&](const std::vector<int>& r) {
        std::uint64_t idx = 0;
        for (int i = n_ - 1; i >= 0; --i) idx = idx * static_cast<std::uint64_t>(t_) + static_cast<std::uint64_t>(r[static_cast<std::size_t>(i)]);
        return idx;
    };

    // Greedy generating set of the annihilator {y : <c, y> = 0 mod t, c in C_d}.
    std::vector<bool> in_span(size, false);
    std::vector<std::uint64_t> span{0};
    in_span[0] = true;
    std::vector<int> y(static_cast<std::size_t>(n_)), s(static_cast<std::size_t>(n_));
    for (std::uint64_t idx = 1; idx < size; ++idx) {
        if (in_span[idx]) continue;
        decode(idx, y);
        bool annihilates = true;
        for (BitVec c : cd) {
            long dot = 0;
            for (int i = 0; i < n_; ++i) {
                if ((c >> i) & 1U) dot += y[static_cast<std::size_t>(i)];
            }
            if (dot % t_ != 0) {
                annihilates = false;
                break;
            }
        }
        if (!annihilates) continue;
        dual_gens_.push_back(y);
        for (std::size_t k = 0; k < span.size(); ++k) {
            decode(span[k], s);
            for (int i = 0; i < n_; ++i) s[static_cast<std::size_t>(i)] = (s[static_cast<std::size_t>(i)] + y[static_cast<std::size_t>(i)]) % t_;
            const std::uint64_t e = encode(s);
            if (!in_span[e]) {
                in_span[e] = true;
                span.push_back(e);
            }
        }
    }

    member_.assign(size, false);
    std::vector<int> r(static_cast<std::size_t>(n_));
    for (std::uint64_t idx = 0; idx < size; ++idx) {
        decode(idx, r);
        bool ok = true;
        for (const auto& g : dual_gens_) {
            long dot = 0;
            for (int i = 0; i < n_; ++i) dot += static_cast<long>(r[static_cast<std::size_t>(i)]) * g[static_cast<std::size_t>(i)];
            if (dot % t_ != 0) {
                ok = false;
                break;
            }
        }
        if (ok) {
            member_[idx] = true;
            ++members_;
        }
    }
}

bool DualMembership::contains(const std::vector<int>& residues) const {
    std::uint64_t idx = 0;
    for (int i = n_ - 1; i >= 0; --i) idx = idx * static_cast<std::uint64_t>(t_) + static_cast<std::uint64_t>(mod(residues[static_cast<std::size_t>(i)], t_));
    return member_[idx];
}

// ---------------------------------------------------------------------------

Decomposition decompose(const Numerators& u, const LatticeD& lat) {
    if (static_cast<int>(u.size()) != lat.n()) throw FormatError("vector dimension mismatch");
    if (!numerator_basis(lat).contains(u)) throw NotInLattice("vector " + format_vector(u, lat.t) + " is not in the lattice");
    Decomposition dec;
    dec.v0.assign(u.size(), 0);
    dec.v1.assign(u.size(), 0);
    int support = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dec.v0[i] = mod(u[i], lat.t);
        support += dec.v0[i] != 0;
        dec.v1[i] = (u[i] - dec.v0[i]) / lat.t;
    }
    dec.r = support > 0 ? 1 : 0;
    if (dec.r == 1 && support < lat.code.d()) {
        throw DecompositionAnomaly("fractional support " + std::to_string(support) + " < d = " +
                                       std::to_string(lat.code.d()) + " for " + format_vector(u, lat.t),
                                   u, lat.t);
    }
    return dec;
}

}  // namespace latlab::lattice
