#include "latlab/bodies.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "latlab/errors.hpp"

namespace latlab::bodies {

namespace {

constexpr double kTieRel = 1e-9;

bool nearly_equal(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
    return std::abs(a - b) <= kTieRel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

std::string fmt_real(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// Checks positive-definiteness via LDL^T pivots, relative to the largest
// diagonal entry.
void require_positive_definite(const Eigen::MatrixXd& q) {
    const Eigen::Index k = q.rows();
    if (k == 0 || q.cols() != k) throw InvalidGauge("quadratic form must be square and nonempty");
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            if (!std::isfinite(q(i, j))) throw InvalidGauge("quadratic form has non-finite entry");
            if (std::abs(q(i, j) - q(j, i)) > kPdTolerance * std::max(1.0, std::abs(q(i, j)))) {
                throw InvalidGauge("quadratic form is not symmetric");
            }
        }
    }
    const double scale = q.diagonal().cwiseAbs().maxCoeff();
    Eigen::MatrixXd work = q;
    for (Eigen::Index j = 0; j < k; ++j) {
        const double pivot = work(j, j);
        if (!(pivot > kPdTolerance * std::max(scale, 1e-300))) {
            throw InvalidGauge("quadratic form is not positive definite (pivot " +
                               fmt_real(pivot) + ")");
        }
        for (Eigen::Index i = j + 1; i < k; ++i) {
            const double factor = work(i, j) / pivot;
            for (Eigen::Index c = j; c < k; ++c) work(i, c) -= factor * work(j, c);
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// BlockGauge

BlockGauge BlockGauge::weighted_lq(double q, std::vector<double> weights, double scale) {
    if (!(q >= 1.0) || !std::isfinite(q)) throw InvalidGauge("lq exponent q must be >= 1");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidGauge("lq scale must be > 0");
    if (weights.empty()) throw InvalidGauge("lq gauge needs at least one weight");
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw InvalidGauge("weights must be > 0");
    }
    BlockGauge g;
    g.kind_ = Kind::WeightedLq;
    g.q_ = q;
    g.scale_ = scale;
    g.weights_ = std::move(weights);
    return g;
}

BlockGauge BlockGauge::max_norm(std::vector<double> weights) {
    if (weights.empty()) throw InvalidGauge("max gauge needs at least one weight");
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw InvalidGauge("weights must be > 0");
    }
    BlockGauge g;
    g.kind_ = Kind::MaxNorm;
    g.weights_ = std::move(weights);
    return g;
}

BlockGauge BlockGauge::quad_form(Eigen::MatrixXd q) {
    require_positive_definite(q);
    BlockGauge g;
    g.kind_ = Kind::QuadFormSqrt;
    g.quad_inverse_ = q.inverse();
    g.quad_ = std::move(q);
    return g;
}

int BlockGauge::arity() const {
    if (kind_ == Kind::QuadFormSqrt) return static_cast<int>(quad_.rows());
    return static_cast<int>(weights_.size());
}

double BlockGauge::operator()(std::span<const double> x) const {
    switch (kind_) {
        case Kind::WeightedLq: {
            if (weights_.size() == 1) return scale_ * std::pow(weights_[0], 1.0 / q_) * std::abs(x[0]);
            double s = 0.0;
            if (q_ == 1.0) {
                for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * std::abs(x[i]);
                return scale_ * s;
            }
            if (q_ == 2.0) {
                for (std::size_t i = 0; i < weights_.size(); ++i) s += weights_[i] * x[i] * x[i];
                return scale_ * std::sqrt(s);
            }
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                s += weights_[i] * std::pow(std::abs(x[i]), q_);
            }
            return scale_ * std::pow(s, 1.0 / q_);
        }
        case Kind::MaxNorm: {
            double m = 0.0;
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                m = std::max(m, weights_[i] * std::abs(x[i]));
            }
            return m;
        }
        case Kind::QuadFormSqrt: {
            const Eigen::Index k = quad_.rows();
            double s = 0.0;
            for (Eigen::Index i = 0; i < k; ++i) {
                double row = 0.0;
                for (Eigen::Index j = 0; j < k; ++j) row += quad_(i, j) * x[static_cast<std::size_t>(j)];
                s += x[static_cast<std::size_t>(i)] * row;
            }
            return std::sqrt(std::max(0.0, s));
        }
    }
    return 0.0;
}

double BlockGauge::unit_value(int i) const {
    switch (kind_) {
        case Kind::WeightedLq:
            return scale_ * std::pow(weights_[static_cast<std::size_t>(i)], 1.0 / q_);
        case Kind::MaxNorm:
            return weights_[static_cast<std::size_t>(i)];
        case Kind::QuadFormSqrt:
            return std::sqrt(quad_(i, i));
    }
    return 0.0;
}

double BlockGauge::coord_radius(int i) const {
    switch (kind_) {
        case Kind::WeightedLq:
        case Kind::MaxNorm:
            return 1.0 / unit_value(i);
        case Kind::QuadFormSqrt:
            return std::sqrt(quad_inverse_(i, i));
    }
    return 0.0;
}

double BlockGauge::radius() const {
    double r = 0.0;
    for (int i = 0; i < arity(); ++i) r = std::max(r, coord_radius(i));
    return r;
}

namespace {

std::string real_list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += fmt_real(v[i]);
    }
    return s + "]";
}

}  // namespace

std::string BlockGauge::to_dsl() const {
    switch (kind_) {
        case Kind::WeightedLq: {
            std::string s = "lq q=" + fmt_real(q_) + " w=" + real_list(weights_);
            if (scale_ != 1.0) s += " scale=" + fmt_real(scale_);
            return s;
        }
        case Kind::MaxNorm:
            return "max w=" + real_list(weights_);
        case Kind::QuadFormSqrt: {
            std::string s = "quad Q=[";
            for (Eigen::Index i = 0; i < quad_.rows(); ++i) {
                if (i) s += ",";
                std::vector<double> row(static_cast<std::size_t>(quad_.cols()));
                for (Eigen::Index j = 0; j < quad_.cols(); ++j) row[static_cast<std::size_t>(j)] = quad_(i, j);
                s += real_list(row);
            }
            return s + "]";
        }
    }
    return {};
}

std::string BlockGauge::describe() const {
    std::ostringstream os;
    os << std::setprecision(6);
    switch (kind_) {
        case Kind::WeightedLq:
            os << "weighted l_" << q_ << " (scale " << scale_ << ", weights " << real_list(weights_) << ")";
            break;
        case Kind::MaxNorm:
            os << "weighted max (weights " << real_list(weights_) << ")";
            break;
        case Kind::QuadFormSqrt:
            os << "sqrt quadratic form " << to_dsl().substr(5);
            break;
    }
    return os.str();
}

bool BlockGauge::operator==(const BlockGauge& other) const {
    if (kind_ != other.kind_ || arity() != other.arity()) return false;
    switch (kind_) {
        case Kind::WeightedLq:
            return q_ == other.q_ && scale_ == other.scale_ && weights_ == other.weights_;
        case Kind::MaxNorm:
            return weights_ == other.weights_;
        case Kind::QuadFormSqrt:
            return quad_ == other.quad_;
    }
    return false;
}

// ---------------------------------------------------------------------------
// BodySpec

bool BodySpec::common_exponent() const {
    return std::all_of(blocks.begin(), blocks.end(),
                       [&](const Block& b) { return b.exponent == blocks.front().exponent; });
}

bool BodySpec::is_separable_lp() const {
    return common_exponent() &&
           std::all_of(blocks.begin(), blocks.end(), [](const Block& b) { return b.coords.size() == 1; });
}

double BodySpec::min_exponent() const {
    double p = std::numeric_limits<double>::infinity();
    for (const auto& b : blocks) p = std::min(p, b.exponent);
    return p;
}

double BodySpec::max_exponent() const {
    double p = 0.0;
    for (const auto& b : blocks) p = std::max(p, b.exponent);
    return p;
}

std::vector<int> BodySpec::block_of() const {
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        for (int c : blocks[j].coords) owner[static_cast<std::size_t>(c)] = static_cast<int>(j);
    }
    return owner;
}

void validate(const BodySpec& spec) {
    if (spec.n < 1) throw FormatError("body dimension must be positive");
    if (spec.blocks.empty()) throw FormatError("body has no blocks");
    std::vector<int> owner(static_cast<std::size_t>(spec.n), -1);
    for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
        const auto& b = spec.blocks[j];
        if (!(b.exponent >= 1.0) || !std::isfinite(b.exponent)) {
            throw InvalidGauge("block " + std::to_string(j + 1) + ": exponent p must be >= 1");
        }
        if (b.coords.empty()) throw FormatError("block " + std::to_string(j + 1) + " has no coordinates");
        if (static_cast<int>(b.coords.size()) != b.gauge.arity()) {
            throw InvalidGauge("block " + std::to_string(j + 1) + ": gauge arity " +
                               std::to_string(b.gauge.arity()) + " does not match " +
                               std::to_string(b.coords.size()) + " coordinates");
        }
        for (int c : b.coords) {
            if (c < 0 || c >= spec.n) {
                throw PartitionError("coordinate " + std::to_string(c + 1) + " outside 1.." +
                                     std::to_string(spec.n));
            }
            auto& o = owner[static_cast<std::size_t>(c)];
            if (o != -1) {
                throw PartitionError("coordinate " + std::to_string(c + 1) + " appears in blocks " +
                                     std::to_string(o + 1) + " and " + std::to_string(j + 1));
            }
            o = static_cast<int>(j);
        }
    }
    for (int c = 0; c < spec.n; ++c) {
        if (owner[static_cast<std::size_t>(c)] == -1) {
            throw PartitionError("coordinate " + std::to_string(c + 1) + " is not covered by any block");
        }
    }
}

BodySpec lp_body(int n, double p) {
    if (!(p >= 1.0)) throw InvalidGauge("l_p needs p >= 1");
    if (n < 1) throw FormatError("dimension must be positive");
    BodySpec spec;
    spec.n = n;
    for (int i = 0; i < n; ++i) {
        spec.blocks.push_back(Block{{i}, BlockGauge::weighted_lq(1.0, {1.0}), p});
    }
    return spec;
}

std::string to_dsl(const BodySpec& spec) {
    std::ostringstream os;
    os << "dim=" << spec.n << "\n";
    for (const auto& b : spec.blocks) {
        os << "block [";
        for (std::size_t i = 0; i < b.coords.size(); ++i) os << (i ? "," : "") << b.coords[i] + 1;
        os << "] " << b.gauge.to_dsl() << " p=" << fmt_real(b.exponent) << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class StatementParser {
public:
    StatementParser(std::string_view text, int line) : s_(text), line_(line) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw FormatError("body line " + std::to_string(line_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= s_.size();
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    std::string word() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (start == pos_) fail("expected a keyword");
        return std::string(s_.substr(start, pos_ - start));
    }
    double real() {
        skip_ws();
        if (s_.substr(pos_, 5) == "sqrt(") {
            pos_ += 5;
            const double inner = real();
            expect(')');
            if (inner < 0) fail("sqrt of a negative number");
            return std::sqrt(inner);
        }
        const char* begin = s_.data() + pos_;
        char* end = nullptr;
        const std::string tail(begin, s_.size() - pos_);
        const double v = std::strtod(tail.c_str(), &end);
        const auto used = static_cast<std::size_t>(end - tail.c_str());
        if (used == 0) fail("expected a number");
        pos_ += used;
        if (!std::isfinite(v)) fail("non-finite number");
        return v;
    }
    std::vector<double> real_list() {
        expect('[');
        std::vector<double> out;
        if (peek(']')) fail("empty list");
        out.push_back(real());
        while (peek(',')) {
            ++pos_;
            out.push_back(real());
        }
        expect(']');
        return out;
    }
    std::vector<int> index_list() {
        expect('[');
        std::vector<int> out;
        do {
            if (!out.empty()) ++pos_;
            const double v = real();
            if (v != std::floor(v) || v < 1 || v > 1e6) fail("coordinate indices are integers >= 1");
            out.push_back(static_cast<int>(v) - 1);
        } while (peek(','));
        expect(']');
        return out;
    }
    void key(const std::string& name) {
        const std::string w = word();
        if (w != name) fail("expected '" + name + "=', got '" + w + "'");
        expect('=');
    }
    // Next "key=" name without consuming it; empty if at end.
    std::string peek_key() {
        skip_ws();
        const std::size_t save = pos_;
        if (at_end()) return {};
        std::string w = word();
        pos_ = save;
        return w;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    int line_;
};

Block parse_block(std::string_view stmt, int line) {
    StatementParser p(stmt, line);
    if (p.word() != "block") p.fail("statement must start with 'block'");
    Block block;
    block.coords = p.index_list();
    const std::string kind = p.word();
    bool have_p = false;
    if (kind == "lq") {
        p.key("q");
        const double q = p.real();
        p.key("w");
        auto w = p.real_list();
        double scale = 1.0;
        if (p.peek_key() == "scale") {
            p.key("scale");
            scale = p.real();
        }
        block.gauge = BlockGauge::weighted_lq(q, std::move(w), scale);
    } else if (kind == "max") {
        p.key("w");
        block.gauge = BlockGauge::max_norm(p.real_list());
    } else if (kind == "quad") {
        p.key("Q");
        p.expect('[');
        std::vector<std::vector<double>> rows;
        do {
            if (!rows.empty()) p.expect(',');
            rows.push_back(p.real_list());
        } while (p.peek(','));
        p.expect(']');
        const auto k = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd q(k, k);
        for (Eigen::Index i = 0; i < k; ++i) {
            if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != k) {
                p.fail("Q must be square");
            }
            for (Eigen::Index j = 0; j < k; ++j) q(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        block.gauge = BlockGauge::quad_form(std::move(q));
    } else {
        p.fail("unknown gauge kind '" + kind + "'");
    }
    if (p.peek_key() == "p") {
        p.key("p");
        block.exponent = p.real();
        have_p = true;
    }
    if (!have_p) p.fail("missing exponent p=");
    if (!p.at_end()) p.fail("trailing text");
    if (!(block.exponent >= 1.0)) throw InvalidGauge("body line " + std::to_string(line) + ": p must be >= 1");
    return block;
}

}  // namespace

BodySpec parse_body_spec(const std::string& text) {
    BodySpec spec;
    int explicit_dim = 0;
    int max_index = 0;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::size_t start = 0;
        while (start <= raw.size()) {
            std::size_t end = raw.find(';', start);
            if (end == std::string::npos) end = raw.size();
            std::string_view stmt(raw.data() + start, end - start);
            while (!stmt.empty() && std::isspace(static_cast<unsigned char>(stmt.front()))) stmt.remove_prefix(1);
            while (!stmt.empty() && std::isspace(static_cast<unsigned char>(stmt.back()))) stmt.remove_suffix(1);
            if (!stmt.empty()) {
                if (stmt.substr(0, 4) == "dim=") {
                    StatementParser p(stmt.substr(4), line_no);
                    const double v = p.real();
                    if (v != std::floor(v) || v < 1 || v > 64) p.fail("dim must be an integer in 1..64");
                    explicit_dim = static_cast<int>(v);
                } else {
                    Block b = parse_block(stmt, line_no);
                    for (int c : b.coords) max_index = std::max(max_index, c + 1);
                    spec.blocks.push_back(std::move(b));
                }
            }
            start = end + 1;
        }
    }
    if (spec.blocks.empty()) throw FormatError("body has no blocks");
    spec.n = explicit_dim ? explicit_dim : max_index;
    validate(spec);
    return spec;
}

BodySpec read_body_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open body file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_body_spec(buf.str());
}

BodySpec load_body(const std::string& spec, int n_hint) {
    if (spec.rfind("lp:", 0) == 0) {
        std::string rest = spec.substr(3);
        int n = n_hint;
        if (auto colon = rest.find(':'); colon != std::string::npos) {
            n = std::stoi(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        char* end = nullptr;
        const double p = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str() || *end != '\0') throw FormatError("bad l_p body '" + spec + "'");
        return lp_body(n, p);
    }
    return read_body_file(spec);
}

// ---------------------------------------------------------------------------
// Evaluation

double body_functional(const BodySpec& spec, std::span<const double> x) {
    if (static_cast<int>(x.size()) != spec.n) {
        throw FormatError("vector has dimension " + std::to_string(x.size()) + ", body has " +
                          std::to_string(spec.n));
    }
    double g = 0.0;
    std::vector<double> part;
    for (const auto& b : spec.blocks) {
        part.clear();
        for (int c : b.coords) part.push_back(x[static_cast<std::size_t>(c)]);
        g += std::pow(b.gauge(part), b.exponent);
    }
    return g;
}

double gauge_bisection(const BodySpec& spec, std::span<const double> values) {
    double total = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) total += std::pow(values[j], spec.blocks[j].exponent);
    if (total == 0.0) return 0.0;
    // phi(lambda) = G(x / lambda) is strictly decreasing; phi >= 1 at lo and
    // phi <= 1 at hi for this bracket (each term scales as lambda^{-p_j}).
    const double root = std::pow(total, 1.0 / spec.min_exponent());
    double lo = std::min(1.0, root);
    double hi = std::max(1.0, root);
    auto phi = [&](double lambda) {
        double s = 0.0;
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (values[j] != 0.0) s += std::pow(values[j] / lambda, spec.blocks[j].exponent);
        }
        return s;
    };
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (phi(mid) > 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double gauge_from_block_values(const BodySpec& spec, std::span<const double> values) {
    if (spec.common_exponent()) {
        const double p = spec.blocks.front().exponent;
        double s = 0.0;
        if (p == 1.0) {
            for (double v : values) s += v;
            return s;
        }
        if (p == 2.0) {
            for (double v : values) s += v * v;
            return std::sqrt(s);
        }
        for (double v : values) s += std::pow(v, p);
        return std::pow(s, 1.0 / p);
    }
    return gauge_bisection(spec, values);
}

double gauge(const BodySpec& spec, std::span<const double> x) {
    if (static_cast<int>(x.size()) != spec.n) {
        throw FormatError("vector has dimension " + std::to_string(x.size()) + ", body has " +
                          std::to_string(spec.n));
    }
    std::vector<double> values;
    std::vector<double> part;
    for (const auto& b : spec.blocks) {
        part.clear();
        for (int c : b.coords) part.push_back(x[static_cast<std::size_t>(c)]);
        values.push_back(b.gauge(part));
    }
    return gauge_from_block_values(spec, values);
}

// ---------------------------------------------------------------------------
// Monotonicity and integer minimum

MonotonicityResult check_monotonicity(const BlockGauge& gauge, int pivot) {
    if (pivot < 0 || pivot >= gauge.arity()) throw FormatError("pivot outside gauge arity");
    MonotonicityResult r;
    r.base_value = gauge.unit_value(pivot);
    r.min_value = r.base_value;
    if (gauge.kind() != BlockGauge::Kind::QuadFormSqrt || gauge.arity() == 1) return r;

    // min_a Q(1, a) = Q_pp - Q_pr Q_rr^{-1} Q_rp, attained at a = -Q_rr^{-1} Q_rp.
    const Eigen::MatrixXd& q = gauge.matrix();
    const Eigen::Index k = q.rows();
    std::vector<Eigen::Index> rest;
    for (Eigen::Index i = 0; i < k; ++i) {
        if (i != pivot) rest.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(rest.size());
    Eigen::MatrixXd q_rr(m, m);
    Eigen::VectorXd q_rp(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        q_rp(i) = q(rest[static_cast<std::size_t>(i)], pivot);
        for (Eigen::Index j = 0; j < m; ++j) q_rr(i, j) = q(rest[static_cast<std::size_t>(i)], rest[static_cast<std::size_t>(j)]);
    }
    const Eigen::VectorXd a = -q_rr.ldlt().solve(q_rp);
    const double q_pp = q(pivot, pivot);
    const double schur = q_pp + q_rp.dot(a);
    r.min_value = std::sqrt(std::max(0.0, schur));
    if (schur < q_pp * (1.0 - 1e-12)) {
        r.pass = false;
        r.witness.assign(static_cast<std::size_t>(k), 0.0);
        r.witness[static_cast<std::size_t>(pivot)] = 1.0;
        for (Eigen::Index i = 0; i < m; ++i) r.witness[static_cast<std::size_t>(rest[static_cast<std::size_t>(i)])] = a(i);
    }
    return r;
}

IntegerMinimum min_integer_gauge(const BlockGauge& gauge) {
    const int k = gauge.arity();
    if (k > kMaxEnumArity) {
        throw ResourceLimit("integer minimum needs arity <= " + std::to_string(kMaxEnumArity) +
                                ", got " + std::to_string(k),
                            static_cast<unsigned long long>(k));
    }
    double upper = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) upper = std::min(upper, gauge.unit_value(i));
    // Any z with f(z) <= upper has |z_i| <= coord_radius(i) * upper.
    std::vector<long> half(static_cast<std::size_t>(k));
    double volume = 1.0;
    long box = 0;
    for (int i = 0; i < k; ++i) {
        half[static_cast<std::size_t>(i)] =
            static_cast<long>(std::ceil(gauge.coord_radius(i) * upper * (1.0 + 1e-12)));
        box = std::max(box, half[static_cast<std::size_t>(i)]);
        volume *= static_cast<double>(2 * half[static_cast<std::size_t>(i)] + 1);
    }
    if (volume > 1e8) {
        throw ResourceLimit("integer minimum search box too large", static_cast<unsigned long long>(volume));
    }

    IntegerMinimum out;
    out.box = box;
    out.rho = std::numeric_limits<double>::infinity();
    std::vector<long> z(static_cast<std::size_t>(k));
    std::vector<double> x(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) z[static_cast<std::size_t>(i)] = -half[static_cast<std::size_t>(i)];
    while (true) {
        bool nonzero = false;
        for (int i = 0; i < k; ++i) {
            x[static_cast<std::size_t>(i)] = static_cast<double>(z[static_cast<std::size_t>(i)]);
            nonzero = nonzero || z[static_cast<std::size_t>(i)] != 0;
        }
        if (nonzero) {
            const double v = gauge(x);
            if (v < out.rho && !nearly_equal(v, out.rho)) {
                out.rho = v;
                out.minimizers.clear();
            }
            if (nearly_equal(v, out.rho)) out.minimizers.push_back(z);
        }
        int i = 0;
        while (i < k && z[static_cast<std::size_t>(i)] == half[static_cast<std::size_t>(i)]) {
            z[static_cast<std::size_t>(i)] = -half[static_cast<std::size_t>(i)];
            ++i;
        }
        if (i == k) break;
        ++z[static_cast<std::size_t>(i)];
    }
    // Drop entries recorded before a later, slightly smaller tie value.
    std::erase_if(out.minimizers, [&](const std::vector<long>& m) {
        std::vector<double> xm(m.begin(), m.end());
        return !nearly_equal(gauge(xm), out.rho);
    });
    std::sort(out.minimizers.begin(), out.minimizers.end());
    return out;
}

int default_pivot(const BlockGauge& gauge) {
    int best = -1;
    for (int i = 0; i < gauge.arity(); ++i) {
        if (!check_monotonicity(gauge, i).pass) continue;
        if (best < 0 || gauge.unit_value(i) < gauge.unit_value(best)) best = i;
    }
    return best;
}

}  // namespace latlab::bodies
