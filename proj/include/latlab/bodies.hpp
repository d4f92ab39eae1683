#pragma once

// Generalized superballs {x : sum_j f_j(x_{S_j})^{p_j} <= 1} over a partition
// {S_j} of the coordinates, and their Minkowski functional (gauge).

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace latlab::bodies {

// Relative pivot tolerance of the positive-definiteness test.
inline constexpr double kPdTolerance = 1e-12;
// Largest block arity accepted by the integer-point enumerations.
inline constexpr int kMaxEnumArity = 8;

class BlockGauge {
public:
    enum class Kind { WeightedLq, MaxNorm, QuadFormSqrt };

    // scale * (sum_i w_i |x_i|^q)^(1/q)
    static BlockGauge weighted_lq(double q, std::vector<double> weights, double scale = 1.0);
    // max_i w_i |x_i|
    static BlockGauge max_norm(std::vector<double> weights);
    // sqrt(x^T Q x)
    static BlockGauge quad_form(Eigen::MatrixXd q);

    Kind kind() const { return kind_; }
    int arity() const;
    double q() const { return q_; }
    double scale() const { return scale_; }
    const std::vector<double>& weights() const { return weights_; }
    const Eigen::MatrixXd& matrix() const { return quad_; }

    double operator()(std::span<const double> x) const;

    // f(e_i).
    double unit_value(int i) const;
    // max{|x_i| : f(x) <= 1}; f(x) >= |x_i| / coord_radius(i).
    double coord_radius(int i) const;
    // max_i coord_radius(i).
    double radius() const;

    // Short human-readable form, and the DSL form accepted by the parser.
    std::string describe() const;
    std::string to_dsl() const;

    bool operator==(const BlockGauge& other) const;

private:
    Kind kind_ = Kind::WeightedLq;
    double q_ = 1.0;
    double scale_ = 1.0;
    std::vector<double> weights_;
    Eigen::MatrixXd quad_;
    Eigen::MatrixXd quad_inverse_;
};

struct Block {
    std::vector<int> coords;  // 0-based, in block order
    BlockGauge gauge;
    double exponent = 1.0;
};

struct BodySpec {
    int n = 0;
    std::vector<Block> blocks;

    // True when all blocks are singletons with one common exponent, i.e. a
    // weighted l_p ball.
    bool is_separable_lp() const;
    // True when every block shares one exponent; the gauge then has the
    // closed form G(x)^(1/p).
    bool common_exponent() const;
    double min_exponent() const;
    double max_exponent() const;
    // block index of each coordinate
    std::vector<int> block_of() const;
};

// Throws PartitionError / InvalidGauge / FormatError.
void validate(const BodySpec& spec);

// The l_p ball in dimension n as n singleton blocks f = |.|, exponent p.
BodySpec lp_body(int n, double p);

// Line-oriented DSL. Lines (or ';'-separated statements):
//   block [i,j,...] lq q=<r> w=[<r>,...] [scale=<r>] p=<r>
//   block [i,...]   max w=[<r>,...] p=<r>
//   block [i,...]   quad Q=[[<r>,...],[...]] p=<r>
// Indices are 1-based. A real may be written sqrt(<r>). '#' starts a comment.
// The dimension is the largest index unless `dim=<n>` appears on its own line.
BodySpec parse_body_spec(const std::string& text);
BodySpec read_body_file(const std::string& path);
// "lp:<p>:<n>" or a DSL file path. `n_hint` supplies n for "lp:<p>".
BodySpec load_body(const std::string& spec, int n_hint);

std::string to_dsl(const BodySpec& spec);

// G(x) = sum_j f_j(x_j)^{p_j}.
double body_functional(const BodySpec& spec, std::span<const double> x);

// Minkowski functional of {G <= 1}.
double gauge(const BodySpec& spec, std::span<const double> x);
// Same, from the per-block values f_j(x_j); the gauge is strictly increasing
// in each of them.
double gauge_from_block_values(const BodySpec& spec, std::span<const double> values);
// Bisection route regardless of the closed form; exposed for cross-checks.
double gauge_bisection(const BodySpec& spec, std::span<const double> values);

struct MonotonicityResult {
    bool pass = true;
    double base_value = 0.0;     // f(e_pivot)
    double min_value = 0.0;      // min over a of f(x), x_pivot = 1
    std::vector<double> witness; // minimizing x on failure
};

// Tests f(e_pivot) <= f(x) for every x with x_pivot = 1.
MonotonicityResult check_monotonicity(const BlockGauge& gauge, int pivot);

struct IntegerMinimum {
    double rho = 0.0;
    std::vector<std::vector<long>> minimizers;  // all z with f(z) = rho, sorted
    long box = 0;                                // search half-width used
};

// min{f(z) : z integer, z != 0}. Throws ResourceLimit above kMaxEnumArity.
IntegerMinimum min_integer_gauge(const BlockGauge& gauge);

// Default embedding pivot: the coordinate of least f(e_i) among those passing
// check_monotonicity; -1 if none passes.
int default_pivot(const BlockGauge& gauge);

}  // namespace latlab::bodies
