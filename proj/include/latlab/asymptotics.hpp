#pragma once

// Exponent functions of the code-rate bound and the constants derived from
// them. Logarithms are binary; arithmetic is in long double.

#include <string>
#include <vector>

namespace latlab::asymptotics {

inline constexpr int kDefaultSMax = 40;

// H(δ) = -δ log δ - (1-δ) log(1-δ). Throws DomainError unless 0 < δ < 1.
long double binary_entropy(long double delta);

// E_s(δ) = H(δ) - 2s/(2^s - 1) - log(2^{2s} / (2^{2s} - 1)), s >= 3.
long double exponent_Es(int s, long double delta);

struct ExponentMax {
    long double value = 0.0L;
    int argmax = 0;
};

// max_{3 <= s <= s_max} 2^{-2s} E_s(δ).
ExponentMax exponent_E(long double delta, int s_max = kDefaultSMax);

// M = E_3(1/2) / 64 = (1/7 - log(64/63)) / 64.
long double constant_M();
// 2^M by the product form (63 * 2^{-41/7})^{1/64}.
long double constant_M_closed_form_power();
// c(μ) = 2^{Mμ}, 0 < μ <= 1.
long double constant_c(long double mu = 1.0L);

struct EsZeros {
    long double delta1 = 0.0L;
    long double delta2 = 0.0L;
    long double residual1 = 0.0L;  // |E_s(δ1)|
    long double residual2 = 0.0L;
    bool below_cap = false;        // δ2 < 1 - 2^{-2s}
};

// The two sign changes of E_s on (0, 1), bisected to 1e-10.
EsZeros zeros_of_Es(int s);

struct BoundRow {
    long n = 0;
    long double swinnerton_dyer = 0.0L;  // n^2 + n
    long double rate_log2 = 0.0L;        // M n
    long double rate = 0.0L;             // 2^{M n}
    long double rate_1015 = 0.0L;        // 1.015^n
    bool rate_exceeds_sd = false;
};

struct BoundTable {
    std::vector<BoundRow> rows;
    long crossover = 0;  // least n >= 1 with 2^{Mn} > n^2 + n
};

BoundTable bound_table(const std::vector<long>& n_values);

// Least n >= 1 with 2^{Mn} > n^2 + n.
long rate_crossover();

}  // namespace latlab::asymptotics
