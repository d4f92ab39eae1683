#include "latlab/asymptotics.hpp"

#include <cmath>
#include <functional>

#include "latlab/errors.hpp"

namespace latlab::asymptotics {

namespace {

void require_delta(long double delta) {
    if (!(delta > 0.0L && delta < 1.0L)) throw DomainError("delta must lie in (0, 1)");
}

void require_s(int s) {
    if (s < 3) throw DomainError("s must be >= 3, got " + std::to_string(s));
}

long double bisect(const std::function<long double(long double)>& f, long double lo, long double hi,
                   long double tol) {
    long double flo = f(lo);
    const long double fhi = f(hi);
    if ((flo < 0) == (fhi < 0)) throw NumericalError("root is not bracketed");
    while (hi - lo > tol) {
        const long double mid = 0.5L * (lo + hi);
        const long double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5L * (lo + hi);
}

}  // namespace

long double binary_entropy(long double delta) {
    require_delta(delta);
    return -delta * std::log2(delta) - (1.0L - delta) * std::log2(1.0L - delta);
}

long double exponent_Es(int s, long double delta) {
    require_s(s);
    require_delta(delta);
    const long double two_s = std::ldexp(1.0L, s);
    const long double q = std::ldexp(1.0L, 2 * s);
    return binary_entropy(delta) - 2.0L * s / (two_s - 1.0L) - std::log2(q / (q - 1.0L));
}

ExponentMax exponent_E(long double delta, int s_max) {
    require_delta(delta);
    if (s_max < 3) throw DomainError("s_max must be >= 3");
    ExponentMax best{-INFINITY, 0};
    for (int s = 3; s <= s_max; ++s) {
        const long double v = std::ldexp(exponent_Es(s, delta), -2 * s);
        if (v > best.value) best = {v, s};
    }
    return best;
}

long double constant_M() { return std::ldexp(exponent_Es(3, 0.5L), -6); }

long double constant_M_closed_form_power() {
    return std::pow(63.0L * std::exp2(-41.0L / 7.0L), 1.0L / 64.0L);
}

long double constant_c(long double mu) {
    if (!(mu > 0.0L && mu <= 1.0L)) throw DomainError("mu must lie in (0, 1]");
    return std::exp2(constant_M() * mu);
}

EsZeros zeros_of_Es(int s) {
    require_s(s);
    auto f = [s](long double d) { return exponent_Es(s, d); };
    const long double eps = 1e-15L;
    if (!(f(0.5L) > 0)) throw NumericalError("E_s(1/2) is not positive");
    EsZeros z;
    z.delta1 = bisect(f, eps, 0.5L, 1e-10L);
    z.delta2 = bisect(f, 0.5L, 1.0L - eps, 1e-10L);
    z.residual1 = std::fabs(f(z.delta1));
    z.residual2 = std::fabs(f(z.delta2));
    z.below_cap = z.delta2 < 1.0L - std::ldexp(1.0L, -2 * s);
    return z;
}

long rate_crossover() {
    const long double m = constant_M();
    // 2^{Mn} <= n^2+n for every n in [1, n*), first exceeded at n*.
    for (long n = 1;; ++n) {
        const long double nn = static_cast<long double>(n);
        if (m * nn > std::log2(nn * nn + nn)) return n;
        if (n > 100000000L) throw NumericalError("crossover scan did not terminate");
    }
}

BoundTable bound_table(const std::vector<long>& n_values) {
    BoundTable table;
    const long double m = constant_M();
    for (long n : n_values) {
        if (n < 1) throw DomainError("n must be >= 1");
        const long double nn = static_cast<long double>(n);
        BoundRow r;
        r.n = n;
        r.swinnerton_dyer = nn * nn + nn;
        r.rate_log2 = m * nn;
        r.rate = std::exp2(r.rate_log2);
        r.rate_1015 = std::pow(1.015L, nn);
        r.rate_exceeds_sd = r.rate > r.swinnerton_dyer;
        table.rows.push_back(r);
    }
    table.crossover = rate_crossover();
    return table;
}

}  // namespace latlab::asymptotics
