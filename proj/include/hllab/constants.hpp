#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hllab/exponents.hpp"
#include "hllab/field.hpp"
#include "hllab/rational.hpp"

namespace hllab {

namespace detail {

// Lanczos approximation (g = 7, 9 terms).  Relative error is well below
// 1e-12 on the positive axis, which is all the constant bounds need.
inline double log_gamma(double x) {
  static const double g = 7.0;
  static const double coef[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (std::isnan(x) || x <= 0.0) throw std::domain_error("log_gamma requires x > 0");
  if (x < 0.5) {
    // reflection: log Gamma(x) = log(pi / sin(pi x)) - log Gamma(1 - x)
    return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
  }
  double z = x - 1.0;
  double a = coef[0];
  for (int i = 1; i < 9; ++i) a += coef[i] / (z + i);
  double t = z + g + 0.5;
  return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(a);
}

inline double gamma_fn(double x) { return std::exp(log_gamma(x)); }

}  // namespace detail

// Crossover exponent p0 of the real Khintchine constant: the branch formulas
// agree exactly when Gamma((1+p)/2) = sqrt(pi)/2, which has roots p0 ~ 1.8474
// and p = 2.  Bisection on [1.5, 1.999] isolates the first one.
inline double khintchine_crossover() {
  static const double p0 = [] {
    const double target = std::sqrt(M_PI) / 2.0;
    auto f = [&](double p) { return detail::gamma_fn((1.0 + p) / 2.0) - target; };
    double lo = 1.5, hi = 1.999;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      double mid = 0.5 * (lo + hi);
      (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }();
  return p0;
}

// Best constant A with ||f||_2 <= A ||f||_p for random-sign sums.
// Real: 2^{1/p-1/2} for 0 < p <= p0, else (1/sqrt 2)(Gamma((1+p)/2)/sqrt pi)^{-1/p}.
// Complex (Steinhaus): Gamma((1+p)/2)^{-1/p} on 1 < p <= 2.
[[nodiscard]] inline double khintchine(double p, Field field) {
  if (field == Field::real) {
    if (!(p > 0.0) || p > 2.0)
      throw std::domain_error("real Khintchine constant requires 0 < p <= 2");
    if (p <= khintchine_crossover()) return std::pow(2.0, 1.0 / p - 0.5);
    return (1.0 / std::sqrt(2.0)) *
           std::pow(detail::gamma_fn((1.0 + p) / 2.0) / std::sqrt(M_PI), -1.0 / p);
  }
  if (!(p > 1.0) || p > 2.0)
    throw std::domain_error("complex Khintchine constant requires 1 < p <= 2");
  return std::pow(detail::gamma_fn((1.0 + p) / 2.0), -1.0 / p);
}

struct KhintchineQuery {
  double p = 2.0;
  Field field = Field::real;
};

[[nodiscard]] inline double khintchine(const KhintchineQuery& q) {
  return khintchine(q.p, q.field);
}

// Inputs of the vector-valued recursion: cotype data of the codomain plus a
// caller-supplied table of Kahane constants K_{p,q} (only the scalar
// Khintchine specialization ships built in).
struct VectorConstantContext {
  double q = 2.0;       // cotype exponent of the codomain
  double C_qY = 1.0;    // its cotype constant
  double pi_r1 = 1.0;   // (r,1)-summing norm of the inclusion
  double r = 1.0;       // summing index, in [1, q]
  std::function<double(double, double)> kahane;  // (p, q) -> K_{p,q}

  void validate() const {
    if (!(C_qY >= 1.0)) throw std::domain_error("cotype constant must be >= 1");
    if (!(pi_r1 > 0.0)) throw std::domain_error("summing norm must be positive");
    if (!(r >= 1.0) || !(r <= q)) throw std::domain_error("requires 1 <= r <= q");
    if (!kahane) throw std::domain_error("missing Kahane constant function");
  }
};

[[nodiscard]] inline VectorConstantContext scalar_context(Field field) {
  VectorConstantContext ctx;
  ctx.kahane = [field](double p, double) { return khintchine(p, field); };
  return ctx;
}

// One induction step m <- k of the multilinear constant:
//   C_m <= (C_qY K_{s_k,2})^{m-k} C_k,   s_k = q r k / (q + (k-1) r).
[[nodiscard]] inline double bh_recursion(int m, int k, const VectorConstantContext& ctx,
                                         double C_k) {
  ctx.validate();
  if (k < 1 || k >= m) throw std::domain_error("bh_recursion requires 1 <= k < m");
  if (!(C_k > 0.0)) throw std::domain_error("bh_recursion requires C_k > 0");
  double s_k = ctx.q * ctx.r * k / (ctx.q + (k - 1) * ctx.r);
  return std::pow(ctx.C_qY * ctx.kahane(s_k, 2.0), m - k) * C_k;
}

struct BestRecursion {
  int k = 0;
  double value = 0.0;
};

// Minimizes the recursion over the split point, given C_1..C_{m-1}.  Splits
// whose Kahane lookup is outside its domain (complex scalars at k = 1 need
// p = 1) are skipped rather than failing the whole minimization.
[[nodiscard]] inline BestRecursion best_recursion(int m, const VectorConstantContext& ctx,
                                                  const std::vector<double>& C_table) {
  if (m < 2) throw std::domain_error("best_recursion requires m >= 2");
  if (C_table.size() < static_cast<std::size_t>(m - 1))
    throw std::domain_error("best_recursion requires C_1..C_{m-1}");
  BestRecursion best;
  for (int k = 1; k < m; ++k) {
    double v;
    try {
      v = bh_recursion(m, k, ctx, C_table[k - 1]);
    } catch (const std::domain_error&) {
      continue;
    }
    if (best.k == 0 || v < best.value) best = {k, v};
  }
  if (best.k == 0) throw std::domain_error("best_recursion: no evaluable split point");
  return best;
}

// The non-recursive vector-valued bound (sqrt2 C_qY)^{m-1} pi_r1.
[[nodiscard]] inline double theorem61_constant(int m, const VectorConstantContext& ctx) {
  ctx.validate();
  if (m < 1) throw std::domain_error("theorem61_constant requires m >= 1");
  return std::pow(std::sqrt(2.0) * ctx.C_qY, m - 1) * ctx.pi_r1;
}

// Classic scalar Bohnenblust-Hille constant bound.
// Complex: prod_{j=2}^m Gamma(2 - 1/j)^{j/(2-2j)} (the j-th factor is the
// Steinhaus constant at 2(j-1)/j).  Real: the recursion chain with real
// Khintchine constants, C_1 = 1, i.e. prod_{j=2}^m A_{R,2(j-1)/j}.
[[nodiscard]] inline double bh_constant_classic(int m, Field field) {
  if (m < 1) throw std::domain_error("bh_constant_classic requires m >= 1");
  if (field == Field::complex) {
    double c = 1.0;
    for (int j = 2; j <= m; ++j)
      c *= std::pow(detail::gamma_fn(2.0 - 1.0 / j), j / (2.0 - 2.0 * j));
    return c;
  }
  VectorConstantContext ctx = scalar_context(Field::real);
  double c = 1.0;
  for (int j = 2; j <= m; ++j) c = bh_recursion(j, j - 1, ctx, c);
  return c;
}

// Constant attached to a sorted balanced tuple q_1 <= ... <= q_m in [1,2]
// with sum 1/q_k = (m+1)/2:
//   C_{K,m}^{theta_m} prod_{k<m} (A_{K,2k/(k+1)}^{m-k} C_{K,k})^{theta_k}
// where theta are the interpolation weights for (r,q) = (1,2).  The k = 1
// factor needs A_{K,1}; for complex scalars that value lies outside the
// stated Khintchine domain and must be passed in by the caller.
[[nodiscard]] inline double mixed_exponent_constant(
    const std::vector<Exponent>& q_tuple, Field field,
    std::optional<double> complex_a1 = std::nullopt) {
  const int m = static_cast<int>(q_tuple.size());
  std::vector<Rat> theta = theta_weights(m, Exponent(1), Exponent(2), q_tuple);
  double result = std::pow(bh_constant_classic(m, field), theta[m - 1].to_double());
  for (int k = 1; k < m; ++k) {
    if (theta[k - 1].is_zero()) continue;
    double p = 2.0 * k / (k + 1.0);
    double a;
    if (k == 1 && field == Field::complex) {
      if (!complex_a1)
        throw std::domain_error(
            "tuple requires the complex Khintchine constant at p = 1, which is "
            "outside its stated domain; supply complex_a1");
      a = *complex_a1;
    } else {
      a = khintchine(p, field);
    }
    double factor = std::pow(a, m - k) * bh_constant_classic(k, field);
    result *= std::pow(factor, theta[k - 1].to_double());
  }
  return result;
}

// Norm of the formal identity ell_s -> ell_q on the relevant diagonal block:
// q when s <= q <= 2, 2 when s <= 2 <= q, s when 2 <= s <= q.
[[nodiscard]] inline Exponent c_qs(const Exponent& s, const Exponent& q) {
  if (s > q) throw std::domain_error("c_qs requires s <= q");
  if (q <= Exponent(2)) return q;
  if (s <= Exponent(2)) return Exponent(2);
  return s;
}

}  // namespace hllab
