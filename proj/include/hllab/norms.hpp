#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hllab/exponents.hpp"
#include "hllab/rng.hpp"
#include "hllab/tensor.hpp"

namespace hllab {

// A coefficient tensor viewed as an m-linear map ell_{p_1} x ... x ell_{p_m}
// -> ell_s; the object whose operator norm is estimated below.
struct NormProblem {
  CoeffTensor A;
  std::vector<Exponent> p;
  Exponent s{1};

  void validate() const {
    hllab::validate(A);
    if (p.size() != dims_of(A).size() - 1)
      throw std::domain_error("norm problem needs one domain exponent per argument axis");
    for (const auto& pi : p)
      if (pi < Exponent(1)) throw std::domain_error("domain exponents must be >= 1");
    if (s < Exponent(1)) throw std::domain_error("codomain exponent must be >= 1");
  }
};

struct NormEstimate {
  double value = 0.0;   // certified lower bound on the operator norm
  bool exact = false;   // true only when vertex enumeration ran
  int restarts_used = 0;
  long long iterations = 0;
  double residual = 0.0;  // last ascent increment of the best restart
};

// Optional instrumentation: objective after every slot update (restart
// boundaries in restart_offsets) and the worst unit-ball violation seen.
struct AscentTrace {
  std::vector<double> objectives;
  std::vector<std::size_t> restart_offsets;
  double max_ball_violation = 0.0;
};

struct AscentOptions {
  int restarts = 32;
  int max_iter = 500;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  AscentTrace* trace = nullptr;
};

namespace detail {

[[nodiscard]] inline double phase_of(double c) { return c < 0.0 ? -1.0 : 1.0; }
[[nodiscard]] inline std::complex<double> phase_of(const std::complex<double>& c) {
  double m = std::abs(c);
  if (m == 0.0) return {1.0, 0.0};
  return std::conj(c) / m;
}

}  // namespace detail

// Exact maximizer of Re sum_i c_i x_i over the unit ball of ell_u; writes the
// maximizer into x and returns the optimum, which equals the dual norm
// ||c||_{u*}.  A zero c leaves x untouched and returns 0.
template <class T>
double dual_align(const std::vector<T>& c, const Exponent& u, std::vector<T>& x) {
  if (u < Exponent(1)) throw std::domain_error("dual_align requires exponent >= 1");
  const std::size_t n = c.size();
  std::vector<double> mods(n);
  double mx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mods[i] = std::abs(c[i]);
    mx = std::max(mx, mods[i]);
  }
  if (mx == 0.0) return 0.0;
  x.resize(n);

  if (u == Exponent(1)) {
    // all mass on the largest coefficient; ties broken by lowest index
    std::size_t k = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (mods[i] > mods[k]) k = i;
    std::fill(x.begin(), x.end(), T{});
    x[k] = T(detail::phase_of(c[k]));
    return mods[k];
  }
  if (u.is_inf()) {
    detail::KahanAcc acc;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = T(detail::phase_of(c[i]));
      acc.add(mods[i]);
    }
    return acc.sum;
  }
  // 1 < u < inf: x_i = phase(c_i) (|c_i| / ||c||_{u*})^{u*-1}
  const double ud = u.to_double();
  const double ustar = ud / (ud - 1.0);
  detail::KahanAcc acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(std::pow(mods[i] / mx, ustar));
  const double nrm = mx * std::pow(acc.sum, 1.0 / ustar);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = T(detail::phase_of(c[i])) * T(std::pow(mods[i] / nrm, ustar - 1.0));
  return nrm;
}

namespace detail {

// Coefficient vector of the objective as a function of slot k alone:
// contracts the output axis with y and every other argument slot with its
// current vector.
template <class T>
[[nodiscard]] std::vector<T> slot_gradient(const DenseTensor<T>& a,
                                           const std::vector<std::vector<T>>& x,
                                           const std::vector<T>& y, std::size_t k) {
  std::vector<std::size_t> dims = a.dims;
  std::vector<T> cur = contract_last(dims, a.data, y);
  dims.pop_back();
  for (std::size_t l = dims.size(); l-- > k + 1;) {
    cur = contract_last(dims, cur, x[l]);
    dims.pop_back();
  }
  while (dims.size() > 1) {
    cur = contract_first(dims, cur, x[k + 1 - dims.size()]);
    dims.erase(dims.begin());
  }
  return cur;
}

template <class T>
[[nodiscard]] std::vector<T> full_contraction(const DenseTensor<T>& a,
                                              const std::vector<std::vector<T>>& x) {
  std::vector<std::size_t> dims = a.dims;
  std::vector<T> cur = a.data;
  for (std::size_t k = 0; k < x.size(); ++k) {
    cur = contract_first(dims, cur, x[k]);
    dims.erase(dims.begin());
  }
  return cur;
}

inline void init_slot(std::vector<double>& x, const Exponent& u, const CounterRng& rng,
                      std::uint64_t& ctr) {
  const double scale = u.is_inf() ? 1.0 : std::pow(double(x.size()), -1.0 / u.to_double());
  for (auto& v : x) v = rng.sign(ctr++) * scale;
}

inline void init_slot(std::vector<std::complex<double>>& x, const Exponent& u,
                      const CounterRng& rng, std::uint64_t& ctr) {
  const double scale = u.is_inf() ? 1.0 : std::pow(double(x.size()), -1.0 / u.to_double());
  for (auto& v : x) {
    double th = 2.0 * M_PI * rng.uniform(ctr++);
    v = std::polar(scale, th);
  }
}

template <class T>
NormEstimate ascent_impl(const DenseTensor<T>& a, const std::vector<Exponent>& p,
                         const Exponent& s, const AscentOptions& opt) {
  const std::size_t m = a.arity();
  const Exponent s_star = conjugate(s);
  NormEstimate best;
  best.restarts_used = opt.restarts;
  const CounterRng root(opt.seed);

  auto record = [&](double obj, const std::vector<T>& v, const Exponent& u) {
    if (!opt.trace) return;
    opt.trace->objectives.push_back(obj);
    double viol = std::fabs(p_norm(v, u) - 1.0);
    opt.trace->max_ball_violation = std::max(opt.trace->max_ball_violation, viol);
  };

  for (int r = 0; r < opt.restarts; ++r) {
    CounterRng rng = root.split(r);
    std::uint64_t ctr = 0;
    std::vector<std::vector<T>> x(m);
    for (std::size_t k = 0; k < m; ++k) {
      x[k].resize(a.dims[k]);
      init_slot(x[k], p[k], rng, ctr);
    }
    std::vector<T> y(a.n_out());
    init_slot(y, s_star, rng, ctr);
    if (opt.trace) opt.trace->restart_offsets.push_back(opt.trace->objectives.size());

    double obj = 0.0, inc = 0.0;
    int it = 0;
    for (; it < opt.max_iter; ++it) {
      for (std::size_t k = 0; k < m; ++k) {
        std::vector<T> c = slot_gradient(a, x, y, k);
        double v = dual_align(c, p[k], x[k]);
        if (v > 0.0) record(v, x[k], p[k]);
      }
      std::vector<T> out = full_contraction(a, x);
      double v = dual_align(out, s_star, y);
      if (!std::isfinite(v))
        throw std::runtime_error("ascent produced a non-finite objective in restart " +
                                 std::to_string(r));
      if (v > 0.0) record(v, y, s_star);
      inc = v - obj;
      obj = v;
      ++best.iterations;
      if (inc < opt.tol) break;
    }
    if (obj > best.value) {
      best.value = obj;
      best.residual = inc;
    }
  }
  return best;
}

}  // namespace detail

// Multi-start alternating maximization of Re<A(x_1..x_m), y> over the product
// of unit balls; each slot update is the exact dual-alignment maximizer, so
// the objective is nondecreasing within a restart.  Returns the best value
// over restarts — always a valid lower bound on the operator norm.
[[nodiscard]] inline NormEstimate norm_ascent(const NormProblem& prob,
                                              const AscentOptions& opt = {}) {
  prob.validate();
  if (opt.restarts < 1) throw std::domain_error("norm_ascent requires restarts >= 1");
  if (opt.max_iter < 1) throw std::domain_error("norm_ascent requires max_iter >= 1");
  if (!(opt.tol > 0.0)) throw std::domain_error("norm_ascent requires tol > 0");
  bool all_zero = std::visit(
      [](const auto& t) {
        for (const auto& v : t.data)
          if (std::abs(v) != 0.0) return false;
        return true;
      },
      prob.A);
  if (all_zero) return {};
  return std::visit(
      [&](const auto& t) { return detail::ascent_impl(t, prob.p, prob.s, opt); }, prob.A);
}

namespace detail {

[[nodiscard]] inline std::size_t vertex_bits(const NormProblem& prob) {
  const auto& dims = dims_of(prob.A);
  std::size_t total = 0, mx = 0;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    total += dims[k];
    mx = std::max(mx, dims[k]);
  }
  // scalar output: the largest slot is optimized analytically, not enumerated
  return dims.back() == 1 ? total - mx : total;
}

}  // namespace detail

// True when norm_vertex_exact applies: real scalars, all p_i = inf, and
// either scalar output or s = 1, with at most 24 enumerated sign bits.
[[nodiscard]] inline bool vertex_applicable(const NormProblem& prob) {
  if (!std::holds_alternative<RealTensor>(prob.A)) return false;
  for (const auto& pi : prob.p)
    if (!pi.is_inf()) return false;
  const auto& dims = dims_of(prob.A);
  if (dims.back() != 1 && !(prob.s == Exponent(1))) return false;
  return detail::vertex_bits(prob) <= 24;
}

// Exhaustive maximization over sign vectors x_k in {-1,+1}^{n_k}.  A
// multilinear functional on a product of sup-norm balls peaks at vertices, so
// the result is the exact operator norm.  For scalar output the largest slot
// is closed analytically (sum of absolute values); for s = 1 the output norm
// itself plays that role.
[[nodiscard]] inline NormEstimate norm_vertex_exact(const NormProblem& prob) {
  prob.validate();
  if (!vertex_applicable(prob))
    throw std::domain_error(
        "vertex enumeration inapplicable: needs real field, all p_i = inf, "
        "scalar output or s = 1, and at most 24 enumerated sign bits");
  const auto& a = std::get<RealTensor>(prob.A);
  const std::size_t m = a.arity();
  const bool scalar = a.n_out() == 1;

  std::size_t closed = 0;  // slot optimized analytically (scalar case)
  if (scalar)
    for (std::size_t k = 1; k < m; ++k)
      if (a.dims[k] > a.dims[closed]) closed = k;

  std::vector<std::size_t> enumerated;
  std::size_t bits = 0;
  for (std::size_t k = 0; k < m; ++k)
    if (!scalar || k != closed) {
      enumerated.push_back(k);
      bits += a.dims[k];
    }

  std::vector<std::vector<double>> x(m);
  for (std::size_t k = 0; k < m; ++k) x[k].assign(a.dims[k], 1.0);

  NormEstimate est;
  est.exact = true;
  const std::uint64_t combos = std::uint64_t(1) << bits;
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    std::uint64_t rest = mask;
    for (std::size_t k : enumerated) {
      for (std::size_t i = 0; i < a.dims[k]; ++i, rest >>= 1)
        x[k][i] = (rest & 1u) ? -1.0 : 1.0;
    }
    double value;
    if (scalar) {
      // contract every enumerated slot, then close the remaining one in ell_1
      std::vector<std::size_t> dims(a.dims.begin(), a.dims.end() - 1);
      std::vector<double> cur = a.data;
      for (std::size_t l = dims.size(); l-- > closed + 1;) {
        cur = detail::contract_last(dims, cur, x[l]);
        dims.pop_back();
      }
      while (dims.size() > 1) {
        cur = detail::contract_first(dims, cur, x[closed + 1 - dims.size()]);
        dims.erase(dims.begin());
      }
      detail::KahanAcc acc;
      for (double v : cur) acc.add(std::fabs(v));
      value = acc.sum;
    } else {
      std::vector<double> out = detail::full_contraction(a, x);
      detail::KahanAcc acc;
      for (double v : out) acc.add(std::fabs(v));
      value = acc.sum;
    }
    est.value = std::max(est.value, value);
    ++est.iterations;
  }
  return est;
}

// ---- predicted growth exponents of the construction norms ----

enum class BoundKind { chevet, case2, case3, bennett, diagonal };

struct BoundTerm {
  Rat n_exp;
  Rat d_exp;
};

// The bound is max over terms of n^{n_exp} d^{d_exp} (up to a constant that
// is deliberately not quantified).
struct TheoryBound {
  std::vector<BoundTerm> terms;
  std::string description;
};

// alpha(u) = 1/2 - 1/u when u >= 2, else 0.
[[nodiscard]] inline Rat alpha_exponent(const Exponent& u) {
  Rat a = Rat(1, 2) - u.recip();
  return a.is_negative() ? Rat(0) : a;
}

[[nodiscard]] inline TheoryBound theory_norm_bound(BoundKind kind,
                                                   const std::vector<Exponent>& p,
                                                   const Exponent& s,
                                                   bool scalar_output = false) {
  const int m = static_cast<int>(p.size());
  const Rat h = harmonic_sum(p);
  TheoryBound out;
  switch (kind) {
    case BoundKind::chevet: {
      Rat e(1, 2);
      for (const auto& pi : p) e += alpha_exponent(pi);
      if (!scalar_output) e += alpha_exponent(conjugate(s));
      out.terms.push_back({e, Rat(0)});
      out.description = "n^{1/2 + sum alpha(p_i)" +
                        std::string(scalar_output ? "" : " + alpha(s*)") + "}";
      return out;
    }
    case BoundKind::case2:
      out.terms.push_back({Rat(1, 2) + s.recip() - h, Rat(0)});
      out.description = "n^{1/2 + 1/s - |1/p|}";
      return out;
    case BoundKind::case3:
      out.terms.push_back({Rat(m - 1, 2) - h + s.recip(), Rat(0)});
      out.description = "n^{(m-1)/2 - |1/p| + 1/s}";
      return out;
    case BoundKind::bennett:
      out.terms.push_back({Rat(0), s.recip()});
      out.terms.push_back({Rat(1) - h, s.recip() - Rat(1, 2)});
      out.description = "max(d^{1/s}, n^{1-|1/p|} d^{1/s-1/2})";
      return out;
    case BoundKind::diagonal: {
      Rat e = s.recip() - h;
      out.terms.push_back({e.is_negative() ? Rat(0) : e, Rat(0)});
      out.description = "n^{max(0, 1/s - |1/p|)}";
      return out;
    }
  }
  throw std::domain_error("unknown bound kind");
}

}  // namespace hllab
