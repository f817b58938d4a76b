#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hllab/field.hpp"
#include "hllab/rational.hpp"

namespace hllab {

// Problem data for an m-linear map ell_{p_1} x ... x ell_{p_m} -> ell_s whose
// coefficient norms are measured in ell_q (q >= s).  All exponents are exact
// rationals or infinity so regime boundaries are decided deterministically.
struct SpaceSignature {
  int m = 1;
  std::vector<Exponent> p;
  Exponent s{1};
  Exponent q{2};
  Field field = Field::real;

  void validate() const {
    if (m < 1) throw std::domain_error("signature requires m >= 1");
    if (static_cast<int>(p.size()) != m)
      throw std::domain_error("signature requires exactly m domain exponents");
    for (const auto& pi : p)
      if (pi < Exponent(1)) throw std::domain_error("domain exponents must be >= 1");
    if (s < Exponent(1)) throw std::domain_error("codomain exponent must be >= 1");
    if (s.is_inf()) throw std::domain_error("codomain exponent must be finite");
    if (q < s) throw std::domain_error("coefficient exponent must satisfy q >= s");
  }
};

// Sum of reciprocals, 1/inf = 0.  Exact.
[[nodiscard]] inline Rat harmonic_sum(const std::vector<Exponent>& p) {
  Rat h(0);
  for (const auto& pi : p) {
    if (pi < Exponent(1)) throw std::domain_error("harmonic_sum requires exponents >= 1");
    h += pi.recip();
  }
  return h;
}

namespace detail {
[[nodiscard]] inline Rat inv_lambda_of(const SpaceSignature& sig, const Rat& h) {
  return Rat(1, 2) + sig.s.recip() - min(sig.q, Exponent(2)).recip() - h;
}
}  // namespace detail

// The critical exponent lambda: 1/lambda = 1/2 + 1/s - 1/min{q,2} - sum 1/p_i,
// defined when that quantity is positive.
[[nodiscard]] inline std::optional<Exponent> lambda_of(const SpaceSignature& sig) {
  sig.validate();
  Rat inv = detail::inv_lambda_of(sig, harmonic_sum(sig.p));
  if (!(inv > Rat(0))) return std::nullopt;
  return Exponent::from_recip(inv);
}

enum class Regime { r1, r2, r3, r4, r5, gap, infeasible, unknown };

[[nodiscard]] constexpr const char* to_string(Regime r) {
  switch (r) {
    case Regime::r1: return "R1";
    case Regime::r2: return "R2";
    case Regime::r3: return "R3";
    case Regime::r4: return "R4";
    case Regime::r5: return "R5";
    case Regime::gap: return "GAP";
    case Regime::infeasible: return "INFEASIBLE";
    case Regime::unknown: return "UNKNOWN";
  }
  return "?";
}

struct RegimeReport {
  Regime regime = Regime::unknown;
  std::optional<Exponent> lambda;               // present iff 1/lambda > 0
  std::optional<Exponent> rho_optimal;          // best exponent when known
  std::optional<Exponent> rho_sufficient;       // inequality proven at this rho
  std::optional<Exponent> rho_necessary_bound;  // no smaller rho can work
  Rat inv_p_sum;                                // sum of 1/p_i, for reporting
};

// Gap-region sufficient exponent, as a reciprocal.  General form
// (1/s - 1/q)(1/s - h) / (1/s - 1/2); at s = 1 that is 0/0 and the closed
// value 2(1-h)(1-1/q) is used instead (same limit).
[[nodiscard]] inline Rat gap_sufficient_recip(const Exponent& s, const Exponent& q,
                                              const Rat& h) {
  if (s == Exponent(1)) return Rat(2) * (Rat(1) - h) * (Rat(1) - q.recip());
  Rat inv_s = s.recip();
  return (inv_s - q.recip()) * (inv_s - h) / (inv_s - Rat(1, 2));
}

// Gap-region necessary bound, as a reciprocal: the two obstructions are
// 1/rho <= 2(1-h)(1/s - 1/q) and 1/rho <= 1/s - h; the min binds.
[[nodiscard]] inline Rat gap_necessary_recip(const Exponent& s, const Exponent& q,
                                             const Rat& h) {
  Rat a = Rat(2) * (Rat(1) - h) * (s.recip() - q.recip());
  Rat b = s.recip() - h;
  return a < b ? a : b;
}

// Regime decision table.  Branch structure (exact comparisons throughout):
//   s >= 2           : R5 when 1/s - h > 0, else infeasible.
//   s < 2 < q        : R3/R4 split at lambda = 2 when 1/s - h > 0, else infeasible.
//   s < 2, q <= 2,
//     h <= 1/2       : R1/R2 split at lambda = 2 (lambda = 2 goes to R2);
//                      1/lambda <= 0 happens only at h = 1/2 with s = q and
//                      leaves no positive exponent -> infeasible.
//     h > 1/2        : h < 1/s -> gap; h >= 1 -> infeasible; otherwise the
//                      strip 1/s <= h < 1 is unknown for q < 2 and infeasible
//                      at q = 2 (there 1/s - h <= 0 kills every candidate).
[[nodiscard]] inline RegimeReport classify(const SpaceSignature& sig) {
  sig.validate();
  RegimeReport rep;
  rep.inv_p_sum = harmonic_sum(sig.p);
  const Rat& h = rep.inv_p_sum;
  const Rat inv_lambda = detail::inv_lambda_of(sig, h);
  if (inv_lambda > Rat(0)) rep.lambda = Exponent::from_recip(inv_lambda);

  const Rat half(1, 2);
  const Exponent two(2);
  auto fill_unified = [&](Regime reg) {
    rep.regime = reg;
    // m/rho = 1/lambda + (m-1)/max{lambda, s, 2}
    Rat cap_recip = inv_lambda;
    if (sig.s.recip() < cap_recip) cap_recip = sig.s.recip();
    if (half < cap_recip) cap_recip = half;
    Rat inv_rho = (inv_lambda + Rat(sig.m - 1) * cap_recip) / Rat(sig.m);
    rep.rho_optimal = Exponent::from_recip(inv_rho);
    rep.rho_sufficient = rep.rho_optimal;
    rep.rho_necessary_bound = rep.rho_optimal;
  };

  if (sig.s >= two) {
    if (!(inv_lambda > Rat(0))) {
      rep.regime = Regime::infeasible;
      return rep;
    }
    fill_unified(Regime::r5);
    return rep;
  }
  if (sig.q > two) {
    if (!(inv_lambda > Rat(0))) {
      rep.regime = Regime::infeasible;
      return rep;
    }
    fill_unified(*rep.lambda < two ? Regime::r3 : Regime::r4);
    return rep;
  }
  // s < 2, q <= 2
  if (h <= half) {
    if (!(inv_lambda > Rat(0))) {
      rep.regime = Regime::infeasible;
      return rep;
    }
    fill_unified(*rep.lambda < two ? Regime::r1 : Regime::r2);
    return rep;
  }
  if (h < sig.s.recip()) {
    rep.regime = Regime::gap;
    Rat suff = gap_sufficient_recip(sig.s, sig.q, h);
    Rat necc = gap_necessary_recip(sig.s, sig.q, h);
    rep.rho_sufficient = Exponent::from_recip(suff);
    rep.rho_necessary_bound = Exponent::from_recip(necc);
    if (suff == necc) rep.rho_optimal = rep.rho_sufficient;
    return rep;
  }
  if (h >= Rat(1) || sig.q == two) {
    rep.regime = Regime::infeasible;
    return rep;
  }
  rep.regime = Regime::unknown;
  return rep;
}

struct TupleCheck {
  bool admissible = false;
  Rat slack;                            // budget minus sum of 1/t_i
  std::optional<std::size_t> bad_index; // first slot outside [lambda, cap]
  std::string reason;
};

// Closed interval and reciprocal-sum budget describing all admissible tuples.
struct TupleFamily {
  Exponent lo;  // lambda
  Exponent hi;  // max{lambda, s, 2}
  Rat budget;   // 1/lambda + (m-1)/hi
};

[[nodiscard]] inline TupleFamily admissible_family(const SpaceSignature& sig) {
  auto lam = lambda_of(sig);
  if (!lam) throw std::domain_error("no admissible tuples: lambda is undefined");
  Exponent hi = max(*lam, max(sig.s, Exponent(2)));
  Rat budget = lam->recip() + Rat(sig.m - 1) * hi.recip();
  return {*lam, hi, budget};
}

// Membership test: every t_i in [lambda, max{lambda,s,2}] and
// sum 1/t_i <= 1/lambda + (m-1)/max{lambda,s,2}.
[[nodiscard]] inline TupleCheck check_tuple(const SpaceSignature& sig,
                                            const std::vector<Exponent>& t) {
  TupleFamily fam = admissible_family(sig);
  TupleCheck out;
  if (static_cast<int>(t.size()) != sig.m) {
    out.reason = "tuple length must equal m";
    return out;
  }
  Rat sum(0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < fam.lo || t[i] > fam.hi) {
      out.bad_index = i;
      out.reason = "t_" + std::to_string(i + 1) + " = " + t[i].str() +
                   " outside [" + fam.lo.str() + ", " + fam.hi.str() + "]";
      return out;
    }
    sum += t[i].recip();
  }
  out.slack = fam.budget - sum;
  if (out.slack.is_negative()) {
    out.reason = "reciprocal sum exceeds budget " + fam.budget.str();
    return out;
  }
  out.admissible = true;
  return out;
}

// Tuple budget for the abstract summing-operator setting: 1/lambda_gen = 1/r - h,
// cap = max{lambda_gen, q_cotype}, budget = 1/lambda_gen + (m-1)/cap.
struct GenericTupleBound {
  Exponent lambda_gen;
  Exponent cap;
  Rat budget;
};

[[nodiscard]] inline GenericTupleBound generic_tuple_bound(int m, const Exponent& r,
                                                           const Exponent& q_cotype,
                                                           const std::vector<Exponent>& p) {
  if (m < 1) throw std::domain_error("generic_tuple_bound requires m >= 1");
  if (r < Exponent(1) || r > q_cotype)
    throw std::domain_error("generic_tuple_bound requires 1 <= r <= q_cotype");
  if (q_cotype < Exponent(2))
    throw std::domain_error("generic_tuple_bound requires cotype exponent >= 2");
  Rat inv = r.recip() - harmonic_sum(p);
  if (!(inv > Rat(0))) throw std::domain_error("lambda undefined: 1/r <= sum 1/p_i");
  Exponent lam = Exponent::from_recip(inv);
  Exponent cap = max(lam, q_cotype);
  return {lam, cap, inv + Rat(m - 1) * cap.recip()};
}

// Summing index of the inclusion ell_s -> ell_q: 1/r = 1/2 + 1/s - 1/min{2,q}.
[[nodiscard]] inline Exponent bennett_carl_r(const Exponent& s, const Exponent& q) {
  if (s < Exponent(1)) throw std::domain_error("bennett_carl_r requires s >= 1");
  if (s > q) throw std::domain_error("bennett_carl_r requires s <= q");
  return Exponent::from_recip(Rat(1, 2) + s.recip() - min(Exponent(2), q).recip());
}

// Cotype-q_X criterion for p_i >= 2: admissible rho has 1/rho = 1/q_X - h
// when positive; absent once h reaches 1/q_X.
[[nodiscard]] inline std::optional<Exponent> cotype_rho(int m, const std::vector<Exponent>& p,
                                                        const Exponent& q_X) {
  if (m < 1 || static_cast<int>(p.size()) != m)
    throw std::domain_error("cotype_rho requires m >= 1 matching exponent count");
  if (q_X < Exponent(2)) throw std::domain_error("cotype_rho requires q_X >= 2");
  for (const auto& pi : p)
    if (pi < Exponent(2)) throw std::domain_error("cotype_rho requires all p_i >= 2");
  Rat inv = q_X.recip() - harmonic_sum(p);
  if (!(inv > Rat(0))) return std::nullopt;
  return Exponent::from_recip(inv);
}

// Strict variant used when the codomain merely has cotype q_X but the
// diagonal obstruction is not attained: m/rho < 1/q_X - h.
[[nodiscard]] inline bool cotype_strict_sufficient(int m, const std::vector<Exponent>& p,
                                                   const Exponent& q_X, const Exponent& rho) {
  if (q_X < Exponent(2)) throw std::domain_error("cotype criterion requires q_X >= 2");
  for (const auto& pi : p)
    if (pi < Exponent(2)) throw std::domain_error("cotype criterion requires all p_i >= 2");
  return Rat(m) * rho.recip() < q_X.recip() - harmonic_sum(p);
}

// Convex combination in reciprocal coordinates: 1/t_j = sum_k w_k / (corner_k)_j.
[[nodiscard]] inline std::vector<Exponent> interpolate_tuples(
    const std::vector<std::vector<Exponent>>& corners, const std::vector<Rat>& weights) {
  if (corners.empty() || corners.size() != weights.size())
    throw std::domain_error("interpolate_tuples requires one weight per corner");
  const std::size_t m = corners.front().size();
  Rat total(0);
  for (const auto& w : weights) {
    if (w.is_negative()) throw std::domain_error("interpolation weights must be >= 0");
    total += w;
  }
  if (total != Rat(1)) throw std::domain_error("interpolation weights must sum to 1");
  std::vector<Exponent> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    Rat inv(0);
    for (std::size_t k = 0; k < corners.size(); ++k) {
      if (corners[k].size() != m)
        throw std::domain_error("interpolate_tuples requires corners of equal length");
      inv += weights[k] * corners[k][j].recip();
    }
    out.push_back(Exponent::from_recip(inv));
  }
  return out;
}

// Interpolation weights theta_k attached to a sorted balanced tuple
// q_1 <= ... <= q_m in [r,q] with sum 1/q_k = 1/r + (m-1)/q:
//   theta_m = m (1/r - 1/q)^{-1} (1/q_m - 1/q)
//   theta_k = k (1/r - 1/q)^{-1} (1/q_k - 1/q_{k+1}),  k < m.
// They are >= 0 and sum to 1 (Abel summation), all exact.
[[nodiscard]] inline std::vector<Rat> theta_weights(int m, const Exponent& r,
                                                    const Exponent& q,
                                                    const std::vector<Exponent>& q_tuple) {
  if (m < 1 || static_cast<int>(q_tuple.size()) != m)
    throw std::domain_error("theta_weights requires m >= 1 matching tuple length");
  if (!(r < q)) throw std::domain_error("theta_weights requires r < q");
  Rat sum(0);
  for (int k = 0; k < m; ++k) {
    if (q_tuple[k] < r || q_tuple[k] > q)
      throw std::domain_error("theta_weights requires tuple entries in [r, q]");
    if (k > 0 && q_tuple[k] < q_tuple[k - 1])
      throw std::domain_error("theta_weights requires an ascending tuple");
    sum += q_tuple[k].recip();
  }
  if (sum != r.recip() + Rat(m - 1) * q.recip())
    throw std::domain_error("theta_weights requires sum 1/q_k = 1/r + (m-1)/q");
  Rat d = r.recip() - q.recip();
  std::vector<Rat> theta(m);
  theta[m - 1] = Rat(m) * (q_tuple[m - 1].recip() - q.recip()) / d;
  for (int k = 0; k + 1 < m; ++k)
    theta[k] = Rat(k + 1) * (q_tuple[k].recip() - q_tuple[k + 1].recip()) / d;
  return theta;
}

}  // namespace hllab
