#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hllab/rational.hpp"
#include "hllab/rng.hpp"
#include "hllab/tensor.hpp"

namespace hllab {

enum class ConstructionKind {
  diagonal,       // a[i,...,i,i] = 1
  case2,          // a[i,...,i,j] = eps_{i,j}: diagonal arguments, dense output
  case3,          // a[i_1..i_m, j] = eps_{i} [j = i_m]
  bennett,        // a[j,...,j,i] = eps_{i,j}: n diagonal slots, d outputs
  chevet,         // fully dense sign tensor, arbitrary dims
  littlewood2x2,  // [[1,1],[1,-1]], scalar output
  fullsign        // dense sign tensor with scalar output
};

[[nodiscard]] constexpr const char* to_string(ConstructionKind k) {
  switch (k) {
    case ConstructionKind::diagonal: return "diagonal";
    case ConstructionKind::case2: return "case2";
    case ConstructionKind::case3: return "case3";
    case ConstructionKind::bennett: return "bennett";
    case ConstructionKind::chevet: return "chevet";
    case ConstructionKind::littlewood2x2: return "littlewood2x2";
    case ConstructionKind::fullsign: return "fullsign";
  }
  return "?";
}

[[nodiscard]] inline ConstructionKind parse_construction_kind(std::string_view s) {
  if (s == "diagonal") return ConstructionKind::diagonal;
  if (s == "case2") return ConstructionKind::case2;
  if (s == "case3") return ConstructionKind::case3;
  if (s == "bennett") return ConstructionKind::bennett;
  if (s == "chevet") return ConstructionKind::chevet;
  if (s == "littlewood2x2") return ConstructionKind::littlewood2x2;
  if (s == "fullsign") return ConstructionKind::fullsign;
  throw std::invalid_argument("unknown construction kind: " + std::string(s));
}

// Build request plus the space metadata the analysis of each family refers
// to; p and s are carried through to reports, the raw tensors never depend
// on them.
struct ConstructionSpec {
  ConstructionKind kind = ConstructionKind::diagonal;
  int m = 2;
  int n = 2;
  int d = 1;  // bennett only
  std::vector<Exponent> p;
  Exponent s{1};
  Field field = Field::real;
  std::uint64_t seed = 0;
};

namespace detail {

[[nodiscard]] inline RealTensor sign_free_tensor(std::vector<std::size_t> dims) {
  RealTensor t;
  t.dims = std::move(dims);
  t.data.assign(t.size(), 0.0);
  return t;
}

}  // namespace detail

// Diagonal map sum_i x_i^(1)...x_i^(m) e_i; the cotype lower-bound witness.
// The codomain exponent is accepted for symmetry with the other builders but
// the coefficients do not depend on it.
[[nodiscard]] inline RealTensor build_diagonal(int m, int n, const Exponent& s = Exponent(1)) {
  if (m < 1 || n < 1) throw std::domain_error("diagonal construction requires m, n >= 1");
  if (s < Exponent(1)) throw std::domain_error("codomain exponent must be >= 1");
  RealTensor t = detail::sign_free_tensor(std::vector<std::size_t>(m + 1, std::size_t(n)));
  std::size_t stride = 0;  // flat step between consecutive a[i,...,i,i]
  std::size_t pos = 1;
  for (int k = 0; k <= m; ++k) pos *= n;
  stride = (pos - 1) / (n - 1 == 0 ? 1 : n - 1);
  if (n == 1) {
    t.data[0] = 1.0;
    return t;
  }
  for (int i = 0; i < n; ++i) t.data[std::size_t(i) * stride] = 1.0;
  return t;
}

// Diagonal arguments with a dense random-sign output block:
// a[i,...,i,j] = eps_{i,j}.  Support n^2, dims (n,...,n,n).
[[nodiscard]] inline RealTensor build_case2(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::domain_error("case2 construction requires m, n >= 1");
  RealTensor t = detail::sign_free_tensor(std::vector<std::size_t>(m + 1, std::size_t(n)));
  CounterRng rng(seed);
  std::size_t diag_stride = 0;
  {
    std::size_t s = 1;
    for (int k = 0; k < m; ++k) s *= n;
    diag_stride = n == 1 ? 0 : (s - 1) / (n - 1) * std::size_t(n);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      t.data[std::size_t(i) * diag_stride + std::size_t(j)] =
          rng.sign(std::uint64_t(i) * n + j);
  return t;
}

// Dense sign tensor whose output coordinate copies the last argument index:
// a[i_1..i_m, j] = eps_{i_1..i_m} [j = i_m].  Support n^m, dims (n,...,n,n).
[[nodiscard]] inline RealTensor build_case3(int m, int n, std::uint64_t seed) {
  if (m < 2) throw std::domain_error("case3 construction requires m >= 2");
  if (n < 1) throw std::domain_error("case3 construction requires n >= 1");
  RealTensor t = detail::sign_free_tensor(std::vector<std::size_t>(m + 1, std::size_t(n)));
  CounterRng rng(seed);
  std::size_t support = 1;
  for (int k = 0; k < m; ++k) support *= n;
  for (std::size_t flat = 0; flat < support; ++flat) {
    std::size_t i_m = flat % n;
    t.data[flat * n + i_m] = rng.sign(flat);
  }
  return t;
}

// Rectangular diagonal family: a[j,...,j,i] = eps_{i,j} with j over the n
// argument coordinates and i over the d output coordinates.
[[nodiscard]] inline RealTensor build_bennett(int m, int n, int d, std::uint64_t seed) {
  if (m < 1 || n < 1 || d < 1)
    throw std::domain_error("bennett construction requires m, n, d >= 1");
  std::vector<std::size_t> dims(m + 1, std::size_t(n));
  dims.back() = std::size_t(d);
  RealTensor t = detail::sign_free_tensor(std::move(dims));
  CounterRng rng(seed);
  std::size_t diag_stride = 0;
  {
    std::size_t s = 1;
    for (int k = 0; k < m; ++k) s *= n;
    diag_stride = n == 1 ? 0 : (s - 1) / (n - 1) * std::size_t(d);
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i)
      t.data[std::size_t(j) * diag_stride + std::size_t(i)] =
          rng.sign(std::uint64_t(j) * d + i);
  return t;
}

// The coupling d^{1/2} = n^{1-|1/p|} under which both branches of the
// rectangular norm bound coincide.
[[nodiscard]] inline int bennett_coupled_d(int n, const Rat& inv_p_sum) {
  double e = 2.0 * (1.0 - inv_p_sum.to_double());
  long long d = std::llround(std::pow(double(n), e));
  return d < 1 ? 1 : static_cast<int>(d);
}

// Fully dense iid sign tensor on the given axes (last axis = output).
[[nodiscard]] inline RealTensor build_chevet(int d, const std::vector<std::size_t>& dims,
                                             std::uint64_t seed) {
  if (static_cast<int>(dims.size()) != d + 1)
    throw std::domain_error("chevet construction requires d+1 axis lengths");
  RealTensor t = detail::sign_free_tensor(dims);
  CounterRng rng(seed);
  for (std::size_t flat = 0; flat < t.data.size(); ++flat) t.data[flat] = rng.sign(flat);
  return t;
}

// Dense sign m-linear scalar form: dims (n,...,n,1).
[[nodiscard]] inline RealTensor build_fullsign(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::domain_error("fullsign construction requires m, n >= 1");
  std::vector<std::size_t> dims(m + 1, std::size_t(n));
  dims.back() = 1;
  return build_chevet(m, dims, seed);
}

// The 2x2 witness of the 4/3 inequality: [[1,1],[1,-1]] as a scalar form.
[[nodiscard]] inline RealTensor build_littlewood2x2() {
  RealTensor t;
  t.dims = {2, 2, 1};
  t.data = {1.0, 1.0, 1.0, -1.0};
  return t;
}

// Analysis-only exponent attached to the case3 family: 1/p = 1/p_m + 1/s*.
// The tensor itself never uses it; it is surfaced for reports.
[[nodiscard]] inline Exponent case3_analysis_p(const Exponent& p_m, const Exponent& s) {
  return Exponent::from_recip(p_m.recip() + conjugate(s).recip());
}

[[nodiscard]] inline CoeffTensor build(const ConstructionSpec& spec) {
  RealTensor t;
  switch (spec.kind) {
    case ConstructionKind::diagonal: t = build_diagonal(spec.m, spec.n); break;
    case ConstructionKind::case2: t = build_case2(spec.m, spec.n, spec.seed); break;
    case ConstructionKind::case3: t = build_case3(spec.m, spec.n, spec.seed); break;
    case ConstructionKind::bennett: t = build_bennett(spec.m, spec.n, spec.d, spec.seed); break;
    case ConstructionKind::chevet: {
      std::vector<std::size_t> dims(spec.m + 1, std::size_t(spec.n));
      t = build_chevet(spec.m, dims, spec.seed);
      break;
    }
    case ConstructionKind::littlewood2x2: t = build_littlewood2x2(); break;
    case ConstructionKind::fullsign: t = build_fullsign(spec.m, spec.n, spec.seed); break;
  }
  if (spec.field == Field::real) return t;
  CplxTensor c;
  c.dims = t.dims;
  c.data.assign(t.data.begin(), t.data.end());
  return c;
}

}  // namespace hllab
