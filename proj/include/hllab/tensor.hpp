#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hllab/field.hpp"
#include "hllab/rational.hpp"

namespace hllab {

namespace detail {

// Compensated (Kahan) accumulator for the innermost reductions.
struct KahanAcc {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

[[nodiscard]] inline double abs_sq(double v) { return v * v; }
[[nodiscard]] inline double abs_sq(const std::complex<double>& v) { return std::norm(v); }
[[nodiscard]] inline bool finite_entry(double v) { return std::isfinite(v); }
[[nodiscard]] inline bool finite_entry(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

}  // namespace detail

// Dense coefficient array of a vector-valued m-linear map, row-major.
// dims has m+1 entries: the m argument axes then the output axis (scalar
// maps use an output axis of length 1).
template <class T>
struct DenseTensor {
  std::vector<std::size_t> dims;
  std::vector<T> data;

  [[nodiscard]] std::size_t arity() const { return dims.empty() ? 0 : dims.size() - 1; }
  [[nodiscard]] std::size_t n_out() const { return dims.empty() ? 0 : dims.back(); }
  [[nodiscard]] std::size_t size() const {
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    return total;
  }

  void validate() const {
    if (dims.size() < 2) throw std::domain_error("tensor needs at least one argument axis");
    std::size_t total = 1;
    for (std::size_t d : dims) {
      if (d == 0) throw std::domain_error("tensor axes must be nonempty");
      if (total > 100000000 / d) throw std::domain_error("tensor exceeds 1e8 entries");
      total *= d;
    }
    if (data.size() != total) throw std::domain_error("tensor data length mismatch");
    for (const T& v : data)
      if (!detail::finite_entry(v)) throw std::domain_error("tensor entries must be finite");
  }
};

using RealTensor = DenseTensor<double>;
using CplxTensor = DenseTensor<std::complex<double>>;
using CoeffTensor = std::variant<RealTensor, CplxTensor>;

[[nodiscard]] inline Field field_of(const CoeffTensor& a) {
  return std::holds_alternative<RealTensor>(a) ? Field::real : Field::complex;
}
[[nodiscard]] inline const std::vector<std::size_t>& dims_of(const CoeffTensor& a) {
  return std::visit([](const auto& t) -> const std::vector<std::size_t>& { return t.dims; }, a);
}
inline void validate(const CoeffTensor& a) {
  std::visit([](const auto& t) { t.validate(); }, a);
}

namespace detail {

// Removes the leading axis: out[rest] = sum_i w[i] * data[i, rest].
template <class T>
[[nodiscard]] std::vector<T> contract_first(const std::vector<std::size_t>& dims,
                                            const std::vector<T>& data,
                                            const std::vector<T>& w) {
  std::size_t stride = 1;
  for (std::size_t k = 1; k < dims.size(); ++k) stride *= dims[k];
  std::vector<T> out(stride, T{});
  for (std::size_t i = 0; i < dims[0]; ++i) {
    const T wi = w[i];
    const T* row = data.data() + i * stride;
    for (std::size_t j = 0; j < stride; ++j) out[j] += wi * row[j];
  }
  return out;
}

// Removes the trailing axis: out[lead] = sum_j data[lead, j] * w[j].
template <class T>
[[nodiscard]] std::vector<T> contract_last(const std::vector<std::size_t>& dims,
                                           const std::vector<T>& data,
                                           const std::vector<T>& w) {
  std::size_t last = dims.back();
  std::size_t lead = data.size() / last;
  std::vector<T> out(lead, T{});
  for (std::size_t r = 0; r < lead; ++r) {
    const T* row = data.data() + r * last;
    T acc{};
    for (std::size_t j = 0; j < last; ++j) acc += row[j] * w[j];
    out[r] = acc;
  }
  return out;
}

// ell_u norm along contiguous blocks of length `last`; u = inf is max.
// Values are nonnegative.  Finite u is computed max-scaled with compensated
// summation so nearly-equal norm ratios downstream stay accurate.
inline std::vector<double> fold_blocks(const std::vector<double>& v, std::size_t last,
                                       const Exponent& u) {
  std::size_t lead = v.size() / last;
  std::vector<double> out(lead, 0.0);
  for (std::size_t r = 0; r < lead; ++r) {
    const double* row = v.data() + r * last;
    double m = 0.0;
    for (std::size_t j = 0; j < last; ++j) m = std::max(m, row[j]);
    if (u.is_inf() || m == 0.0) {
      out[r] = m;
      continue;
    }
    double ud = u.to_double();
    KahanAcc acc;
    if (ud == 1.0) {
      for (std::size_t j = 0; j < last; ++j) acc.add(row[j]);
      out[r] = acc.sum;
    } else {
      for (std::size_t j = 0; j < last; ++j) acc.add(std::pow(row[j] / m, ud));
      out[r] = m * std::pow(acc.sum, 1.0 / ud);
    }
  }
  return out;
}

}  // namespace detail

// Evaluates the map on basis-expanded arguments:
// out[j] = sum over all indices of a[i_1..i_m, j] * x^(1)_{i_1} ... x^(m)_{i_m}.
template <class T>
[[nodiscard]] std::vector<T> apply(const DenseTensor<T>& a,
                                   const std::vector<std::vector<T>>& x) {
  if (x.size() != a.arity()) throw std::domain_error("apply: argument count must equal m");
  std::vector<std::size_t> dims = a.dims;
  std::vector<T> cur = a.data;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k].size() != dims.front())
      throw std::domain_error("apply: argument length mismatch in slot " + std::to_string(k + 1));
    cur = detail::contract_first(dims, cur, x[k]);
    dims.erase(dims.begin());
  }
  return cur;
}

// ell_u norm of a vector, u in [1, inf].
template <class T>
[[nodiscard]] double p_norm(const std::vector<T>& x, const Exponent& u) {
  if (u < Exponent(1)) throw std::domain_error("p_norm requires exponent >= 1");
  std::vector<double> mods(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mods[i] = std::abs(x[i]);
  if (mods.empty()) return 0.0;
  return detail::fold_blocks(mods, mods.size(), u).front();
}

// Outer exponents t_1..t_m for the argument axes plus the inner exponent for
// the output axis.
struct MixedNormSpec {
  std::vector<Exponent> t;
  Exponent inner_q{2};

  void validate(std::size_t m) const {
    if (t.size() != m) throw std::domain_error("mixed norm needs one exponent per axis");
    for (const auto& ti : t)
      if (ti < Exponent(1)) throw std::domain_error("mixed-norm exponents must be >= 1");
    if (inner_q < Exponent(1)) throw std::domain_error("inner exponent must be >= 1");
  }
};

// Nested norm: ell_{inner_q} over the output axis, then ell_{t_m}, ..., ell_{t_1}
// over the argument axes from innermost to outermost.
template <class T>
[[nodiscard]] double mixed_norm(const DenseTensor<T>& a, const MixedNormSpec& spec) {
  a.validate();
  spec.validate(a.arity());
  std::vector<double> mods(a.data.size());
  for (std::size_t i = 0; i < mods.size(); ++i) mods[i] = std::abs(a.data[i]);
  std::vector<double> cur = detail::fold_blocks(mods, a.n_out(), spec.inner_q);
  for (std::size_t k = a.arity(); k-- > 0;)
    cur = detail::fold_blocks(cur, a.dims[k], spec.t[k]);
  return cur.front();
}

[[nodiscard]] inline double mixed_norm(const CoeffTensor& a, const MixedNormSpec& spec) {
  return std::visit([&](const auto& t) { return mixed_norm(t, spec); }, a);
}

}  // namespace hllab
