#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hllab {

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

[[nodiscard]] constexpr u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

// Exact rational on 64-bit words, canonical form den > 0 and gcd(|num|,den)=1.
// Intermediates widen to 128 bits; a reduced result that does not fit back
// into 64 bits throws std::overflow_error.  Exponent bookkeeping never gets
// near that range, but the guard keeps silent wrap-around impossible.
class Rat {
 public:
  constexpr Rat() = default;
  constexpr Rat(long long n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rat(long long n, long long d) { *this = make(n, d); }

  [[nodiscard]] long long num() const { return num_; }
  [[nodiscard]] long long den() const { return den_; }
  [[nodiscard]] bool is_zero() const { return num_ == 0; }
  [[nodiscard]] bool is_negative() const { return num_ < 0; }
  [[nodiscard]] double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  [[nodiscard]] Rat recip() const {
    if (num_ == 0) throw std::domain_error("reciprocal of zero");
    return make(den_, num_);
  }

  [[nodiscard]] std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return make(detail::i128(a.num_) * b.den_ + detail::i128(b.num_) * a.den_,
                detail::i128(a.den_) * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return make(detail::i128(a.num_) * b.den_ - detail::i128(b.num_) * a.den_,
                detail::i128(a.den_) * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make(detail::i128(a.num_) * b.num_, detail::i128(a.den_) * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return make(detail::i128(a.num_) * b.den_, detail::i128(a.den_) * b.num_);
  }
  Rat operator-() const { return make(-detail::i128(num_), den_); }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) = default;
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    detail::i128 lhs = detail::i128(a.num_) * b.den_;
    detail::i128 rhs = detail::i128(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  static Rat make(detail::i128 n, detail::i128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    detail::u128 mag = n < 0 ? detail::u128(-n) : detail::u128(n);
    if (mag != 0) {
      detail::u128 g = detail::gcd_u128(mag, detail::u128(d));
      n /= detail::i128(g);
      d /= detail::i128(g);
    } else {
      d = 1;
    }
    constexpr detail::i128 lo = std::numeric_limits<long long>::min();
    constexpr detail::i128 hi = std::numeric_limits<long long>::max();
    if (n < lo || n > hi || d > hi) throw std::overflow_error("rational overflow");
    Rat r;
    r.num_ = static_cast<long long>(n);
    r.den_ = static_cast<long long>(d);
    return r;
  }

  long long num_ = 0;
  long long den_ = 1;
};

[[nodiscard]] inline Rat abs(const Rat& r) { return r.is_negative() ? -r : r; }

// Parses "7", "-3/4" or a plain decimal like "1.25" (kept exact: 125/100).
[[nodiscard]] inline Rat parse_rat(std::string_view s) {
  auto fail = [&] {
    throw std::invalid_argument("cannot parse rational: '" + std::string(s) + "'");
  };
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) fail();

  auto parse_ll = [&](std::string_view t) -> long long {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail();
    return v;
  };

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    long long n = parse_ll(s.substr(0, slash));
    long long d = parse_ll(s.substr(slash + 1));
    if (d == 0) fail();
    return Rat(n, d);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    bool neg = !s.empty() && s.front() == '-';
    std::string_view head = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (frac.empty() || frac.size() > 18) fail();
    long long ip = head.empty() || head == "-" ? 0 : parse_ll(head);
    long long fp = parse_ll(frac);
    if (fp < 0) fail();
    long long scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    detail::i128 n = detail::i128(ip) * scale + (neg ? -detail::i128(fp) : detail::i128(fp));
    long long hi = std::numeric_limits<long long>::max();
    if (n > hi || n < -detail::i128(hi)) throw std::overflow_error("rational overflow");
    return Rat(static_cast<long long>(n), scale);
  }
  return Rat(parse_ll(s));
}

// Positive extended value: a positive rational or +infinity.  Used for every
// Lebesgue-type exponent (domain p_i, codomain s, coefficient q, tuple t_i,
// lambda, rho).  Comparisons and reciprocals are exact, with 1/inf = 0, so
// classification thresholds never touch floating point.
class Exponent {
 public:
  Exponent() = default;  // value 1
  Exponent(long long v) : Exponent(Rat(v)) {}  // NOLINT(google-explicit-constructor)
  Exponent(Rat v) : v_(v) {                    // NOLINT(google-explicit-constructor)
    if (!v_.is_negative() && !v_.is_zero()) return;
    throw std::domain_error("exponent must be positive, got " + v.str());
  }

  [[nodiscard]] static Exponent infinity() {
    Exponent e;
    e.inf_ = true;
    return e;
  }
  // Builds the exponent whose reciprocal is r (r = 0 gives infinity).
  [[nodiscard]] static Exponent from_recip(const Rat& r) {
    if (r.is_negative()) throw std::domain_error("negative reciprocal exponent");
    if (r.is_zero()) return infinity();
    return Exponent(r.recip());
  }

  [[nodiscard]] bool is_inf() const { return inf_; }
  [[nodiscard]] const Rat& value() const {
    if (inf_) throw std::domain_error("infinite exponent has no rational value");
    return v_;
  }
  [[nodiscard]] Rat recip() const { return inf_ ? Rat(0) : v_.recip(); }
  [[nodiscard]] double to_double() const {
    return inf_ ? std::numeric_limits<double>::infinity() : v_.to_double();
  }
  [[nodiscard]] std::string str() const { return inf_ ? "inf" : v_.str(); }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.v_ == b.v_;
  }
  friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
    if (a.inf_ && b.inf_) return std::strong_ordering::equal;
    if (a.inf_) return std::strong_ordering::greater;
    if (b.inf_) return std::strong_ordering::less;
    return a.v_ <=> b.v_;
  }

 private:
  Rat v_ = Rat(1);
  bool inf_ = false;
};

[[nodiscard]] inline Exponent min(const Exponent& a, const Exponent& b) {
  return a < b ? a : b;
}
[[nodiscard]] inline Exponent max(const Exponent& a, const Exponent& b) {
  return a < b ? b : a;
}

// Hoelder conjugate: 1/u + 1/u* = 1.  Requires u >= 1; conj(1) = inf.
[[nodiscard]] inline Exponent conjugate(const Exponent& u) {
  if (u < Exponent(1)) throw std::domain_error("conjugate requires exponent >= 1");
  return Exponent::from_recip(Rat(1) - u.recip());
}

[[nodiscard]] inline Exponent parse_exponent(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s == "inf" || s == "Inf" || s == "INF") return Exponent::infinity();
  return Exponent(parse_rat(s));
}

}  // namespace hllab
