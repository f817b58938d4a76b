#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hllab/constructions.hpp"
#include "hllab/exponents.hpp"
#include "hllab/norms.hpp"
#include "hllab/tensor.hpp"

namespace hllab {

// %.17g: shortest fixed formatting that round-trips doubles.
[[nodiscard]] inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Worker cap: HL_LAB_THREADS, with unset or 0 meaning hardware concurrency.
[[nodiscard]] inline unsigned worker_count() {
  if (const char* env = std::getenv("HL_LAB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs fn(0..count-1) across worker threads; exceptions are rethrown on the
// calling thread.  Tasks must write to disjoint slots.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  unsigned workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct ScanRecord {
  std::string kind;
  int n = 0;
  std::optional<int> d;
  int trials = 0;
  std::uint64_t seed = 0;
  double norm_lb = 0.0;
  bool norm_exact = false;
  double mixed = 0.0;
  double ratio = 0.0;
};

struct ScanConfig {
  ConstructionKind kind = ConstructionKind::diagonal;
  SpaceSignature sig;
  MixedNormSpec mixed;
  std::vector<int> n_list;
  int trials = 1;
  std::uint64_t seed = 0;
  AscentOptions ascent;
  std::optional<int> fixed_d;  // bennett: overrides the coupled default
};

namespace detail {

[[nodiscard]] inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// One scaling experiment: for each n builds `trials` tensors, measures the
// mixed norm and a norm estimate (vertex-exact whenever applicable), and
// records the medians.  Fully deterministic given (config, seed); trials fan
// out over worker threads.
[[nodiscard]] inline std::vector<ScanRecord> scan(const ScanConfig& config) {
  config.sig.validate();
  config.mixed.validate(config.sig.m);
  if (config.n_list.empty()) throw std::domain_error("scan requires a nonempty n list");
  for (std::size_t i = 0; i + 1 < config.n_list.size(); ++i)
    if (config.n_list[i] >= config.n_list[i + 1])
      throw std::domain_error("scan requires strictly ascending n values");
  if (config.trials < 1) throw std::domain_error("scan requires trials >= 1");

  const Rat h = harmonic_sum(config.sig.p);
  const std::size_t nn = config.n_list.size();
  const std::size_t tt = static_cast<std::size_t>(config.trials);
  std::vector<double> norms(nn * tt), mixeds(nn * tt);
  std::vector<char> exacts(nn * tt, 0);
  const CounterRng root(config.seed);

  parallel_for(nn * tt, [&](std::size_t task) {
    const std::size_t ni = task / tt, ti = task % tt;
    CounterRng derived = root.split((std::uint64_t(ni) << 32) | std::uint64_t(ti));
    ConstructionSpec cs;
    cs.kind = config.kind;
    cs.m = config.sig.m;
    cs.n = config.n_list[ni];
    cs.p = config.sig.p;
    cs.s = config.sig.s;
    cs.field = config.sig.field;
    cs.seed = derived.word(0);
    if (config.kind == ConstructionKind::bennett)
      cs.d = config.fixed_d ? *config.fixed_d : bennett_coupled_d(cs.n, h);
    CoeffTensor a = build(cs);
    mixeds[task] = mixed_norm(a, config.mixed);
    NormProblem prob{std::move(a), config.sig.p, config.sig.s};
    if (vertex_applicable(prob)) {
      norms[task] = norm_vertex_exact(prob).value;
      exacts[task] = 1;
    } else {
      AscentOptions opt = config.ascent;
      opt.seed = derived.word(1);
      opt.trace = nullptr;
      norms[task] = norm_ascent(prob, opt).value;
    }
  });

  std::vector<ScanRecord> out;
  out.reserve(nn);
  for (std::size_t ni = 0; ni < nn; ++ni) {
    ScanRecord rec;
    rec.kind = to_string(config.kind);
    rec.n = config.n_list[ni];
    if (config.kind == ConstructionKind::bennett)
      rec.d = config.fixed_d ? *config.fixed_d : bennett_coupled_d(rec.n, h);
    rec.trials = config.trials;
    rec.seed = config.seed;
    std::vector<double> ns(norms.begin() + ni * tt, norms.begin() + (ni + 1) * tt);
    std::vector<double> ms(mixeds.begin() + ni * tt, mixeds.begin() + (ni + 1) * tt);
    rec.norm_lb = detail::median(std::move(ns));
    rec.mixed = detail::median(std::move(ms));
    rec.norm_exact = exacts[ni * tt] != 0;
    rec.ratio = rec.norm_lb > 0.0 ? rec.mixed / rec.norm_lb : 0.0;
    out.push_back(std::move(rec));
  }
  return out;
}

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  int n_min = 0;
  int n_max = 0;
};

// Least squares of log(value) against log(n).
[[nodiscard]] inline FitResult fit_loglog(const std::vector<int>& n,
                                          const std::vector<double>& value) {
  if (n.size() != value.size() || n.size() < 3)
    throw std::domain_error("fit_loglog requires at least 3 records");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < 1 || !(value[i] > 0.0))
      throw std::domain_error("fit_loglog requires positive n and values");
    double x = std::log(double(n[i])), y = std::log(value[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  if (*std::min_element(n.begin(), n.end()) == *std::max_element(n.begin(), n.end()))
    throw std::domain_error("fit_loglog requires at least two distinct n");
  const double cnt = double(n.size());
  const double den = cnt * sxx - sx * sx;
  FitResult fit;
  fit.slope = (cnt * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / cnt;
  double ss_tot = 0, ss_res = 0;
  const double mean_y = sy / cnt;
  for (std::size_t i = 0; i < n.size(); ++i) {
    double x = std::log(double(n[i])), y = std::log(value[i]);
    ss_tot += (y - mean_y) * (y - mean_y);
    ss_res += (y - (fit.intercept + fit.slope * x)) * (y - (fit.intercept + fit.slope * x));
  }
  fit.r_squared = ss_tot == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  fit.n_min = *std::min_element(n.begin(), n.end());
  fit.n_max = *std::max_element(n.begin(), n.end());
  return fit;
}

enum class ScanField { norm_lb, mixed, ratio };

[[nodiscard]] inline FitResult fit_loglog(const std::vector<ScanRecord>& records,
                                          ScanField field) {
  std::vector<int> n;
  std::vector<double> v;
  for (const auto& r : records) {
    n.push_back(r.n);
    switch (field) {
      case ScanField::norm_lb: v.push_back(r.norm_lb); break;
      case ScanField::mixed: v.push_back(r.mixed); break;
      case ScanField::ratio: v.push_back(r.ratio); break;
    }
  }
  return fit_loglog(n, v);
}

struct LittlewoodReport {
  int n_max = 0;
  int trials = 0;
  Field field = Field::real;
  bool exact_norms = false;    // vertex enumeration used for every norm
  double two_by_two_ratio = 0; // ratio of the fixed 2x2 witness
  double max_ratio = 0.0;      // worst ratio over the random forms
  bool caveat = false;         // complex: norms are ascent lower bounds, so
                               // ratios are upper estimates
};

// Ratio mixed(4/3) / norm over random +-1 bilinear forms on sup-norm balls.
// Real field uses exact vertex norms (hence n_max <= 4); complex falls back
// to ascent lower bounds and sets the caveat flag.
[[nodiscard]] inline LittlewoodReport littlewood_check(int n_max, int trials, Field field,
                                                       std::uint64_t seed,
                                                       const AscentOptions& ascent = {}) {
  if (n_max < 1) throw std::domain_error("littlewood_check requires n_max >= 1");
  if (trials < 0) throw std::domain_error("littlewood_check requires trials >= 0");
  if (field == Field::real && n_max > 4)
    throw std::domain_error("littlewood_check with exact vertex norms requires n_max <= 4");
  LittlewoodReport rep;
  rep.n_max = n_max;
  rep.trials = trials;
  rep.field = field;
  rep.exact_norms = field == Field::real;
  rep.caveat = field == Field::complex;

  MixedNormSpec ms;
  ms.t = {Exponent(Rat(4, 3)), Exponent(Rat(4, 3))};
  ms.inner_q = Exponent(2);

  auto ratio_of = [&](const CoeffTensor& a, std::uint64_t ascent_seed) {
    double mixed = mixed_norm(a, ms);
    NormProblem prob{a, {Exponent::infinity(), Exponent::infinity()}, Exponent(1)};
    double nrm;
    if (field == Field::real) {
      nrm = norm_vertex_exact(prob).value;
    } else {
      AscentOptions opt = ascent;
      opt.seed = ascent_seed;
      opt.trace = nullptr;
      nrm = norm_ascent(prob, opt).value;
    }
    return mixed / nrm;
  };

  {
    ConstructionSpec cs;
    cs.kind = ConstructionKind::littlewood2x2;
    cs.field = field;
    rep.two_by_two_ratio = ratio_of(build(cs), CounterRng(seed).word(0));
  }

  std::vector<double> ratios(trials, 0.0);
  const CounterRng root(seed);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    CounterRng sub = root.split(t);
    int n = 1 + static_cast<int>(sub.word(0) % std::uint64_t(n_max));
    ConstructionSpec cs;
    cs.kind = ConstructionKind::fullsign;
    cs.m = 2;
    cs.n = n;
    cs.field = field;
    cs.seed = sub.word(1);
    ratios[t] = ratio_of(build(cs), sub.word(2));
  });
  rep.max_ratio = rep.two_by_two_ratio;
  for (double r : ratios) rep.max_ratio = std::max(rep.max_ratio, r);
  return rep;
}

// ---- CSV emission (columns fixed, diff-able) ----

inline void write_csv(std::ostream& os, const std::vector<ScanRecord>& records) {
  os << "kind,n,d,trials,seed,norm_lb,norm_exact,mixed,ratio\n";
  for (const auto& r : records) {
    os << r.kind << ',' << r.n << ',';
    if (r.d) os << *r.d;
    os << ',' << r.trials << ',' << r.seed << ',' << format_double(r.norm_lb) << ','
       << (r.norm_exact ? 1 : 0) << ',' << format_double(r.mixed) << ','
       << format_double(r.ratio) << '\n';
  }
}

[[nodiscard]] inline std::vector<ScanRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "kind,n,d,trials,seed,norm_lb,norm_exact,mixed,ratio")
    throw std::invalid_argument("unrecognized CSV header");
  std::vector<ScanRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (cells.size() != 9) throw std::invalid_argument("CSV row must have 9 cells");
    ScanRecord r;
    r.kind = cells[0];
    r.n = std::stoi(cells[1]);
    if (!cells[2].empty()) r.d = std::stoi(cells[2]);
    r.trials = std::stoi(cells[3]);
    r.seed = std::stoull(cells[4]);
    r.norm_lb = std::stod(cells[5]);
    r.norm_exact = cells[6] == "1";
    r.mixed = std::stod(cells[7]);
    r.ratio = std::stod(cells[8]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace hllab
