#include <hllab/norms.hpp>
#include <hllab/constructions.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

using namespace hllab;

namespace {

Exponent ex(long long n, long long d = 1) { return Exponent(Rat(n, d)); }
Exponent inf() { return Exponent::infinity(); }

RealTensor identity_form(std::size_t n) {
  RealTensor t;
  t.dims = {n, n, 1};
  t.data.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) t.data[i * n + i] = 1.0;
  return t;
}

RealTensor sign_tensor(std::vector<std::size_t> dims, std::uint64_t seed) {
  RealTensor t;
  t.dims = std::move(dims);
  t.data.resize(t.size());
  CounterRng rng(seed);
  for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] = rng.sign(i);
  return t;
}

// test-side oracle: full enumeration over every slot, no analytic closure
double brute_force_norm(const RealTensor& a, const Exponent& s) {
  const std::size_t m = a.arity();
  std::size_t bits = 0;
  for (std::size_t k = 0; k < m; ++k) bits += a.dims[k];
  std::vector<std::vector<double>> x(m);
  for (std::size_t k = 0; k < m; ++k) x[k].assign(a.dims[k], 1.0);
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << bits); ++mask) {
    std::uint64_t rest = mask;
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < a.dims[k]; ++i, rest >>= 1)
        x[k][i] = (rest & 1u) ? -1.0 : 1.0;
    best = std::max(best, p_norm(hllab::apply(a, x), s));
  }
  return best;
}

}  // namespace

TEST_CASE("dual_align attains the dual norm") {
  CounterRng rng(400);
  for (int it = 0; it < 25; ++it) {
    std::vector<double> c(6);
    for (int i = 0; i < 6; ++i) c[i] = 2.0 * rng.uniform(it * 13 + i) - 1.0;
    for (Exponent u : {ex(1), ex(4, 3), ex(2), ex(3), inf()}) {
      std::vector<double> x;
      double v = dual_align(c, u, x);
      // returned value is the dual norm of c
      CHECK(v == Catch::Approx(p_norm(c, conjugate(u))).epsilon(1e-12));
      // maximizer sits on the unit sphere and realizes the pairing
      CHECK(p_norm(x, u) == Catch::Approx(1.0).epsilon(1e-12));
      double pair = 0.0;
      for (int i = 0; i < 6; ++i) pair += c[i] * x[i];
      CHECK(pair == Catch::Approx(v).epsilon(1e-12));
    }
  }
}

TEST_CASE("dual_align complex") {
  CounterRng rng(401);
  std::vector<std::complex<double>> c(5);
  for (int i = 0; i < 5; ++i)
    c[i] = {2.0 * rng.uniform(2 * i) - 1.0, 2.0 * rng.uniform(2 * i + 1) - 1.0};
  for (Exponent u : {ex(1), ex(3, 2), ex(2), inf()}) {
    std::vector<std::complex<double>> x;
    double v = dual_align(c, u, x);
    CHECK(v == Catch::Approx(p_norm(c, conjugate(u))).epsilon(1e-12));
    CHECK(p_norm(x, u) == Catch::Approx(1.0).epsilon(1e-12));
    std::complex<double> pair = 0.0;
    for (int i = 0; i < 5; ++i) pair += c[i] * x[i];
    // the bilinear (unconjugated) pairing is exactly real-maximized
    CHECK(pair.real() == Catch::Approx(v).epsilon(1e-12));
    CHECK(std::abs(pair.imag()) < 1e-12 * std::max(1.0, v));
  }
}

TEST_CASE("dual_align corner cases") {
  std::vector<double> x = {7, 7};
  CHECK(dual_align(std::vector<double>{0, 0}, ex(2), x) == 0.0);
  CHECK(x == std::vector<double>{7, 7});  // untouched on zero input

  // ell_1 ties break to the lowest index
  std::vector<double> tie;
  double v = dual_align(std::vector<double>{2, 2}, ex(1), tie);
  CHECK(v == 2.0);
  CHECK(tie == std::vector<double>{1, 0});
  std::vector<double> neg;
  dual_align(std::vector<double>{-3, 2}, ex(1), neg);
  CHECK(neg == std::vector<double>{-1, 0});

  std::vector<double> phases;
  CHECK(dual_align(std::vector<double>{1, -2, 0}, inf(), phases) == Catch::Approx(3.0));
  CHECK(phases == std::vector<double>{1, -1, 1});

  CHECK_THROWS_AS(dual_align(std::vector<double>{1}, Exponent(Rat(1, 2)), phases),
                  std::domain_error);
}

TEST_CASE("norm_ascent pinned values") {
  {
    // bilinear identity form on ell_2 x ell_2: Cauchy-Schwarz extremum 1
    NormProblem prob{CoeffTensor{identity_form(5)}, {ex(2), ex(2)}, ex(1)};
    AscentOptions opt;
    opt.restarts = 8;
    CHECK(norm_ascent(prob, opt).value == Catch::Approx(1.0).epsilon(1e-9));
  }
  {
    NormProblem prob{CoeffTensor{build_littlewood2x2()}, {inf(), inf()}, ex(1)};
    auto est = norm_ascent(prob);
    CHECK(est.value == Catch::Approx(2.0).epsilon(1e-9));
    CHECK_FALSE(est.exact);
    CHECK(est.restarts_used == 32);
    CHECK(est.iterations > 0);
  }
  {
    // linear identity map on ell_2 into ell_1, n = 4: norm n^{1/2}
    RealTensor id;
    id.dims = {4, 4};
    id.data.assign(16, 0.0);
    for (std::size_t i = 0; i < 4; ++i) id.data[i * 4 + i] = 1.0;
    NormProblem prob{CoeffTensor{id}, {ex(2)}, ex(1)};
    CHECK(norm_ascent(prob).value == Catch::Approx(2.0).epsilon(1e-8));
  }
}

TEST_CASE("norm_ascent trace: monotone objectives on feasible iterates") {
  auto a = sign_tensor({4, 3, 2}, 17);
  for (Exponent s : {ex(1), ex(3, 2)}) {
    AscentTrace trace;
    AscentOptions opt;
    opt.restarts = 3;
    opt.trace = &trace;
    NormProblem prob{CoeffTensor{a}, {ex(3), inf()}, s};
    auto est = norm_ascent(prob, opt);
    CHECK(est.value > 0.0);
    REQUIRE(trace.restart_offsets.size() == 3);
    CHECK(trace.max_ball_violation <= 1e-10);
    for (std::size_t r = 0; r < 3; ++r) {
      std::size_t lo = trace.restart_offsets[r];
      std::size_t hi =
          r + 1 < 3 ? trace.restart_offsets[r + 1] : trace.objectives.size();
      for (std::size_t i = lo + 1; i < hi; ++i)
        CHECK(trace.objectives[i] >=
              trace.objectives[i - 1] - 1e-9 * std::max(1.0, trace.objectives[i - 1]));
    }
  }
}

TEST_CASE("norm_ascent never beats the exact vertex value") {
  CounterRng seeds(18);
  for (int it = 0; it < 12; ++it) {
    std::vector<std::size_t> dims =
        it % 2 == 0 ? std::vector<std::size_t>{3, 3, 1} : std::vector<std::size_t>{2, 3, 2};
    auto a = sign_tensor(dims, seeds.word(it));
    NormProblem prob{CoeffTensor{a}, {inf(), inf()}, ex(1)};
    double exact = norm_vertex_exact(prob).value;
    double lb = norm_ascent(prob).value;
    CHECK(lb <= exact + 1e-9);
    CHECK(lb > 0.0);
  }
}

TEST_CASE("norm_ascent is deterministic and scale-equivariant") {
  auto a = sign_tensor({4, 4, 1}, 77);
  NormProblem prob{CoeffTensor{a}, {inf(), inf()}, ex(1)};
  AscentOptions opt;
  opt.restarts = 4;
  opt.seed = 123;
  auto e1 = norm_ascent(prob, opt);
  auto e2 = norm_ascent(prob, opt);
  CHECK(e1.value == e2.value);
  CHECK(e1.iterations == e2.iterations);
  CHECK(e1.residual == e2.residual);

  RealTensor scaled = a;
  for (auto& v : scaled.data) v *= 3.0;
  NormProblem sprob{CoeffTensor{scaled}, {inf(), inf()}, ex(1)};
  auto e3 = norm_ascent(sprob, opt);
  CHECK(e3.value == Catch::Approx(3.0 * e1.value).epsilon(1e-9));
}

TEST_CASE("norm_ascent options and edge cases") {
  RealTensor zero;
  zero.dims = {2, 2, 1};
  zero.data.assign(4, 0.0);
  NormProblem prob{CoeffTensor{zero}, {inf(), inf()}, ex(1)};
  auto est = norm_ascent(prob);
  CHECK(est.value == 0.0);
  CHECK(est.iterations == 0);
  CHECK_FALSE(est.exact);

  NormProblem live{CoeffTensor{build_littlewood2x2()}, {inf(), inf()}, ex(1)};
  AscentOptions bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(norm_ascent(live, bad), std::domain_error);
  bad = {};
  bad.max_iter = 0;
  CHECK_THROWS_AS(norm_ascent(live, bad), std::domain_error);
  bad = {};
  bad.tol = 0.0;
  CHECK_THROWS_AS(norm_ascent(live, bad), std::domain_error);

  NormProblem mismatched{CoeffTensor{build_littlewood2x2()}, {inf()}, ex(1)};
  CHECK_THROWS_AS(norm_ascent(mismatched), std::domain_error);
}

TEST_CASE("norm_ascent flags numeric blowups") {
  // every contraction path overflows: entries near DBL_MAX with odd axis
  // lengths force a non-finite objective in the very first y-update
  RealTensor huge;
  huge.dims = {3, 3, 3};
  huge.data.assign(27, 1.5e308);
  NormProblem prob{CoeffTensor{huge}, {inf(), inf()}, ex(2)};
  AscentOptions opt;
  opt.restarts = 1;
  CHECK_THROWS_AS(norm_ascent(prob, opt), std::runtime_error);
}

TEST_CASE("vertex_applicable") {
  auto lw = build_littlewood2x2();
  CHECK(vertex_applicable({CoeffTensor{lw}, {inf(), inf()}, ex(1)}));
  CHECK(vertex_applicable({CoeffTensor{lw}, {inf(), inf()}, ex(2)}));  // scalar output
  CHECK_FALSE(vertex_applicable({CoeffTensor{lw}, {ex(2), inf()}, ex(1)}));

  CplxTensor clw;
  clw.dims = lw.dims;
  clw.data.assign(lw.data.begin(), lw.data.end());
  CHECK_FALSE(vertex_applicable({CoeffTensor{clw}, {inf(), inf()}, ex(1)}));

  // vector output with s > 1 has no vertex certificate
  auto vec = sign_tensor({2, 2, 3}, 1);
  CHECK_FALSE(vertex_applicable({CoeffTensor{vec}, {inf(), inf()}, ex(2)}));
  CHECK(vertex_applicable({CoeffTensor{vec}, {inf(), inf()}, ex(1)}));

  // bit budget: 30+30 with one slot closed analytically is still 30 bits
  auto wide = sign_tensor({30, 30, 1}, 2);
  CHECK_FALSE(vertex_applicable({CoeffTensor{wide}, {inf(), inf()}, ex(1)}));
  auto narrow = sign_tensor({22, 2, 1}, 3);  // enumerates only the 2-slot
  CHECK(vertex_applicable({CoeffTensor{narrow}, {inf(), inf()}, ex(1)}));

  CHECK_THROWS_WITH(norm_vertex_exact({CoeffTensor{clw}, {inf(), inf()}, ex(1)}),
                    "vertex enumeration inapplicable: needs real field, all p_i = inf, "
                    "scalar output or s = 1, and at most 24 enumerated sign bits");
}

TEST_CASE("norm_vertex_exact pinned values") {
  {
    auto est = norm_vertex_exact({CoeffTensor{build_littlewood2x2()}, {inf(), inf()}, ex(1)});
    CHECK(est.value == 2.0);
    CHECK(est.exact);
  }
  for (std::size_t n : {2, 3, 4}) {
    RealTensor ones;
    ones.dims = {n, n, 1};
    ones.data.assign(n * n, 1.0);
    auto est = norm_vertex_exact({CoeffTensor{ones}, {inf(), inf()}, ex(1)});
    CHECK(est.value == double(n * n));
  }
}

TEST_CASE("norm_vertex_exact agrees with unoptimized enumeration") {
  CounterRng seeds(55);
  // scalar path (one slot closed analytically) vs the all-slots oracle
  for (int it = 0; it < 8; ++it) {
    auto a = sign_tensor({3, 3, 1}, seeds.word(it));
    auto est = norm_vertex_exact({CoeffTensor{a}, {inf(), inf()}, ex(1)});
    CHECK(est.value == Catch::Approx(brute_force_norm(a, ex(1))).epsilon(1e-12));
  }
  // vector-output path with s = 1
  for (int it = 0; it < 8; ++it) {
    auto a = sign_tensor({2, 3, 3}, seeds.word(100 + it));
    auto est = norm_vertex_exact({CoeffTensor{a}, {inf(), inf()}, ex(1)});
    CHECK(est.value == Catch::Approx(brute_force_norm(a, ex(1))).epsilon(1e-12));
  }
  // trilinear scalar
  auto a3 = sign_tensor({2, 2, 3, 1}, 9);
  auto est3 = norm_vertex_exact({CoeffTensor{a3}, {inf(), inf(), inf()}, ex(1)});
  CHECK(est3.value == Catch::Approx(brute_force_norm(a3, ex(1))).epsilon(1e-12));
}

TEST_CASE("alpha_exponent") {
  CHECK(alpha_exponent(inf()) == Rat(1, 2));
  CHECK(alpha_exponent(ex(2)) == Rat(0));
  CHECK(alpha_exponent(ex(4, 3)) == Rat(0));
  CHECK(alpha_exponent(ex(4)) == Rat(1, 4));
}

TEST_CASE("theory_norm_bound") {
  {
    auto b = theory_norm_bound(BoundKind::chevet, {ex(4), ex(4)}, ex(4, 3));
    REQUIRE(b.terms.size() == 1);
    // 1/2 + 1/4 + 1/4 + alpha(4) = 1 + 1/4
    CHECK(b.terms[0].n_exp == Rat(5, 4));
    CHECK(b.terms[0].d_exp == Rat(0));
  }
  {
    auto b = theory_norm_bound(BoundKind::chevet, {inf(), inf()}, ex(1), true);
    CHECK(b.terms[0].n_exp == Rat(3, 2));  // scalar: no s* term
  }
  {
    auto b = theory_norm_bound(BoundKind::case2, {inf(), inf()}, ex(1));
    CHECK(b.terms[0].n_exp == Rat(3, 2));
  }
  {
    auto b = theory_norm_bound(BoundKind::case3, {ex(4), ex(4), inf()}, ex(2));
    // (3-1)/2 - 1/2 + 1/2 = 1
    CHECK(b.terms[0].n_exp == Rat(1));
  }
  {
    auto b = theory_norm_bound(BoundKind::diagonal, {inf(), inf()}, ex(1));
    CHECK(b.terms[0].n_exp == Rat(1));
    auto clipped = theory_norm_bound(BoundKind::diagonal, {ex(2), ex(2)}, ex(2));
    CHECK(clipped.terms[0].n_exp == Rat(0));  // negative exponent clips to 0
  }
  {
    auto b = theory_norm_bound(BoundKind::bennett, {ex(4), ex(4)}, ex(1));
    REQUIRE(b.terms.size() == 2);
    CHECK(b.terms[0].n_exp == Rat(0));
    CHECK(b.terms[0].d_exp == Rat(1));
    CHECK(b.terms[1].n_exp == Rat(1, 2));
    CHECK(b.terms[1].d_exp == Rat(1, 2));
    // at the coupled size d = n^{2(1-h)} both terms agree: n = 16, h = 1/2
    double n = 16.0, d = std::pow(n, 2.0 * (1.0 - 0.5));
    double t0 = std::pow(d, 1.0);
    double t1 = std::pow(n, 0.5) * std::pow(d, 0.5);
    CHECK(t0 == Catch::Approx(t1).epsilon(1e-12));
  }
}
