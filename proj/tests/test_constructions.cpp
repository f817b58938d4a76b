#include <hllab/constructions.hpp>
#include <hllab/norms.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

using namespace hllab;

namespace {

Exponent ex(long long n, long long d = 1) { return Exponent(Rat(n, d)); }
Exponent inf() { return Exponent::infinity(); }

std::vector<std::size_t> unflatten(std::size_t flat, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> idx(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    idx[k] = flat % dims[k];
    flat /= dims[k];
  }
  return idx;
}

std::set<std::vector<std::size_t>> support_of(const RealTensor& t) {
  std::set<std::vector<std::size_t>> s;
  for (std::size_t flat = 0; flat < t.data.size(); ++flat)
    if (t.data[flat] != 0.0) s.insert(unflatten(flat, t.dims));
  return s;
}

}  // namespace

TEST_CASE("diagonal construction") {
  for (int m : {1, 2, 3}) {
    for (int n : {1, 2, 4}) {
      auto t = build_diagonal(m, n);
      CHECK(t.dims == std::vector<std::size_t>(m + 1, std::size_t(n)));
      auto supp = support_of(t);
      CHECK(supp.size() == std::size_t(n));
      for (const auto& idx : supp) {
        for (std::size_t k = 1; k < idx.size(); ++k) CHECK(idx[k] == idx[0]);
      }
      for (std::size_t flat = 0; flat < t.data.size(); ++flat)
        CHECK((t.data[flat] == 0.0 || t.data[flat] == 1.0));
    }
  }
  // behavior under the map: A(e_i,...,e_i) = e_i
  auto t = build_diagonal(2, 3);
  std::vector<double> e1 = {0, 1, 0};
  CHECK(apply(t, {e1, e1}) == e1);
  CHECK_THROWS_AS(build_diagonal(0, 2), std::domain_error);
}

TEST_CASE("case2 construction") {
  auto t = build_case2(2, 3, 42);
  CHECK(t.dims == std::vector<std::size_t>{3, 3, 3});
  auto supp = support_of(t);
  CHECK(supp.size() == 9);  // n^2 cells (i,i,j)
  for (const auto& idx : supp) {
    CHECK(idx[0] == idx[1]);  // all argument slots pinned to the diagonal
  }
  for (double v : t.data) CHECK((v == 0.0 || v == 1.0 || v == -1.0));
  // deterministic in the seed
  CHECK(build_case2(2, 3, 42).data == t.data);
  CHECK(build_case2(2, 3, 43).data != t.data);
  // m = 3 support sits at (i,i,i,j)
  auto c3 = build_case2(3, 2, 7);
  for (const auto& idx : support_of(c3)) {
    CHECK(idx[0] == idx[1]);
    CHECK(idx[1] == idx[2]);
  }
  CHECK(support_of(c3).size() == 4);
  // n = 1 degenerates to a single sign
  auto t1 = build_case2(2, 1, 0);
  CHECK(t1.data.size() == 1);
  CHECK(std::abs(t1.data[0]) == 1.0);
}

TEST_CASE("case3 construction") {
  auto t = build_case3(2, 3, 9);
  CHECK(t.dims == std::vector<std::size_t>{3, 3, 3});
  auto supp = support_of(t);
  CHECK(supp.size() == 9);  // one output per argument cell
  for (const auto& idx : supp) CHECK(idx.back() == idx[idx.size() - 2]);
  // every coefficient vector A(e_{i_1},...,e_{i_m}) is a signed basis vector
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      std::vector<double> ei(3, 0.0), ej(3, 0.0);
      ei[i] = 1.0;
      ej[j] = 1.0;
      auto out = apply(t, {ei, ej});
      CHECK(p_norm(out, ex(2)) == 1.0);
      CHECK(std::abs(out[j]) == 1.0);  // lands on coordinate i_m = j
    }
  auto m3 = build_case3(3, 2, 4);
  CHECK(support_of(m3).size() == 8);
  CHECK_THROWS_AS(build_case3(1, 2, 0), std::domain_error);
}

TEST_CASE("bennett construction") {
  auto t = build_bennett(2, 3, 5, 11);
  CHECK(t.dims == std::vector<std::size_t>{3, 3, 5});
  auto supp = support_of(t);
  CHECK(supp.size() == 15);  // n * d
  for (const auto& idx : supp) CHECK(idx[0] == idx[1]);
  // d = n reproduces the case2 support geometry
  auto b = build_bennett(2, 4, 4, 3);
  auto c = build_case2(2, 4, 3);
  CHECK(support_of(b) == support_of(c));
  // coupled d: 2(1-h) with h = 0 gives n^2; h = 1 gives 1
  CHECK(bennett_coupled_d(4, Rat(0)) == 16);
  CHECK(bennett_coupled_d(4, Rat(1)) == 1);
  CHECK(bennett_coupled_d(16, Rat(1, 4)) == 64);  // 16^{3/2}
  CHECK(bennett_coupled_d(3, Rat(0)) == 9);
  CHECK_THROWS_AS(build_bennett(1, 0, 1, 0), std::domain_error);
}

TEST_CASE("chevet and fullsign constructions") {
  auto t = build_chevet(2, {3, 4, 2}, 13);
  CHECK(t.dims == std::vector<std::size_t>{3, 4, 2});
  CHECK(support_of(t).size() == 24);  // fully dense
  for (double v : t.data) CHECK(std::abs(v) == 1.0);
  CHECK_THROWS_AS(build_chevet(2, {3, 4}, 0), std::domain_error);

  auto f = build_fullsign(2, 3, 21);
  CHECK(f.dims == std::vector<std::size_t>{3, 3, 1});
  CHECK(support_of(f).size() == 9);
  CHECK(build_fullsign(2, 3, 21).data == f.data);
}

TEST_CASE("littlewood2x2") {
  auto t = build_littlewood2x2();
  CHECK(t.dims == std::vector<std::size_t>{2, 2, 1});
  CHECK(t.data == std::vector<double>{1, 1, 1, -1});
  MixedNormSpec spec;
  spec.t = {ex(4, 3), ex(4, 3)};
  spec.inner_q = ex(2);
  CHECK(mixed_norm(t, spec) == Catch::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
  auto est = norm_vertex_exact({CoeffTensor{t}, {inf(), inf()}, ex(1)});
  CHECK(est.value == 2.0);
  CHECK(mixed_norm(t, spec) / est.value == Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("mixed norms of the structured families follow closed forms") {
  MixedNormSpec spec;
  spec.inner_q = ex(2);

  // case2: n^{1/q + 1/t} under equal outer exponents
  const std::vector<std::pair<Exponent, Exponent>> tq = {
      {ex(4, 3), ex(2)}, {ex(2), ex(1)}, {inf(), ex(3)}};
  for (int n : {2, 5, 8}) {
    for (const auto& [t_o, q_i] : tq) {
      auto a = build_case2(2, n, 77);
      spec.t = {t_o, t_o};
      spec.inner_q = q_i;
      double expect = std::pow(n, q_i.recip().to_double() + t_o.recip().to_double());
      CHECK(mixed_norm(a, spec) == Catch::Approx(expect).epsilon(1e-10));
    }
  }

  // case3: n^{sum 1/t_k}, inner exponent irrelevant, unequal tuples included
  for (int n : {2, 4}) {
    auto a = build_case3(2, n, 5);
    spec.inner_q = ex(5);
    spec.t = {ex(4, 3), ex(3)};
    CHECK(mixed_norm(a, spec) ==
          Catch::Approx(std::pow(n, 3.0 / 4 + 1.0 / 3)).epsilon(1e-10));
    spec.t = {inf(), inf()};
    CHECK(mixed_norm(a, spec) == Catch::Approx(1.0).epsilon(1e-12));
  }

  // bennett: n^{1/t} d^{1/q}
  {
    auto a = build_bennett(2, 4, 9, 8);
    spec.inner_q = ex(2);
    spec.t = {ex(5, 4), ex(5, 4)};
    CHECK(mixed_norm(a, spec) ==
          Catch::Approx(std::pow(4.0, 0.8) * 3.0).epsilon(1e-10));
  }

  // diagonal: n^{1/t}
  {
    auto a = build_diagonal(2, 7);
    spec.inner_q = ex(3, 2);
    spec.t = {ex(4, 3), ex(4, 3)};
    CHECK(mixed_norm(a, spec) == Catch::Approx(std::pow(7.0, 0.75)).epsilon(1e-10));
  }
}

TEST_CASE("case2 norm is dominated by its linear-section norm") {
  // the multilinear form factors through the linear map given by the same
  // sign matrix, so its norm can never exceed the linear one
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto a = build_case2(2, 4, seed);
    NormProblem multi{CoeffTensor{a}, {inf(), inf()}, ex(2)};

    RealTensor section;
    section.dims = {4, 4};
    section.data.assign(16, 0.0);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        section.data[i * 4 + j] = a.data[(i * 4 + i) * 4 + j];
    // exact linear norm: a sign-linear map on the sup ball peaks at vertices
    double vl = 0.0;
    for (unsigned mask = 0; mask < 16; ++mask) {
      std::vector<double> z(4);
      for (unsigned i = 0; i < 4; ++i) z[i] = (mask >> i) & 1u ? -1.0 : 1.0;
      vl = std::max(vl, p_norm(apply(section, {z}), ex(2)));
    }

    AscentOptions opt;
    opt.restarts = 16;
    double vm = norm_ascent(multi, opt).value;
    CHECK(vm <= vl + 1e-9);
    CHECK(vm > 0.0);
  }
}

TEST_CASE("case3_analysis_p") {
  CHECK(case3_analysis_p(ex(2), ex(4, 3)) == ex(4, 3));  // 1/2 + 1/4
  CHECK(case3_analysis_p(inf(), ex(1)) == inf());        // 0 + 0
  CHECK(case3_analysis_p(ex(2), ex(1)) == ex(2));
}

TEST_CASE("build dispatch and field conversion") {
  ConstructionSpec cs;
  cs.kind = ConstructionKind::case2;
  cs.m = 2;
  cs.n = 3;
  cs.seed = 19;
  CoeffTensor real = build(cs);
  CHECK(field_of(real) == Field::real);
  cs.field = Field::complex;
  CoeffTensor cplx = build(cs);
  REQUIRE(field_of(cplx) == Field::complex);
  const auto& rt = std::get<RealTensor>(real);
  const auto& ct = std::get<CplxTensor>(cplx);
  REQUIRE(rt.data.size() == ct.data.size());
  for (std::size_t i = 0; i < rt.data.size(); ++i) {
    CHECK(ct.data[i].real() == rt.data[i]);
    CHECK(ct.data[i].imag() == 0.0);
  }

  cs.kind = ConstructionKind::chevet;
  cs.field = Field::real;
  CoeffTensor ch = build(cs);
  CHECK(dims_of(ch) == std::vector<std::size_t>{3, 3, 3});

  cs.kind = ConstructionKind::littlewood2x2;
  CHECK(dims_of(build(cs)) == std::vector<std::size_t>{2, 2, 1});

  cs.kind = ConstructionKind::fullsign;
  CHECK(dims_of(build(cs)) == std::vector<std::size_t>{3, 3, 1});

  cs.kind = ConstructionKind::bennett;
  cs.d = 5;
  CHECK(dims_of(build(cs)) == std::vector<std::size_t>{3, 3, 5});
}

TEST_CASE("construction kind names") {
  for (ConstructionKind k :
       {ConstructionKind::diagonal, ConstructionKind::case2, ConstructionKind::case3,
        ConstructionKind::bennett, ConstructionKind::chevet, ConstructionKind::littlewood2x2,
        ConstructionKind::fullsign}) {
    CHECK(parse_construction_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_construction_kind("nope"), std::invalid_argument);
}
