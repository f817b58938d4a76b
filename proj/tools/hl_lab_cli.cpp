// hl-lab: command-line front end for the exponent calculus, constant bounds,
// tensor constructions, norm estimation, and scaling experiments.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hllab/constants.hpp"
#include "hllab/constructions.hpp"
#include "hllab/exponents.hpp"
#include "hllab/norms.hpp"
#include "hllab/scan.hpp"
#include "hllab/tensor_io.hpp"

namespace {

using nlohmann::ordered_json;

std::vector<hllab::Exponent> parse_exp_list(const std::string& csv) {
  std::vector<hllab::Exponent> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(hllab::parse_exponent(item));
  if (out.empty()) throw std::invalid_argument("empty exponent list");
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad integer: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

ordered_json exp_list_json(const std::vector<hllab::Exponent>& v) {
  ordered_json j = ordered_json::array();
  for (const auto& e : v) j.push_back(e.str());
  return j;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw std::runtime_error("cannot open for writing: " + out_path);
  os << text;
}

struct Options {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  int trials = 20;
  int restarts = 32;
  double tol = 1e-10;
  int max_iter = 500;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for multilinear Hardy-Littlewood inequalities"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--seed", opt.seed, "RNG seed");
  app.add_option("--out", opt.out, "write output to this path instead of stdout");
  app.add_option("--format", opt.format, "scan output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--trials", opt.trials, "number of random draws per data point");
  app.add_option("--restarts", opt.restarts, "ascent restarts");
  app.add_option("--tol", opt.tol, "ascent stopping tolerance");
  app.add_option("--max-iter", opt.max_iter, "ascent sweep limit per restart");

  // ---- exponent ----
  auto* cmd_exp = app.add_subcommand("exponent", "classify a space signature");
  int exp_m = 2;
  std::string exp_s = "1", exp_q = "2", exp_p, exp_field = "real";
  cmd_exp->add_option("--m", exp_m, "linearity degree");
  cmd_exp->add_option("--s", exp_s, "codomain exponent");
  cmd_exp->add_option("--q", exp_q, "coefficient-norm exponent");
  cmd_exp->add_option("--p", exp_p, "comma-separated domain exponents")->required();
  cmd_exp->add_option("--field", exp_field, "real or complex");
  cmd_exp->callback([&] {
    hllab::SpaceSignature sig;
    sig.m = exp_m;
    sig.p = parse_exp_list(exp_p);
    sig.s = hllab::parse_exponent(exp_s);
    sig.q = hllab::parse_exponent(exp_q);
    sig.field = hllab::parse_field(exp_field);
    hllab::RegimeReport rep = hllab::classify(sig);
    ordered_json j;
    j["m"] = sig.m;
    j["p"] = exp_list_json(sig.p);
    j["s"] = sig.s.str();
    j["q"] = sig.q.str();
    j["field"] = to_string(sig.field);
    j["inv_p_sum"] = rep.inv_p_sum.str();
    j["regime"] = to_string(rep.regime);
    if (rep.lambda) j["lambda"] = rep.lambda->str();
    if (rep.rho_optimal) j["rho"] = rep.rho_optimal->str();
    if (rep.rho_sufficient) j["rho_sufficient"] = rep.rho_sufficient->str();
    if (rep.rho_necessary_bound) j["rho_necessary_bound"] = rep.rho_necessary_bound->str();
    emit(opt.out, j.dump(2) + "\n");
  });

  // ---- tuple-check ----
  auto* cmd_tc = app.add_subcommand("tuple-check", "test a mixed-exponent tuple");
  int tc_m = 2;
  std::string tc_s = "1", tc_q = "2", tc_p, tc_t, tc_field = "real";
  cmd_tc->add_option("--m", tc_m, "linearity degree");
  cmd_tc->add_option("--s", tc_s, "codomain exponent");
  cmd_tc->add_option("--q", tc_q, "coefficient-norm exponent");
  cmd_tc->add_option("--p", tc_p, "comma-separated domain exponents")->required();
  cmd_tc->add_option("--t", tc_t, "comma-separated tuple to test")->required();
  cmd_tc->add_option("--field", tc_field, "real or complex");
  cmd_tc->callback([&] {
    hllab::SpaceSignature sig;
    sig.m = tc_m;
    sig.p = parse_exp_list(tc_p);
    sig.s = hllab::parse_exponent(tc_s);
    sig.q = hllab::parse_exponent(tc_q);
    sig.field = hllab::parse_field(tc_field);
    std::vector<hllab::Exponent> t = parse_exp_list(tc_t);
    hllab::TupleFamily fam = hllab::admissible_family(sig);
    hllab::TupleCheck chk = hllab::check_tuple(sig, t);
    ordered_json j;
    j["t"] = exp_list_json(t);
    j["lambda"] = fam.lo.str();
    j["cap"] = fam.hi.str();
    j["budget"] = fam.budget.str();
    j["admissible"] = chk.admissible;
    if (chk.admissible || !chk.bad_index) j["slack"] = chk.slack.str();
    if (chk.bad_index) j["bad_index"] = *chk.bad_index;
    if (!chk.reason.empty()) j["reason"] = chk.reason;
    emit(opt.out, j.dump(2) + "\n");
  });

  // ---- constant ----
  auto* cmd_const = app.add_subcommand("constant", "evaluate constant bounds");
  cmd_const->require_subcommand(1);

  auto* cmd_kh = cmd_const->add_subcommand("khintchine", "scalar Khintchine constant");
  std::string kh_p = "2", kh_field = "real";
  cmd_kh->add_option("--p", kh_p, "moment exponent");
  cmd_kh->add_option("--field", kh_field, "real or complex");
  cmd_kh->callback([&] {
    double p = hllab::parse_exponent(kh_p).to_double();
    hllab::Field f = hllab::parse_field(kh_field);
    ordered_json j;
    j["p"] = p;
    j["field"] = to_string(f);
    j["crossover"] = hllab::khintchine_crossover();
    j["value"] = hllab::khintchine(p, f);
    emit(opt.out, j.dump(2) + "\n");
  });

  auto* cmd_bh = cmd_const->add_subcommand("bh", "classic multilinear constant bound");
  int bh_m = 2;
  std::string bh_field = "complex";
  cmd_bh->add_option("--m", bh_m, "linearity degree");
  cmd_bh->add_option("--field", bh_field, "real or complex");
  cmd_bh->callback([&] {
    hllab::Field f = hllab::parse_field(bh_field);
    ordered_json j;
    j["m"] = bh_m;
    j["field"] = to_string(f);
    j["value"] = hllab::bh_constant_classic(bh_m, f);
    emit(opt.out, j.dump(2) + "\n");
  });

  auto* cmd_mx = cmd_const->add_subcommand("mixed", "constant for a balanced exponent tuple");
  std::string mx_t, mx_field = "complex";
  double mx_a1 = 0.0;
  bool mx_has_a1 = false;
  cmd_mx->add_option("--t", mx_t, "comma-separated balanced tuple in [1,2]")->required();
  cmd_mx->add_option("--field", mx_field, "real or complex");
  auto* a1opt = cmd_mx->add_option("--a1", mx_a1, "complex Khintchine value to use at p = 1");
  cmd_mx->callback([&] {
    mx_has_a1 = a1opt->count() > 0;
    std::vector<hllab::Exponent> t = parse_exp_list(mx_t);
    hllab::Field f = hllab::parse_field(mx_field);
    std::optional<double> a1;
    if (mx_has_a1) a1 = mx_a1;
    ordered_json j;
    j["t"] = exp_list_json(t);
    j["field"] = to_string(f);
    j["value"] = hllab::mixed_exponent_constant(t, f, a1);
    emit(opt.out, j.dump(2) + "\n");
  });

  auto* cmd_t61 = cmd_const->add_subcommand("theorem61", "non-recursive vector-valued bound");
  int t61_m = 2;
  double t61_cqy = 1.0, t61_pir1 = 1.0, t61_q = 2.0, t61_r = 1.0;
  std::string t61_field = "real";
  cmd_t61->add_option("--m", t61_m, "linearity degree");
  cmd_t61->add_option("--cqy", t61_cqy, "cotype constant of the codomain");
  cmd_t61->add_option("--pir1", t61_pir1, "summing norm of the inclusion");
  cmd_t61->add_option("--q", t61_q, "cotype exponent");
  cmd_t61->add_option("--r", t61_r, "summing index");
  cmd_t61->add_option("--field", t61_field, "real or complex");
  cmd_t61->callback([&] {
    hllab::VectorConstantContext ctx = hllab::scalar_context(hllab::parse_field(t61_field));
    ctx.C_qY = t61_cqy;
    ctx.pi_r1 = t61_pir1;
    ctx.q = t61_q;
    ctx.r = t61_r;
    ordered_json j;
    j["m"] = t61_m;
    j["value"] = hllab::theorem61_constant(t61_m, ctx);
    emit(opt.out, j.dump(2) + "\n");
  });

  // ---- norm ----
  auto* cmd_norm = app.add_subcommand("norm", "estimate the operator norm of a tensor file");
  std::string nm_tensor, nm_p, nm_s = "1";
  bool nm_exact = false;
  cmd_norm->add_option("--tensor", nm_tensor, "tensor file path")->required();
  cmd_norm->add_option("--p", nm_p, "comma-separated domain exponents")->required();
  cmd_norm->add_option("--s", nm_s, "codomain exponent");
  cmd_norm->add_flag("--exact", nm_exact, "use exhaustive vertex enumeration");
  cmd_norm->callback([&] {
    hllab::NormProblem prob;
    prob.A = hllab::read_tensor(nm_tensor);
    prob.p = parse_exp_list(nm_p);
    prob.s = hllab::parse_exponent(nm_s);
    hllab::NormEstimate est;
    if (nm_exact) {
      est = hllab::norm_vertex_exact(prob);
    } else {
      hllab::AscentOptions ao;
      ao.restarts = opt.restarts;
      ao.max_iter = opt.max_iter;
      ao.tol = opt.tol;
      ao.seed = opt.seed;
      est = hllab::norm_ascent(prob, ao);
    }
    ordered_json j;
    j["value"] = est.value;
    j["exact"] = est.exact;
    j["restarts_used"] = est.restarts_used;
    j["iterations"] = est.iterations;
    j["residual"] = est.residual;
    emit(opt.out, j.dump(2) + "\n");
  });

  // ---- construct ----
  auto* cmd_build = app.add_subcommand("construct", "build a tensor and write it out");
  std::string cb_kind, cb_field = "real";
  int cb_m = 2, cb_n = 2, cb_d = 1;
  cmd_build->add_option("--kind", cb_kind, "construction kind")->required();
  cmd_build->add_option("--m", cb_m, "linearity degree");
  cmd_build->add_option("--n", cb_n, "per-axis dimension");
  cmd_build->add_option("--d", cb_d, "output dimension (bennett)");
  cmd_build->add_option("--field", cb_field, "real or complex");
  cmd_build->callback([&] {
    hllab::ConstructionSpec cs;
    cs.kind = hllab::parse_construction_kind(cb_kind);
    cs.m = cb_m;
    cs.n = cb_n;
    cs.d = cb_d;
    cs.field = hllab::parse_field(cb_field);
    cs.seed = opt.seed;
    hllab::CoeffTensor t = hllab::build(cs);
    std::ostringstream ss;
    hllab::write_tensor(ss, t);
    emit(opt.out, ss.str());
  });

  // ---- scan ----
  auto* cmd_scan = app.add_subcommand("scan", "scaling experiment over n");
  std::string sc_kind, sc_s = "1", sc_q = "2", sc_p, sc_t, sc_field = "real";
  std::string sc_nlist = "4,8,16,32";
  int sc_m = 2, sc_fixed_d = 0;
  cmd_scan->add_option("--kind", sc_kind, "construction kind")->required();
  cmd_scan->add_option("--m", sc_m, "linearity degree");
  cmd_scan->add_option("--n-list", sc_nlist, "ascending comma-separated dimensions");
  cmd_scan->add_option("--s", sc_s, "codomain exponent");
  cmd_scan->add_option("--q", sc_q, "inner/coefficient exponent");
  cmd_scan->add_option("--p", sc_p, "comma-separated domain exponents (default all inf)");
  cmd_scan->add_option("--t", sc_t, "comma-separated outer mixed-norm exponents")->required();
  cmd_scan->add_option("--field", sc_field, "real or complex");
  cmd_scan->add_option("--fixed-d", sc_fixed_d, "bennett: fixed output dimension (default: coupled)");
  cmd_scan->callback([&] {
    hllab::ScanConfig cfg;
    cfg.kind = hllab::parse_construction_kind(sc_kind);
    cfg.sig.m = sc_m;
    cfg.sig.p = sc_p.empty()
                    ? std::vector<hllab::Exponent>(sc_m, hllab::Exponent::infinity())
                    : parse_exp_list(sc_p);
    cfg.sig.s = hllab::parse_exponent(sc_s);
    cfg.sig.q = hllab::parse_exponent(sc_q);
    cfg.sig.field = hllab::parse_field(sc_field);
    cfg.mixed.t = parse_exp_list(sc_t);
    cfg.mixed.inner_q = hllab::parse_exponent(sc_q);
    cfg.n_list = parse_int_list(sc_nlist);
    cfg.trials = opt.trials;
    cfg.seed = opt.seed;
    cfg.ascent.restarts = opt.restarts;
    cfg.ascent.max_iter = opt.max_iter;
    cfg.ascent.tol = opt.tol;
    if (sc_fixed_d > 0) cfg.fixed_d = sc_fixed_d;
    std::vector<hllab::ScanRecord> recs = hllab::scan(cfg);
    if (opt.format == "csv") {
      std::ostringstream ss;
      hllab::write_csv(ss, recs);
      emit(opt.out, ss.str());
      return;
    }
    ordered_json arr = ordered_json::array();
    for (const auto& r : recs) {
      ordered_json j;
      j["kind"] = r.kind;
      j["n"] = r.n;
      if (r.d) j["d"] = *r.d;
      j["trials"] = r.trials;
      j["seed"] = r.seed;
      j["norm_lb"] = r.norm_lb;
      j["norm_exact"] = r.norm_exact;
      j["mixed"] = r.mixed;
      j["ratio"] = r.ratio;
      arr.push_back(std::move(j));
    }
    emit(opt.out, arr.dump(2) + "\n");
  });

  // ---- littlewood ----
  auto* cmd_lw = app.add_subcommand("littlewood", "ratio check for random 2-linear sign forms");
  int lw_nmax = 4;
  std::string lw_field = "real";
  cmd_lw->add_option("--n-max", lw_nmax, "largest dimension (<= 4 for exact norms)");
  cmd_lw->add_option("--field", lw_field, "real or complex");
  cmd_lw->callback([&] {
    hllab::AscentOptions ao;
    ao.restarts = opt.restarts;
    ao.max_iter = opt.max_iter;
    ao.tol = opt.tol;
    hllab::LittlewoodReport rep = hllab::littlewood_check(
        lw_nmax, opt.trials, hllab::parse_field(lw_field), opt.seed, ao);
    ordered_json j;
    j["n_max"] = rep.n_max;
    j["trials"] = rep.trials;
    j["field"] = to_string(rep.field);
    j["exact_norms"] = rep.exact_norms;
    j["two_by_two_ratio"] = rep.two_by_two_ratio;
    j["max_ratio"] = rep.max_ratio;
    j["caveat"] = rep.caveat;
    emit(opt.out, j.dump(2) + "\n");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
