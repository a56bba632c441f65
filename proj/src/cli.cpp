#include "qcone/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "qcone/cones.hpp"
#include "qcone/ncpoly.hpp"
#include "qcone/qrelax.hpp"
#include "qcone/serialize.hpp"
#include "qcone/theta.hpp"

namespace qcone::cli {

namespace {

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidParameter, "bad number '" + tok + "'");
    }
  }
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_numbers(s)) {
    if (v != static_cast<int>(v)) throw Error(ErrorKind::InvalidParameter, "expected an integer list");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::pair<int, int> parse_range(const std::string& s, int n) {
  if (s.empty()) return {1, n};
  auto dots = s.find("..");
  if (dots == std::string::npos) throw Error(ErrorKind::InvalidParameter, "t-range must look like a..b");
  auto lo = parse_ints(s.substr(0, dots)), hi = parse_ints(s.substr(dots + 2));
  if (lo.size() != 1 || hi.size() != 1) throw Error(ErrorKind::InvalidParameter, "t-range must look like a..b");
  if (lo[0] < 1 || hi[0] > n || lo[0] > hi[0])
    throw Error(ErrorKind::InvalidParameter, "t-range must satisfy 1 <= a <= b <= n");
  return {lo[0], hi[0]};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

ConeKind parse_cone_kind(const std::string& s) { return s == "psd" ? ConeKind::Psd : ConeKind::Dnn; }
QVariant parse_variant(const std::string& s) { return s == "relaxed" ? QVariant::Relaxed : QVariant::Full; }
QRole parse_role(const std::string& s) { return s == "stab" ? QRole::Stab : QRole::Chrom; }

Json matrix_list_json(const std::vector<SymMatrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(sym_json(m));
  return out;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::ParseError, "cannot write '" + path + "'");
  f << canonical_dump(j) << "\n";
}

struct Globals {
  std::optional<double> tol;
  uint64_t seed = 1;
  int max_iters = kDefaultMaxIters;
  int jobs = 1;
  bool timing = false;
};

// Result of one command before the common envelope is added.
struct Payload {
  Json inputs = Json::object();
  Json result = Json::object();
  Json residuals = Json::object();
  std::string raw;  // printed verbatim instead of a report when set
};

Json graph_inputs(const std::string& source, const Graph& g) {
  return {{"source", source}, {"graph", graph_json(g)}};
}

Json matrix_inputs(const std::string& source, const SymMatrix& a) {
  return {{"source", source}, {"matrix", sym_json(a)}};
}

// Commands

Payload cmd_theta(const Globals& gl, const std::string& graph, const std::string& variant, bool compl_) {
  Graph g = load_graph(graph, gl.seed);
  if (compl_) g = complement(g);
  const double tol = gl.tol.value_or(kDefaultTol);
  ThetaResult r = variant == "theta"   ? vartheta_K(g, ConeKind::Psd, tol)
                  : variant == "prime" ? vartheta_K(g, ConeKind::Dnn, tol)
                                       : Theta_K(complement(g), ConeKind::Dnn, tol);
  Payload p;
  p.inputs = graph_inputs(graph, g);
  p.inputs["variant"] = variant;
  p.inputs["complement"] = compl_;
  p.result = {{"value", r.value}, {"dual_value", r.dual_t}, {"status", status_name(r.status)},
              {"certified", r.report.ok()}};
  p.residuals = certify_json(r.report);
  return p;
}

struct QboundArgs {
  std::string role = "stab", graph, cone = "dnn", variant = "full", t_range, witness_out;
  int t = 0;
  bool reduce = false, aggregate = false, sweep = false;
};

Payload cmd_qbound(const Globals& gl, const QboundArgs& a) {
  Graph g = load_graph(a.graph, gl.seed);
  Payload p;
  p.inputs = graph_inputs(a.graph, g);
  p.inputs["role"] = a.role;
  if (a.aggregate) {
    if (a.role != "chrom") throw Error(ErrorKind::InvalidParameter, "--aggregate applies to chrom only");
    auto [lo, hi] = parse_range(a.t_range, g.n());
    p.inputs["t_range"] = {lo, hi};
    const int rows = std::max(aggregated_chrom_program(g, lo, hi).num_constraints(),
                              aggregated_chrom_dual_program(g, lo, hi).num_constraints());
    if (rows > kAggregateConstraintCap)
      throw Error(ErrorKind::SizeCapExceeded, "aggregated program has " + std::to_string(rows) +
                                                  " constraints, cap is " + std::to_string(kAggregateConstraintCap));
    const double tol = gl.tol.value_or(1e-8);
    AggregatedResult pr = aggregated_chrom(g, lo, hi, tol);
    AggregatedResult du = aggregated_chrom_dual(g, lo, hi, tol);
    p.result = {{"primal", pr.value},
                {"dual", du.value},
                {"primal_status", status_name(pr.status)},
                {"dual_status", status_name(du.status)},
                {"gap", std::abs(pr.value - du.value)},
                {"rounded", guarded_ceil(du.value)},
                {"full_range", lo == 1 && hi == g.n()}};
    p.residuals = {{"primal", certify_json(pr.report)}, {"dual", certify_json(du.report)}};
    return p;
  }
  p.inputs["cone"] = a.cone;
  p.inputs["variant"] = a.variant;
  p.inputs["reduced"] = a.reduce;
  const double tol = gl.tol.value_or(kDefaultTol);
  if (a.t > 0) {
    QProgramSpec spec{g, a.t, parse_role(a.role), parse_variant(a.variant), parse_cone_kind(a.cone), a.reduce};
    p.inputs["t"] = a.t;
    ProgramVerdict v = solve_program(spec, tol);
    p.result = {{"t", a.t}, {"verdict", feas_name(v.verdict.kind)}, {"note", v.verdict.note}};
    p.residuals = residuals_json(v.verdict.residuals);
    if (v.verdict.kind == FeasKind::Feasible) {
      WitnessReport wr = validate_gram(v.gram, spec, 1e-6);
      p.residuals["witness_max_residual"] = wr.max_residual;
      p.residuals["witness_cone_violation"] = wr.cone_violation;
      p.result["witness_valid"] = wr.pass;
      if (!a.witness_out.empty()) write_json_file(a.witness_out, matrix_list_json({v.gram}));
    } else if (v.verdict.kind == FeasKind::Infeasible) {
      p.residuals["ray_margin"] = v.verdict.margin;
    }
    return p;
  }
  StaircaseOptions opt;
  opt.reduced = a.reduce;
  opt.sweep = a.sweep;
  opt.jobs = gl.jobs;
  opt.tol = tol;
  StaircaseResult s = a.role == "stab" ? max_stab_t(g, parse_cone_kind(a.cone), parse_variant(a.variant), opt)
                                       : min_chrom_t(g, parse_cone_kind(a.cone), parse_variant(a.variant), opt);
  Json probes = Json::array();
  for (auto [t, k] : s.probes) probes.push_back({{"t", t}, {"verdict", feas_name(k)}});
  p.result = {{"lo", s.lo}, {"hi", s.hi}, {"decided", s.decided()}, {"probes", probes}};
  if (s.decided()) p.result["value"] = s.lo;
  p.residuals = {{"note", "each probe verdict is revalidated inside the feasibility check"}};
  return p;
}

Payload cmd_membership(const Globals& gl, const std::string& matrix, const std::string& cone, int refute_dim) {
  SymMatrix a = load_matrix(matrix);
  ConeName c = parse_cone(cone);
  MembershipVerdict v = membership(a, c);
  Payload p;
  p.inputs = matrix_inputs(matrix, a);
  p.inputs["cone"] = cone;
  if (v.kind == MemberKind::Unknown && c == ConeName::CsPlus && refute_dim > 0) {
    RefuteOptions ro;
    ro.seed = gl.seed;
    if (auto w = cs_dual_refute(a, refute_dim, ro)) {
      v.kind = MemberKind::NotMember;
      v.cert = *w;
      v.reason = "local search found a CS+ dual witness";
    }
    p.inputs["refute_dim"] = refute_dim;
  }
  p.result = verdict_json(v);
  const bool checked = v.kind == MemberKind::Unknown ? false
                       : v.cert.dual_cone == "CS+" ? revalidate_refuter(v.cert, a)
                                                   : revalidate(v, a, c);
  p.residuals = {{"revalidated", checked}};
  return p;
}

struct HierArgs {
  std::string graph, matrix, t_range;
  double eps = 0.0;
  int level = 2;
};

Payload cmd_psi(const Globals& gl, const HierArgs& a) {
  Graph g = load_graph(a.graph, gl.seed);
  auto [lo, hi] = parse_range(a.t_range, g.n());
  PsiResult r = psi_eps_k(g, a.eps, a.level, lo, hi, gl.tol.value_or(1e-8));
  Payload p;
  p.inputs = graph_inputs(a.graph, g);
  p.inputs["eps"] = a.eps;
  p.inputs["level"] = a.level;
  p.inputs["t_range"] = {lo, hi};
  p.result = {{"value", r.value},         {"status", status_name(r.status)},
              {"certified", r.certified}, {"nvars", r.nvars},
              {"basis_size", r.basis_size}, {"classes", r.classes},
              {"t_range", r.full_range ? "full" : "restricted"}};
  p.residuals = {{"certified", r.certified}};
  return p;
}

Payload cmd_knc(const Globals& gl, const HierArgs& a) {
  SymMatrix m = load_matrix(a.matrix);
  NcPoly poly = build_pM(m);
  NcVerdict v = knc_membership(m, a.eps, a.level, gl.tol.value_or(1e-7));
  Payload p;
  p.inputs = matrix_inputs(a.matrix, m);
  p.inputs["eps"] = a.eps;
  p.inputs["level"] = a.level;
  p.result = nc_verdict_json(v);
  bool ok = false;
  if (v.sos) ok = validate_sos(*v.sos, poly);
  if (v.kind == MemberKind::NotMember) ok = validate_functional(v, poly, a.eps, a.level);
  p.residuals = {{"revalidated", ok}};
  return p;
}

Payload cmd_exact(const Globals& gl, const std::string& what, const std::string& graph) {
  Graph g = load_graph(graph, gl.seed);
  Payload p;
  p.inputs = graph_inputs(graph, g);
  p.inputs["quantity"] = what;
  if (what == "alpha") {
    p.result = {{"value", exact_alpha(g)}};
  } else if (what == "omega") {
    p.result = {{"value", exact_omega(g)}};
  } else if (what == "chi") {
    p.result = {{"value", exact_chi(g)}};
  } else {
    Rational r = exact_chi_f(g);
    p.result = {{"value", r.str()}, {"numerator", r.num}, {"denominator", r.den}, {"approx", r.value()}};
  }
  p.residuals = {{"exact", true}};
  return p;
}

struct WitnessArgs {
  std::string kind, graph, role = "chrom", cone = "psd", variant = "full", file, colors, sets, out;
  int t = 0;
};

Payload cmd_witness(const Globals& gl, const WitnessArgs& a) {
  Graph g = load_graph(a.graph, gl.seed);
  Payload p;
  p.inputs = graph_inputs(a.graph, g);
  p.inputs["kind"] = a.kind;
  QWitness w;
  if (a.kind == "coloring") {
    w = witness_from_coloring(g, parse_ints(a.colors), a.t);
    p.inputs["colors"] = a.colors;
  } else if (a.kind == "stable-sets") {
    std::vector<std::vector<int>> sets;
    std::stringstream ss(a.sets);
    std::string tok;
    while (std::getline(ss, tok, ';')) sets.push_back(parse_ints(tok));
    w = witness_from_stable_sets(g, sets);
    p.inputs["sets"] = a.sets;
  } else {
    Json j = parse_json_file(a.file);
    if (!j.is_array() || j.empty()) throw Error(ErrorKind::ParseError, "witness file must be a list of matrices");
    w.role = parse_role(a.role);
    w.t = a.t;
    if (j.size() == 1) {
      w.gram = sym_from_json(j[0]);
    } else {
      for (const auto& m : j) w.factors.push_back(sym_from_json(m));
    }
    p.inputs["file"] = a.file;
    p.inputs["role"] = a.role;
  }
  QProgramSpec spec{g, w.t, w.role, parse_variant(a.variant), parse_cone_kind(a.cone), false};
  WitnessReport r = validate_witness(w, spec, gl.tol.value_or(1e-8));
  p.inputs["t"] = w.t;
  p.inputs["cone"] = a.cone;
  p.inputs["variant"] = a.variant;
  Json viol = Json::array();
  for (const auto& [name, v] : r.violations) viol.push_back({{"condition", name}, {"residual", v}});
  p.result = {{"pass", r.pass}, {"role", w.role == QRole::Stab ? "stab" : "chrom"}, {"t", w.t}};
  p.residuals = {{"max_residual", r.max_residual}, {"worst", r.worst}, {"cone_violation", r.cone_violation},
                 {"violations", viol}};
  if (!a.out.empty())
    write_json_file(a.out, w.factors.empty() ? matrix_list_json({w.gram}) : matrix_list_json(w.factors));
  return p;
}

Payload cmd_gen(const Globals& gl, const std::string& graph, bool compl_, const std::string& format) {
  Graph g = load_graph(graph, gl.seed);
  if (compl_) g = complement(g);
  Payload p;
  if (format == "dimacs") {
    p.raw = write_dimacs(g);
    return p;
  }
  p.inputs = {{"source", graph}, {"complement", compl_}};
  p.result = {{"graph", graph_json(g)}, {"dimacs", write_dimacs(g)}};
  p.residuals = {{"exact", true}};
  return p;
}

void emit_error(std::ostream& err, const std::string& kind, const std::string& msg) {
  Json e = {{"error", {{"kind", kind}, {"message", msg}}}};
  err << canonical_dump(e) << "\n";
}

}  // namespace

Graph load_graph(const std::string& arg, uint64_t seed) {
  if (arg.rfind("gen:", 0) == 0) {
    std::string spec = arg.substr(4);
    if (spec.rfind("random:", 0) == 0 && std::count(spec.begin(), spec.end(), ',') == 1)
      spec += "," + std::to_string(seed);
    return generate_from_spec(spec);
  }
  if (ends_with(arg, ".json")) return graph_from_json(parse_json_file(arg));
  return read_dimacs_file(arg);
}

SymMatrix load_matrix(const std::string& arg) {
  if (arg.rfind("named:", 0) == 0) {
    std::string name = arg.substr(6), params;
    if (auto c = name.find(':'); c != std::string::npos) {
      params = name.substr(c + 1);
      name = name.substr(0, c);
    }
    if (name == "horn" || name == "H") return horn();
    if (name == "L") return matL();
    if (name == "W") return matW();
    if (name == "Lprime") return matLprime();
    if (name == "mbc") {
      auto v = parse_numbers(params);
      if (v.size() != 2) throw Error(ErrorKind::InvalidParameter, "named:mbc needs b,c");
      return mbc(v[0], v[1]);
    }
    if (name == "identity") {
      auto v = parse_ints(params);
      if (v.size() != 1 || v[0] < 1) throw Error(ErrorKind::InvalidParameter, "named:identity needs n");
      return SymMatrix::identity(v[0]);
    }
    throw Error(ErrorKind::InvalidParameter, "unknown named matrix '" + name + "'");
  }
  if (ends_with(arg, ".json")) return sym_from_json(parse_json_file(arg));
  return read_matrix_file(arg);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conic bounds for quantum graph parameters", "qcone"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  Globals gl;
  if (const char* env = std::getenv("QCONE_TOL")) {
    try {
      gl.tol = std::stod(env);
    } catch (const std::exception&) {
      emit_error(err, "UsageError", "QCONE_TOL is not a number");
      return kExitUsage;
    }
  }
  if (const char* env = std::getenv("QCONE_MAX_ITERS")) gl.max_iters = std::atoi(env);
  double tol_flag = 0.0;
  auto* tol_opt = app.add_option("--tol", tol_flag, "solver tolerance (env QCONE_TOL)")->check(CLI::PositiveNumber);
  app.add_option("--seed", gl.seed, "seed for randomized routines");
  app.add_option("--max-iters", gl.max_iters, "interior-point iteration limit (env QCONE_MAX_ITERS)")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", gl.jobs, "parallel staircase probes")->check(CLI::PositiveNumber);
  app.add_flag("--timing", gl.timing, "include wall time in the report");

  std::function<Payload()> action;

  // theta
  auto* th = app.add_subcommand("theta", "theta-number variants");
  std::string th_graph, th_variant = "theta";
  bool th_compl = false;
  th->add_option("--graph", th_graph, "gen:family:params or DIMACS file")->required();
  th->add_option("--variant", th_variant)->check(CLI::IsMember({"theta", "prime", "plus"}));
  th->add_flag("--complement", th_compl);
  th->callback([&] { action = [&] { return cmd_theta(gl, th_graph, th_variant, th_compl); }; });

  // qbound
  auto* qb = app.add_subcommand("qbound", "DNN/PSD relaxations of the quantum parameters");
  QboundArgs qa;
  qb->add_option("role", qa.role)->required()->check(CLI::IsMember({"stab", "chrom"}));
  qb->add_option("--graph", qa.graph)->required();
  qb->add_option("--cone", qa.cone)->check(CLI::IsMember({"psd", "dnn"}));
  qb->add_option("--variant", qa.variant)->check(CLI::IsMember({"full", "relaxed"}));
  qb->add_flag("--reduce", qa.reduce, "use the symmetry-reduced program");
  qb->add_flag("--sweep", qa.sweep, "probe every t instead of bisecting");
  qb->add_option("--t", qa.t, "single feasibility probe at t")->check(CLI::PositiveNumber);
  qb->add_option("--witness-out", qa.witness_out, "write the FEASIBLE Gram matrix as JSON");
  qb->add_flag("--aggregate", qa.aggregate, "aggregated chromatic program and its dual");
  qb->add_option("--t-range", qa.t_range, "a..b");
  qb->callback([&] { action = [&] { return cmd_qbound(gl, qa); }; });

  // membership
  auto* mb = app.add_subcommand("membership", "cone membership with certificates");
  std::string mb_matrix, mb_cone;
  int mb_refute = 0;
  mb->add_option("--matrix", mb_matrix, "matrix file or named:horn|L|W|Lprime|mbc:b,c|identity:n")->required();
  mb->add_option("--cone", mb_cone)->required()->check(
      CLI::IsMember({"cp", "cspsd", "dnn", "dnnstar", "cop0", "cop1"}));
  mb->add_option("--refute-dim", mb_refute, "try a CS+ dual witness of this size when undecided");
  mb->callback([&] { action = [&] { return cmd_membership(gl, mb_matrix, mb_cone, mb_refute); }; });

  // hierarchy
  auto* hi = app.add_subcommand("hierarchy", "tracial SOS hierarchy");
  hi->require_subcommand(1);
  HierArgs ha;
  auto* psi = hi->add_subcommand("psi", "graph parameter Psi_eps^k");
  psi->add_option("--graph", ha.graph)->required();
  psi->add_option("--eps", ha.eps)->check(CLI::NonNegativeNumber);
  psi->add_option("--level", ha.level)->check(CLI::Range(2, 6));
  psi->add_option("--t-range", ha.t_range, "a..b, default 1..n");
  psi->callback([&] { action = [&] { return cmd_psi(gl, ha); }; });
  auto* knc = hi->add_subcommand("knc", "membership of p_M + eps in the level-k module");
  knc->add_option("--matrix", ha.matrix)->required();
  knc->add_option("--eps", ha.eps)->check(CLI::NonNegativeNumber);
  knc->add_option("--level", ha.level)->check(CLI::Range(2, 6));
  knc->callback([&] { action = [&] { return cmd_knc(gl, ha); }; });

  // exact
  auto* ex = app.add_subcommand("exact", "exact small-graph oracles");
  std::string ex_what, ex_graph;
  ex->add_option("quantity", ex_what)->required()->check(CLI::IsMember({"alpha", "omega", "chi", "chif"}));
  ex->add_option("--graph", ex_graph)->required();
  ex->callback([&] { action = [&] { return cmd_exact(gl, ex_what, ex_graph); }; });

  // witness
  auto* wi = app.add_subcommand("witness", "build or check quantum witnesses");
  WitnessArgs wa;
  wi->add_option("kind", wa.kind)->required()->check(CLI::IsMember({"coloring", "stable-sets", "check"}));
  wi->add_option("--graph", wa.graph)->required();
  wi->add_option("--t", wa.t, "number of colors / stable set size");
  wi->add_option("--colors", wa.colors, "comma-separated colors in [0, t)");
  wi->add_option("--sets", wa.sets, "stable sets, e.g. 0,2;1,3");
  wi->add_option("--file", wa.file, "JSON list of matrices: factors, or one Gram matrix");
  wi->add_option("--role", wa.role)->check(CLI::IsMember({"stab", "chrom"}));
  wi->add_option("--cone", wa.cone)->check(CLI::IsMember({"psd", "dnn"}));
  wi->add_option("--variant", wa.variant)->check(CLI::IsMember({"full", "relaxed"}));
  wi->add_option("--out", wa.out, "write the witness factors as JSON");
  wi->callback([&] { action = [&] { return cmd_witness(gl, wa); }; });

  // gen
  auto* gn = app.add_subcommand("gen", "generate a graph");
  std::string gn_graph, gn_format = "json";
  bool gn_compl = false;
  gn->add_option("--graph", gn_graph)->required();
  gn->add_flag("--complement", gn_compl);
  gn->add_option("--format", gn_format)->check(CLI::IsMember({"json", "dimacs"}));
  gn->callback([&] { action = [&] { return cmd_gen(gl, gn_graph, gn_compl, gn_format); }; });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    emit_error(err, "UsageError", e.what());
    return kExitUsage;
  }
  if (*tol_opt) gl.tol = tol_flag;
  if (!action) {
    emit_error(err, "UsageError", "no command given");
    return kExitUsage;
  }

  Json command = Json::array();
  for (const auto& a : args) command.push_back(a);
  const int saved_iters = default_max_iters();
  try {
    set_default_max_iters(gl.max_iters);
    auto t0 = std::chrono::steady_clock::now();
    Payload p = action();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    set_default_max_iters(saved_iters);
    if (!p.raw.empty()) {
      out << p.raw;
      return kExitOk;
    }
    p.inputs["digest"] = fnv1a_hex(canonical_dump(p.inputs));
    Json report = {{"command", command},   {"inputs", p.inputs},       {"result", p.result},
                   {"residuals", p.residuals}, {"version", kToolVersion}, {"seed", gl.seed},
                   {"max_iters", gl.max_iters}};
    report["tol"] = gl.tol ? Json(*gl.tol) : Json("default");
    if (gl.timing) report["timing"] = {{"seconds", secs}};
    const std::string text = canonical_dump(report);
    out << text << "\n";
    if (!out) throw Error(ErrorKind::ParseError, "cannot write report");
    return kExitOk;
  } catch (const Error& e) {
    set_default_max_iters(saved_iters);
    emit_error(err, error_kind_name(e.kind()), e.what());
    return kExitDomain;
  } catch (const std::exception& e) {
    set_default_max_iters(saved_iters);
    emit_error(err, "InternalError", e.what());
    return kExitDomain;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace qcone::cli
