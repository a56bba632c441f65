#include "qcone/serialize.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

namespace qcone {

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json sym_json(const SymMatrix& m) { return matrix_json(m.mat()); }

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

namespace {

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "matrix must be a list of rows");
  const int r = static_cast<int>(j.size());
  const int c = r ? static_cast<int>(j[0].size()) : 0;
  Matrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != c)
      throw Error(ErrorKind::ParseError, "ragged matrix rows");
    for (int k = 0; k < c; ++k) {
      if (!j[i][k].is_number()) throw Error(ErrorKind::ParseError, "matrix entry is not a number");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

Json terms_json(const std::vector<Term>& ts) {
  Json out = Json::array();
  for (const auto& t : ts) out.push_back(Json::array({t.block, t.i, t.j, t.coef}));
  return out;
}

std::vector<Term> terms_from_json(const Json& j) {
  std::vector<Term> ts;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 4) throw Error(ErrorKind::ParseError, "term must be [block, i, j, coef]");
    ts.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>(), t[3].get<double>()});
  }
  return ts;
}

const char* kind_label(BlockKind k) {
  switch (k) {
    case BlockKind::Psd: return "psd";
    case BlockKind::Nonneg: return "nonneg";
    case BlockKind::Free: return "free";
  }
  return "psd";
}

BlockKind parse_kind(const std::string& s) {
  if (s == "psd") return BlockKind::Psd;
  if (s == "nonneg") return BlockKind::Nonneg;
  if (s == "free") return BlockKind::Free;
  throw Error(ErrorKind::ParseError, "unknown block kind '" + s + "'");
}

SolveStatus parse_status(const std::string& s) {
  for (SolveStatus st : {SolveStatus::Optimal, SolveStatus::PrimalInfeasible, SolveStatus::DualInfeasible,
                         SolveStatus::Inaccurate})
    if (s == status_name(st)) return st;
  throw Error(ErrorKind::ParseError, "unknown status '" + s + "'");
}

Json block_values_json(const BlockValues& x) {
  Json out = Json::array();
  for (const auto& m : x) out.push_back(matrix_json(m));
  return out;
}

BlockValues block_values_from_json(const Json& j) {
  BlockValues x;
  for (const auto& m : j) x.push_back(matrix_from_json(m));
  return x;
}

Json monomial_json(const Monomial& m) {
  Json out = Json::array();
  for (int e : m) out.push_back(e);
  return out;
}

void dump(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        dump(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidParameter, "non-finite number in report");
      if (v == 0.0) v = 0.0;  // drop the sign of -0
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", v);
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

SymMatrix sym_from_json(const Json& j) { return SymMatrix(matrix_from_json(j)); }

Json graph_json(const Graph& g) {
  Json edges = Json::array();
  for (auto [u, v] : g.edges()) edges.push_back(Json::array({u, v}));
  return {{"n", g.n()}, {"edges", edges}};
}

Graph graph_from_json(const Json& j) {
  Graph g(j.at("n").get<int>());
  for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
  return g;
}

Json problem_to_json(const ConicProblem& p) {
  Json blocks = Json::array();
  for (const auto& b : p.blocks) blocks.push_back({{"kind", kind_label(b.kind)}, {"size", b.size}});
  Json cons = Json::array();
  for (const auto& c : p.constraints) cons.push_back({{"terms", terms_json(c.terms)}, {"rhs", c.rhs}});
  return {{"schema", "qcone.conic"},
          {"version", kConicSchemaVersion},
          {"sense", p.sense == Sense::Max ? "max" : "min"},
          {"blocks", blocks},
          {"objective", terms_json(p.objective)},
          {"constraints", cons}};
}

ConicProblem problem_from_json(const Json& j) {
  try {
    if (j.at("schema") != "qcone.conic") throw Error(ErrorKind::ParseError, "not a conic problem document");
    if (j.at("version").get<int>() != kConicSchemaVersion)
      throw Error(ErrorKind::ParseError, "unsupported schema version");
    ConicProblem p;
    const std::string sense = j.at("sense");
    if (sense != "max" && sense != "min") throw Error(ErrorKind::ParseError, "sense must be max or min");
    p.sense = sense == "max" ? Sense::Max : Sense::Min;
    for (const auto& b : j.at("blocks")) p.add_block(parse_kind(b.at("kind")), b.at("size").get<int>());
    p.objective = terms_from_json(j.at("objective"));
    for (const auto& c : j.at("constraints")) p.add_constraint(terms_from_json(c.at("terms")), c.at("rhs").get<double>());
    p.validate();
    return p;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("conic problem: ") + e.what());
  }
}

Json residuals_json(const Residuals& r) {
  return {{"primal_eq", r.primal_eq},   {"dual_eq", r.dual_eq},       {"primal_cone", r.primal_cone},
          {"dual_cone", r.dual_cone},   {"gap", r.gap},               {"primal_obj", r.primal_obj},
          {"dual_obj", r.dual_obj}};
}

Json outcome_to_json(const ConicOutcome& o) {
  return {{"schema", "qcone.outcome"},
          {"version", kConicSchemaVersion},
          {"status", status_name(o.status)},
          {"x", block_values_json(o.x)},
          {"y", vector_json(o.y)},
          {"z", block_values_json(o.z)},
          {"primal_obj", o.primal_obj},
          {"dual_obj", o.dual_obj},
          {"residuals", residuals_json(o.residuals)},
          {"iterations", o.iterations}};
}

ConicOutcome outcome_from_json(const Json& j) {
  try {
    if (j.at("schema") != "qcone.outcome") throw Error(ErrorKind::ParseError, "not a conic outcome document");
    ConicOutcome o;
    o.status = parse_status(j.at("status"));
    o.x = block_values_from_json(j.at("x"));
    o.z = block_values_from_json(j.at("z"));
    const auto& y = j.at("y");
    o.y = Vector(static_cast<int>(y.size()));
    for (size_t i = 0; i < y.size(); ++i) o.y(static_cast<int>(i)) = y[i].get<double>();
    o.primal_obj = j.at("primal_obj");
    o.dual_obj = j.at("dual_obj");
    o.iterations = j.at("iterations");
    const auto& r = j.at("residuals");
    o.residuals = {r.at("primal_eq"), r.at("dual_eq"),    r.at("primal_cone"), r.at("dual_cone"),
                   r.at("gap"),       r.at("primal_obj"), r.at("dual_obj")};
    return o;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("conic outcome: ") + e.what());
  }
}

Json certify_json(const CertifyReport& r) {
  return {{"primal_ok", r.primal_ok}, {"dual_ok", r.dual_ok}, {"gap_ok", r.gap_ok}, {"residuals", residuals_json(r.res)}};
}

Json certificate_json(const Certificate& c) {
  Json out = {{"kind", cert_name(c.kind)}};
  switch (c.kind) {
    case CertKind::None:
      break;
    case CertKind::GramFactors: {
      Json fs = Json::array();
      for (const auto& f : c.factors) fs.push_back(sym_json(f));
      for (const auto& v : c.vectors) fs.push_back(vector_json(v));
      out["factors"] = fs;
      break;
    }
    case CertKind::EigenWitness:
      out["lambda_min"] = c.lambda_min;
      out["vector"] = vector_json(c.vector);
      out["of"] = c.of;
      break;
    case CertKind::DualWitness: {
      out["dual_cone"] = c.dual_cone;
      out["value"] = c.value;
      if (c.x.dim()) out["x"] = sym_json(c.x);
      if (!c.factors.empty()) {
        Json fs = Json::array();
        for (const auto& f : c.factors) fs.push_back(sym_json(f));
        out["factors"] = fs;
      }
      if (!c.moments.empty()) {
        Json ms = Json::array();
        for (const auto& [m, v] : c.moments) ms.push_back({{"monomial", monomial_json(m)}, {"value", v}});
        out["moments"] = ms;
      }
      break;
    }
    case CertKind::Decomposition:
      out["p"] = sym_json(c.p);
      out["n"] = sym_json(c.n);
      break;
    case CertKind::SosGrams: {
      Json gs = Json::array(), bs = Json::array();
      for (const auto& g : c.grams) gs.push_back(sym_json(g));
      for (const auto& b : c.basis) bs.push_back(monomial_json(b));
      out["grams"] = gs;
      out["basis"] = bs;
      break;
    }
  }
  return out;
}

Json verdict_json(const MembershipVerdict& v) {
  return {{"verdict", member_name(v.kind)}, {"reason", v.reason}, {"certificate", certificate_json(v.cert)}};
}

Json nc_verdict_json(const NcVerdict& v) {
  Json out = {{"verdict", member_name(v.kind)}, {"reason", v.reason}};
  if (v.sos) {
    Json b0 = Json::array(), b1 = Json::array();
    for (const auto& w : v.sos->basis0) b0.push_back(word_str(w));
    for (const auto& w : v.sos->basis1) b1.push_back(word_str(w));
    out["certificate"] = {{"kind", "SosGrams"}, {"k", v.sos->k},         {"eps", v.sos->eps},
                          {"basis0", b0},       {"basis1", b1},          {"g0", sym_json(v.sos->g0)},
                          {"g1", sym_json(v.sos->g1)}};
  } else if (v.kind == MemberKind::NotMember) {
    Json classes = Json::object();
    for (const auto& [w, x] : v.functional) classes[word_str(w)] = x;
    out["certificate"] = {{"kind", "DualWitness"}, {"functional", classes}, {"value", v.functional_value}};
  }
  return out;
}

std::string canonical_dump(const Json& j) {
  std::string out;
  dump(j, out);
  return out;
}

std::string fnv1a_hex(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qcone
