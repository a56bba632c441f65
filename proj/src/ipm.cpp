// Infeasible primal-dual path-following method, HKM direction with
// Mehrotra predictor-corrector, dense Schur complement.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "qcone/conic.hpp"
#include "qcone/kernels.hpp"

namespace qcone {

namespace {

using kernels::BlockConstraints;
using kernels::Entry;

struct Compiled {
  int m = 0;
  Vector b;
  std::vector<int> row_of;  // user constraint -> row, -1 when dropped

  std::vector<int> psd_user;
  std::vector<Matrix> c_psd;
  std::vector<BlockConstraints> a_psd;

  int nl = 0;
  std::vector<int> lp_user, lp_off;
  Vector c_lp;
  std::vector<std::vector<std::pair<int, double>>> lp_cols;

  int nf = 0;
  std::vector<int> free_user, free_off;
  Vector c_free;
  Matrix f;  // m x nf

  std::vector<int> block_slot;  // user block -> index within its kind
  int bad_row = -1;             // empty row with nonzero rhs
};

Compiled compile(const ConicProblem& p) {
  Compiled c;
  const double sgn = p.sense == Sense::Max ? -1.0 : 1.0;
  c.block_slot.assign(p.blocks.size(), -1);
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    const ConeBlock& b = p.blocks[k];
    if (b.kind == BlockKind::Psd) {
      c.block_slot[k] = static_cast<int>(c.psd_user.size());
      c.psd_user.push_back(static_cast<int>(k));
      c.c_psd.push_back(Matrix::Zero(b.size, b.size));
      BlockConstraints bc;
      bc.n = b.size;
      c.a_psd.push_back(bc);
    } else if (b.kind == BlockKind::Nonneg) {
      c.block_slot[k] = static_cast<int>(c.lp_user.size());
      c.lp_user.push_back(static_cast<int>(k));
      c.lp_off.push_back(c.nl);
      c.nl += b.size;
    } else {
      c.block_slot[k] = static_cast<int>(c.free_user.size());
      c.free_user.push_back(static_cast<int>(k));
      c.free_off.push_back(c.nf);
      c.nf += b.size;
    }
  }
  c.c_lp = Vector::Zero(c.nl);
  c.c_free = Vector::Zero(c.nf);
  c.lp_cols.resize(c.nl);

  for (const Term& t : p.objective) {
    const ConeBlock& b = p.blocks[t.block];
    int s = c.block_slot[t.block];
    if (b.kind == BlockKind::Psd) {
      if (t.i == t.j) {
        c.c_psd[s](t.i, t.i) += sgn * t.coef;
      } else {
        c.c_psd[s](t.i, t.j) += 0.5 * sgn * t.coef;
        c.c_psd[s](t.j, t.i) += 0.5 * sgn * t.coef;
      }
    } else if (b.kind == BlockKind::Nonneg) {
      c.c_lp(c.lp_off[s] + t.i) += sgn * t.coef;
    } else {
      c.c_free(c.free_off[s] + t.i) += sgn * t.coef;
    }
  }

  // Canonical sparse form of each row, used for merging repeated terms and
  // dropping exact duplicate rows.
  using Key = std::vector<std::tuple<int, int, int, double>>;
  std::map<std::pair<Key, double>, int> seen;
  std::vector<Key> rows;
  std::vector<double> rhs;
  c.row_of.assign(p.constraints.size(), -1);
  for (size_t j = 0; j < p.constraints.size(); ++j) {
    std::map<std::tuple<int, int, int>, double> acc;
    for (const Term& t : p.constraints[j].terms) {
      int i = std::min(t.i, t.j), jj = std::max(t.i, t.j);
      acc[{t.block, i, jj}] += t.coef;
    }
    Key key;
    for (const auto& [idx, v] : acc)
      if (v != 0.0) key.emplace_back(std::get<0>(idx), std::get<1>(idx), std::get<2>(idx), v);
    double r = p.constraints[j].rhs;
    if (key.empty()) {
      if (r != 0.0 && c.bad_row < 0) c.bad_row = static_cast<int>(j);
      continue;
    }
    auto it = seen.find({key, r});
    if (it != seen.end()) continue;
    int row = static_cast<int>(rows.size());
    seen[{key, r}] = row;
    c.row_of[j] = row;
    rows.push_back(std::move(key));
    rhs.push_back(r);
  }
  c.m = static_cast<int>(rows.size());
  c.b = Eigen::Map<Vector>(rhs.data(), c.m);
  c.f = Matrix::Zero(c.m, c.nf);

  for (int row = 0; row < c.m; ++row) {
    std::map<int, std::vector<Entry>> per_block;
    for (const auto& [blk, i, j, v] : rows[row]) {
      const ConeBlock& b = p.blocks[blk];
      int s = c.block_slot[blk];
      if (b.kind == BlockKind::Psd) {
        auto& e = per_block[s];
        if (i == j) {
          e.push_back({i, i, v});
        } else {
          e.push_back({i, j, 0.5 * v});
          e.push_back({j, i, 0.5 * v});
        }
      } else if (b.kind == BlockKind::Nonneg) {
        c.lp_cols[c.lp_off[s] + i].push_back({row, v});
      } else {
        c.f(row, c.free_off[s] + i) += v;
      }
    }
    for (auto& [s, e] : per_block) {
      c.a_psd[s].cons.push_back(row);
      c.a_psd[s].mats.push_back(std::move(e));
    }
  }
  return c;
}

struct Iterate {
  std::vector<Matrix> x, z;
  Vector xl, zl, f, y;
};

// <A_j, W> for every row, W possibly nonsymmetric.
void apply_a(const Compiled& c, const std::vector<Matrix>& w, const Vector& xl,
             const Vector& f, Vector& out) {
  out.setZero(c.m);
  for (size_t k = 0; k < c.a_psd.size(); ++k) {
    const auto& bc = c.a_psd[k];
    const Matrix& wk = w[k];
    for (size_t a = 0; a < bc.cons.size(); ++a) {
      double s = 0.0;
      for (const Entry& e : bc.mats[a]) s += e.v * wk(e.p, e.q);
      out(bc.cons[a]) += s;
    }
  }
  for (int l = 0; l < c.nl; ++l)
    for (const auto& [row, v] : c.lp_cols[l]) out(row) += v * xl(l);
  if (c.nf) out.noalias() += c.f * f;
}

void apply_at(const Compiled& c, const Vector& y, std::vector<Matrix>& mats, Vector& lp,
              Vector& fr) {
  mats.resize(c.a_psd.size());
  for (size_t k = 0; k < c.a_psd.size(); ++k) {
    const auto& bc = c.a_psd[k];
    mats[k].setZero(bc.n, bc.n);
    for (size_t a = 0; a < bc.cons.size(); ++a) {
      double yy = y(bc.cons[a]);
      if (yy == 0.0) continue;
      for (const Entry& e : bc.mats[a]) mats[k](e.p, e.q) += yy * e.v;
    }
  }
  lp.setZero(c.nl);
  for (int l = 0; l < c.nl; ++l)
    for (const auto& [row, v] : c.lp_cols[l]) lp(l) += v * y(row);
  fr = c.nf ? Vector(c.f.transpose() * y) : Vector();
}

double max_step_psd(const Matrix& x, const Matrix& dx) {
  Eigen::LLT<Matrix> llt(x);
  Matrix w;
  if (llt.info() == Eigen::Success) {
    Matrix l1 = llt.matrixL().solve(dx);
    w = llt.matrixL().solve(Matrix(l1.transpose()));
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x);
    Vector d = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    w = d.asDiagonal() * (es.eigenvectors().transpose() * dx * es.eigenvectors()) * d.asDiagonal();
  }
  w = 0.5 * (w + w.transpose());
  double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(w, Eigen::EigenvaluesOnly).eigenvalues()(0);
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

double max_step_lp(const Vector& x, const Vector& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (int i = 0; i < x.size(); ++i)
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  return a;
}

double inf_norm(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

class Solver {
 public:
  Solver(const Compiled& c, const SolverOptions& o) : c_(c), o_(o) {}

  ConicOutcome run(const ConicProblem& p);

 private:
  struct Direction {
    std::vector<Matrix> dx, dz;
    Vector dxl, dzl, df, dy;
  };

  void init();
  bool factor();
  void direction(double sigma_mu, const Direction* corr, Direction& d);
  void residuals();

  const Compiled& c_;
  const SolverOptions& o_;
  Iterate it_;
  double nu_ = 0.0;

  // Residuals of the current iterate.
  Vector rp_;
  std::vector<Matrix> rd_;
  Vector rdl_, rf_;
  double mu_ = 0.0, pobj_ = 0.0, dobj_ = 0.0;
  double relp_ = 0.0, reld_ = 0.0, relgap_ = 0.0;
  double bscale_ = 1.0, cscale_ = 1.0;

  // Factorizations.
  std::vector<Matrix> zinv_;
  Eigen::LLT<Matrix> mchol_;
  Matrix mm_;
  Matrix minv_f_;
  Eigen::LDLT<Matrix> schol_;
};

void Solver::init() {
  const int m = c_.m;
  std::vector<double> anorm(c_.a_psd.size(), 0.0);
  it_.x.clear();
  it_.z.clear();
  for (size_t k = 0; k < c_.a_psd.size(); ++k) {
    const auto& bc = c_.a_psd[k];
    const int n = bc.n;
    double xi = std::max(10.0, std::sqrt(double(n)));
    double eta = std::max({10.0, std::sqrt(double(n)), c_.c_psd[k].norm()});
    for (size_t a = 0; a < bc.cons.size(); ++a) {
      double fn = 0.0;
      for (const Entry& e : bc.mats[a]) fn += e.v * e.v;
      fn = std::sqrt(fn);
      xi = std::max(xi, n * (1.0 + std::abs(c_.b(bc.cons[a]))) / (1.0 + fn));
      eta = std::max(eta, fn);
    }
    it_.x.push_back(xi * Matrix::Identity(n, n));
    it_.z.push_back(eta * Matrix::Identity(n, n));
    nu_ += n;
  }
  it_.xl = Vector::Constant(c_.nl, 1.0);
  it_.zl = Vector::Constant(c_.nl, 1.0);
  for (int l = 0; l < c_.nl; ++l) {
    double xi = 10.0, eta = std::max(10.0, std::abs(c_.c_lp(l)));
    for (const auto& [row, v] : c_.lp_cols[l]) {
      xi = std::max(xi, (1.0 + std::abs(c_.b(row))) / (1.0 + std::abs(v)));
      eta = std::max(eta, std::abs(v));
    }
    it_.xl(l) = xi;
    it_.zl(l) = eta;
  }
  nu_ += c_.nl;
  it_.f = Vector::Zero(c_.nf);
  it_.y = Vector::Zero(m);
  bscale_ = 1.0 + (m ? c_.b.cwiseAbs().maxCoeff() : 0.0);
  double cm = 0.0;
  for (const auto& ck : c_.c_psd) cm = std::max(cm, inf_norm(ck));
  cm = std::max({cm, inf_norm(c_.c_lp), inf_norm(c_.c_free)});
  cscale_ = 1.0 + cm;
}

void Solver::residuals() {
  Vector ax;
  apply_a(c_, it_.x, it_.xl, it_.f, ax);
  rp_ = c_.b - ax;
  std::vector<Matrix> aty;
  Vector atyl, atyf;
  apply_at(c_, it_.y, aty, atyl, atyf);
  rd_.resize(aty.size());
  double dmax = 0.0, xz = 0.0;
  pobj_ = 0.0;
  for (size_t k = 0; k < aty.size(); ++k) {
    rd_[k] = c_.c_psd[k] - aty[k] - it_.z[k];
    dmax = std::max(dmax, inf_norm(rd_[k]));
    xz += it_.x[k].cwiseProduct(it_.z[k]).sum();
    pobj_ += c_.c_psd[k].cwiseProduct(it_.x[k]).sum();
  }
  rdl_ = c_.c_lp - atyl - it_.zl;
  rf_ = c_.nf ? Vector(c_.c_free - atyf) : Vector();
  dmax = std::max({dmax, inf_norm(rdl_), inf_norm(rf_)});
  xz += it_.xl.dot(it_.zl);
  pobj_ += c_.c_lp.dot(it_.xl) + (c_.nf ? c_.c_free.dot(it_.f) : 0.0);
  dobj_ = c_.m ? c_.b.dot(it_.y) : 0.0;
  mu_ = nu_ > 0 ? xz / nu_ : 0.0;
  relp_ = inf_norm(rp_) / bscale_;
  reld_ = dmax / cscale_;
  relgap_ = std::abs(pobj_ - dobj_) / (1.0 + std::abs(pobj_) + std::abs(dobj_));
}

bool Solver::factor() {
  const int m = c_.m;
  zinv_.resize(it_.z.size());
  for (size_t k = 0; k < it_.z.size(); ++k) {
    Eigen::LLT<Matrix> lz(it_.z[k]);
    if (lz.info() != Eigen::Success) return false;
    zinv_[k] = lz.solve(Matrix::Identity(it_.z[k].rows(), it_.z[k].cols()));
    zinv_[k] = 0.5 * (zinv_[k] + zinv_[k].transpose());
  }
  Matrix mm = Matrix::Zero(m, m);
  for (size_t k = 0; k < c_.a_psd.size(); ++k) {
    if (o_.use_openmp)
      kernels::schur_psd_omp(c_.a_psd[k], it_.x[k], zinv_[k], mm);
    else
      kernels::schur_psd_serial(c_.a_psd[k], it_.x[k], zinv_[k], mm);
  }
  for (int l = 0; l < c_.nl; ++l) {
    double d = it_.xl(l) / it_.zl(l);
    const auto& col = c_.lp_cols[l];
    for (const auto& [r1, v1] : col)
      for (const auto& [r2, v2] : col) mm(r1, r2) += d * v1 * v2;
  }
  double dmax = m ? mm.diagonal().cwiseAbs().maxCoeff() : 1.0;
  if (!(dmax > 0.0) || !std::isfinite(dmax)) dmax = 1.0;
  // Tiny-pivot rows (dependent or empty constraints) get a floor.
  for (int i = 0; i < m; ++i) mm(i, i) = std::max(mm(i, i), 1e-14 * dmax);
  double reg = 0.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Matrix mr = mm;
    if (reg > 0.0) mr.diagonal().array() += reg;
    mchol_.compute(mr);
    if (mchol_.info() == Eigen::Success) break;
    reg = reg == 0.0 ? 1e-13 * dmax : reg * 10.0;
    if (attempt == 11) return false;
  }
  mm_ = std::move(mm);
  if (c_.nf) {
    minv_f_ = mchol_.solve(c_.f);
    Matrix s = c_.f.transpose() * minv_f_;
    s = 0.5 * (s + s.transpose());
    double smax = std::max(1e-300, s.diagonal().cwiseAbs().maxCoeff());
    s.diagonal().array() += 1e-14 * smax;
    schol_.compute(s);
    if (schol_.info() != Eigen::Success) return false;
  }
  return true;
}

void Solver::direction(double sigma_mu, const Direction* corr, Direction& d) {
  const size_t np = it_.x.size();
  std::vector<Matrix> r(np), h(np);
  for (size_t k = 0; k < np; ++k) {
    const Matrix& x = it_.x[k];
    const Matrix& zi = zinv_[k];
    // R = Rc Zinv with Rc = sigma*mu I - XZ - dXa dZa.
    r[k] = sigma_mu * zi - x;
    if (corr) r[k].noalias() -= corr->dx[k] * (corr->dz[k] * zi);
    h[k].noalias() = x * (rd_[k] * zi);
  }
  Vector rcl = Vector::Constant(c_.nl, sigma_mu) - it_.xl.cwiseProduct(it_.zl);
  if (corr) rcl -= corr->dxl.cwiseProduct(corr->dzl);
  Vector rl = rcl.cwiseQuotient(it_.zl);
  Vector hl = it_.xl.cwiseProduct(rdl_).cwiseQuotient(it_.zl);

  Vector ar, ah;
  Vector zf = Vector::Zero(c_.nf);
  apply_a(c_, r, rl, zf, ar);
  apply_a(c_, h, hl, zf, ah);
  Vector rhs = rp_ - ar + ah;

  if (c_.nf) {
    // [M F; F' 0] [dy; df] = [rhs; rf], with refinement since M^-1 F loses
    // accuracy as the iterates approach the boundary.
    auto kkt = [&](const Vector& r1, const Vector& r2, Vector& dy, Vector& df) {
      Vector minv_h = mchol_.solve(r1);
      df = schol_.solve(Vector(c_.f.transpose() * minv_h - r2));
      dy = minv_h - minv_f_ * df;
    };
    kkt(rhs, rf_, d.dy, d.df);
    for (int pass = 0; pass < 3; ++pass) {
      Vector e1 = rhs - mm_ * d.dy - c_.f * d.df;
      Vector e2 = rf_ - c_.f.transpose() * d.dy;
      double en = std::max(inf_norm(e1), inf_norm(e2));
      if (!(en > 1e-14 * std::max(1.0, inf_norm(rhs)))) break;
      Vector cy, cf;
      kkt(e1, e2, cy, cf);
      d.dy += cy;
      d.df += cf;
    }
  } else {
    d.df = Vector();
    d.dy = c_.m ? Vector(mchol_.solve(rhs)) : Vector();
  }

  std::vector<Matrix> aty;
  Vector atyl, atyf;
  apply_at(c_, d.dy, aty, atyl, atyf);
  d.dz.resize(np);
  d.dx.resize(np);
  for (size_t k = 0; k < np; ++k) {
    d.dz[k] = rd_[k] - aty[k];
    Matrix t = r[k];
    t.noalias() -= it_.x[k] * (d.dz[k] * zinv_[k]);
    d.dx[k] = 0.5 * (t + t.transpose());
  }
  d.dzl = rdl_ - atyl;
  d.dxl = (rcl - it_.xl.cwiseProduct(d.dzl)).cwiseQuotient(it_.zl);
}

ConicOutcome Solver::run(const ConicProblem& p) {
  init();
  ConicOutcome out;
  Iterate best;
  double best_merit = std::numeric_limits<double>::infinity();
  SolveStatus status = SolveStatus::Inaccurate;
  double gamma = 0.9;
  int stall = 0;
  int iter = 0;
  Vector ray;

  for (; iter <= o_.max_iters; ++iter) {
    residuals();
    double merit = std::max({relp_, reld_, relgap_ / std::max(1.0, o_.gap_tol / o_.tol)});
    if (o_.verbose)
      std::fprintf(stderr, "%3d  p=% .8e d=% .8e  relp=%.2e reld=%.2e gap=%.2e mu=%.2e\n", iter,
                   pobj_, dobj_, relp_, reld_, relgap_, mu_);
    if (std::isfinite(merit) && merit < best_merit) {
      best_merit = merit;
      best = it_;
    }
    if (relp_ <= o_.tol && reld_ <= o_.tol && relgap_ <= o_.gap_tol) {
      status = SolveStatus::Optimal;
      best = it_;
      break;
    }
    // Farkas-type certificates from diverging iterates.
    if (dobj_ > 0.0 && c_.m) {
      double cz = 0.0;
      for (size_t k = 0; k < rd_.size(); ++k)
        cz = std::max(cz, inf_norm(c_.c_psd[k] - rd_[k]));
      cz = std::max(cz, inf_norm(c_.c_lp - rdl_));
      if (c_.nf) cz = std::max(cz, inf_norm(c_.c_free - rf_));
      double yn = it_.y.norm();
      if (cz / dobj_ <= o_.tol && dobj_ / yn > 10.0 * o_.tol) {
        status = SolveStatus::PrimalInfeasible;
        ray = -it_.y / yn;
        best = it_;
        break;
      }
    }
    if (pobj_ < 0.0) {
      double ax = inf_norm(c_.b - rp_);
      if (ax / -pobj_ <= o_.tol) {
        status = SolveStatus::DualInfeasible;
        best = it_;
        break;
      }
    }
    if (iter == o_.max_iters) break;
    if (!factor()) break;

    Direction pred, cor;
    direction(0.0, nullptr, pred);
    double ap = 1.0, ad = 1.0;
    for (size_t k = 0; k < it_.x.size(); ++k) {
      ap = std::min(ap, max_step_psd(it_.x[k], pred.dx[k]));
      ad = std::min(ad, max_step_psd(it_.z[k], pred.dz[k]));
    }
    ap = std::min(ap, max_step_lp(it_.xl, pred.dxl));
    ad = std::min(ad, max_step_lp(it_.zl, pred.dzl));
    double xz_aff = 0.0;
    for (size_t k = 0; k < it_.x.size(); ++k)
      xz_aff += (it_.x[k] + ap * pred.dx[k]).cwiseProduct(it_.z[k] + ad * pred.dz[k]).sum();
    xz_aff += (it_.xl + ap * pred.dxl).dot(it_.zl + ad * pred.dzl);
    double mu_aff = nu_ > 0 ? xz_aff / nu_ : 0.0;
    double ratio = mu_ > 0 ? std::max(0.0, mu_aff / mu_) : 0.0;
    double expo = std::min(ap, ad) > 0.5 ? 3.0 : 2.0;
    double sigma = std::min(1.0, std::pow(ratio, expo));

    direction(sigma * mu_, &pred, cor);
    double sp = std::numeric_limits<double>::infinity(), sd = sp;
    for (size_t k = 0; k < it_.x.size(); ++k) {
      sp = std::min(sp, max_step_psd(it_.x[k], cor.dx[k]));
      sd = std::min(sd, max_step_psd(it_.z[k], cor.dz[k]));
    }
    sp = std::min(sp, max_step_lp(it_.xl, cor.dxl));
    sd = std::min(sd, max_step_lp(it_.zl, cor.dzl));
    ap = std::min(1.0, gamma * sp);
    ad = std::min(1.0, gamma * sd);
    if (!std::isfinite(ap) || !std::isfinite(ad)) break;

    for (size_t k = 0; k < it_.x.size(); ++k) {
      it_.x[k] += ap * cor.dx[k];
      it_.z[k] += ad * cor.dz[k];
    }
    it_.xl += ap * cor.dxl;
    it_.zl += ad * cor.dzl;
    if (c_.nf) it_.f += ap * cor.df;
    if (c_.m) it_.y += ad * cor.dy;
    gamma = 0.9 + 0.09 * std::min(ap, ad);

    if (std::max(ap, ad) < 1e-7) {
      if (++stall >= 4) break;
    } else {
      stall = 0;
    }
  }

  // Map back to user blocks.
  const double sgn = p.sense == Sense::Max ? -1.0 : 1.0;
  out.status = status;
  out.iterations = iter;
  out.x = zero_values(p);
  out.z = zero_values(p);
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    int s = c_.block_slot[k];
    const ConeBlock& b = p.blocks[k];
    if (b.kind == BlockKind::Psd) {
      out.x[k] = 0.5 * (best.x[s] + best.x[s].transpose());
      out.z[k] = 0.5 * (best.z[s] + best.z[s].transpose());
    } else if (b.kind == BlockKind::Nonneg) {
      out.x[k] = best.xl.segment(c_.lp_off[s], b.size);
      out.z[k] = best.zl.segment(c_.lp_off[s], b.size);
    } else {
      out.x[k] = best.f.segment(c_.free_off[s], b.size);
    }
  }
  out.y = Vector::Zero(p.num_constraints());
  for (int j = 0; j < p.num_constraints(); ++j)
    if (c_.row_of[j] >= 0)
      out.y(j) = status == SolveStatus::PrimalInfeasible ? ray(c_.row_of[j])
                                                         : sgn * best.y(c_.row_of[j]);
  out.primal_obj = apply_form(p.objective, out.x);
  double by = 0.0;
  for (int j = 0; j < p.num_constraints(); ++j) by += p.constraints[j].rhs * out.y(j);
  out.dual_obj = by;
  out.residuals.primal_eq = relp_;
  out.residuals.dual_eq = reld_;
  out.residuals.gap = relgap_;
  out.residuals.primal_obj = out.primal_obj;
  out.residuals.dual_obj = out.dual_obj;
  return out;
}

}  // namespace

ConicOutcome solve(const ConicProblem& p, const SolverOptions& opt) {
  if (!(opt.tol >= 1e-12 && opt.tol <= 1e-2))
    throw Error(ErrorKind::InvalidParameter, "tol must lie in [1e-12, 1e-2]");
  if (opt.max_iters < 1) throw Error(ErrorKind::InvalidParameter, "max_iters must be positive");
  p.validate();
  Compiled c = compile(p);
  if (c.bad_row >= 0) {
    // 0 = b with b != 0: the unit ray on that row certifies infeasibility.
    ConicOutcome out;
    out.status = SolveStatus::PrimalInfeasible;
    out.x = zero_values(p);
    out.z = zero_values(p);
    out.y = Vector::Zero(p.num_constraints());
    out.y(c.bad_row) = p.constraints[c.bad_row].rhs > 0 ? -1.0 : 1.0;
    return out;
  }
  Solver s(c, opt);
  return s.run(p);
}

namespace {
std::atomic<int> g_max_iters{kDefaultMaxIters};
}

int default_max_iters() { return g_max_iters.load(); }

void set_default_max_iters(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "max_iters must be positive");
  g_max_iters.store(n);
}

ConicOutcome solve(const ConicProblem& p, double tol, int max_iters) {
  SolverOptions o;
  o.tol = tol;
  if (max_iters > 0) o.max_iters = max_iters;
  o.gap_tol = std::min(1e-6, 10.0 * tol);
  return solve(p, o);
}

}  // namespace qcone
