#include "fdsec/sdp_solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "fdsec/error.hpp"

namespace fdsec {
namespace {

constexpr double kStepFraction = 0.99;
constexpr double kDivergence = 1e30;
constexpr double kStructureTol = 1e-14;
constexpr int kNoProgressIters = 20;

// Standard form after presolve:  min <C, X>  s.t.  A(X) = b,  X in K, where
// K = PSD blocks x orthant and the orthant holds the original orthant
// variables followed by one slack per kept constraint.
struct Row {
  std::vector<std::pair<int, RealMatrix>> psd;
  RealVector orth;
};

struct StandardForm {
  std::vector<int> dims;
  int n_orth = 0;
  std::vector<RealMatrix> c_psd;
  RealVector c_orth;
  std::vector<Row> rows;
  RealVector b;
  std::vector<std::vector<int>> rows_of_block;
  // Blocks whose data all carry the [[A, -B], [B, A]] structure. The central
  // path stays in that subspace, so iterates are projected back onto it to
  // stop round-off from drifting along the (structure-blind) optimal face.
  std::vector<bool> embedded;
};

RealMatrix project_embedded(const RealMatrix& x) { return embed_real(unembed_real(x)); }

struct Point {
  std::vector<RealMatrix> psd;
  RealVector orth;
};

double inner(const RealMatrix& a, const RealMatrix& b) { return (a.array() * b.array()).sum(); }

double inner(const Point& a, const Point& b) {
  double v = a.orth.dot(b.orth);
  for (std::size_t i = 0; i < a.psd.size(); ++i) v += inner(a.psd[i], b.psd[i]);
  return v;
}

double norm(const Point& p) { return std::sqrt(inner(p, p)); }

RealMatrix sym(const RealMatrix& a) { return 0.5 * (a + a.transpose()); }

RealVector apply_a(const StandardForm& sf, const Point& x) {
  RealVector out(sf.rows.size());
  for (std::size_t i = 0; i < sf.rows.size(); ++i) {
    double v = sf.rows[i].orth.dot(x.orth);
    for (const auto& [b, a] : sf.rows[i].psd) v += inner(a, x.psd[b]);
    out(i) = v;
  }
  return out;
}

Point apply_at(const StandardForm& sf, const RealVector& y) {
  Point out;
  for (int d : sf.dims) out.psd.push_back(RealMatrix::Zero(d, d));
  out.orth = RealVector::Zero(sf.n_orth);
  for (std::size_t i = 0; i < sf.rows.size(); ++i) {
    if (y(i) == 0.0) continue;
    for (const auto& [b, a] : sf.rows[i].psd) out.psd[b] += y(i) * a;
    out.orth += y(i) * sf.rows[i].orth;
  }
  return out;
}

Point c_point(const StandardForm& sf) { return {sf.c_psd, sf.c_orth}; }

Point combine(const Point& a, double s, const Point& b) {
  Point out = a;
  for (std::size_t i = 0; i < a.psd.size(); ++i) out.psd[i] += s * b.psd[i];
  out.orth += s * b.orth;
  return out;
}

// Any F with X = F F^T; Cholesky when it succeeds, else a clamped
// eigen-factor.
bool factor(const RealMatrix& x, RealMatrix& f) {
  Eigen::LLT<RealMatrix> llt(x);
  if (llt.info() == Eigen::Success) {
    f = llt.matrixL();
    if (f.diagonal().minCoeff() > 0.0) return true;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym(x));
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) return false;
  f = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal();
  return true;
}

// Nesterov-Todd scaling of one PSD block: G with G^T Z G = G^{-1} X G^{-T} =
// diag(lambda), W = G G^T.
struct BlockScaling {
  RealMatrix g;
  RealMatrix w;
  RealVector lambda;
};

bool nt_scaling(const RealMatrix& x, const RealMatrix& z, BlockScaling& out) {
  RealMatrix lx, lz;
  if (!factor(x, lx) || !factor(z, lz)) return false;
  Eigen::JacobiSVD<RealMatrix> svd(lz.transpose() * lx, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector s = svd.singularValues();
  if (s.minCoeff() <= 0.0 || !s.allFinite()) return false;
  out.g = lx * svd.matrixV() * s.cwiseSqrt().cwiseInverse().asDiagonal();
  out.w = out.g * out.g.transpose();
  out.lambda = s;
  return true;
}

// Solves (Lambda S + S Lambda) / 2 = R for diagonal Lambda.
RealMatrix lyapunov(const RealVector& lambda, const RealMatrix& r) {
  RealMatrix s(r.rows(), r.cols());
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j) s(i, j) = 2.0 * r(i, j) / (lambda(i) + lambda(j));
  return s;
}

RealMatrix jordan(const RealMatrix& a, const RealMatrix& b) { return 0.5 * (a * b + b * a); }

// Largest alpha with Lambda + alpha * D >= 0 (in the scaled frame).
double max_step_psd(const RealVector& lambda, const RealMatrix& d) {
  const RealVector inv_sqrt = lambda.cwiseSqrt().cwiseInverse();
  const RealMatrix t = sym(inv_sqrt.asDiagonal() * d * inv_sqrt.asDiagonal());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(t, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  return lo < 0.0 ? -1.0 / lo : std::numeric_limits<double>::infinity();
}

double max_step_orth(const RealVector& lambda, const RealVector& d) {
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) < 0.0) alpha = std::min(alpha, -lambda(i) / d(i));
  }
  return alpha;
}

struct Scaling {
  std::vector<BlockScaling> blocks;
  RealVector orth_g;       // sqrt(x / z)
  RealVector orth_lambda;  // sqrt(x z)
};

// A direction expressed both in the original and the scaled frame.
struct Direction {
  Point dx, dz;
  RealVector dy;
  Point dx_scaled, dz_scaled;
};

class InteriorPoint {
 public:
  InteriorPoint(const StandardForm& sf, const SolverOptions& opts) : sf_(sf), opts_(opts) {}

  struct Result {
    SolverStatus status = SolverStatus::NumericalFailure;
    Point x, z;
    RealVector y;
    int iterations = 0;
    double pinf = 0.0, dinf = 0.0, gap = 0.0;
    std::vector<IterationRecord> log;
    RealVector ray;
    std::string message;
  };

  Result run(double obj_unscale);

 private:
  bool compute_scaling(const Point& x, const Point& z, Scaling& s) const;
  bool factor_schur(const Scaling& s);
  Direction solve_direction(const Scaling& s, const Point& d_scaled, const RealVector& rp,
                            const Point& rd) const;
  static void step_limits(const Scaling& s, const Direction& d, double& ap, double& ad);

  RealVector schur_solve(const RealVector& rhs) const;

  const StandardForm& sf_;
  const SolverOptions& opts_;
  RealMatrix schur_matrix_;
  Eigen::LLT<RealMatrix> schur_;
};

// Cholesky solve plus a few rounds of iterative refinement; the Schur matrix
// becomes badly conditioned near the optimum.
RealVector InteriorPoint::schur_solve(const RealVector& rhs) const {
  RealVector x = schur_.solve(rhs);
  for (int k = 0; k < 3; ++k) {
    const RealVector r = rhs - schur_matrix_ * x;
    if (r.norm() <= 1e-15 * rhs.norm()) break;
    x += schur_.solve(r);
  }
  return x;
}

bool InteriorPoint::compute_scaling(const Point& x, const Point& z, Scaling& s) const {
  s.blocks.resize(sf_.dims.size());
  for (std::size_t b = 0; b < sf_.dims.size(); ++b) {
    if (!nt_scaling(x.psd[b], z.psd[b], s.blocks[b])) return false;
  }
  if ((x.orth.array() <= 0.0).any() || (z.orth.array() <= 0.0).any()) return false;
  s.orth_g = (x.orth.array() / z.orth.array()).sqrt();
  s.orth_lambda = (x.orth.array() * z.orth.array()).sqrt();
  return true;
}

bool InteriorPoint::factor_schur(const Scaling& s) {
  const Eigen::Index m = static_cast<Eigen::Index>(sf_.rows.size());
  RealMatrix schur = RealMatrix::Zero(m, m);
  for (std::size_t b = 0; b < sf_.dims.size(); ++b) {
    const auto& rows = sf_.rows_of_block[b];
    const RealMatrix& w = s.blocks[b].w;
    std::vector<const RealMatrix*> coeff(rows.size());
    for (std::size_t p = 0; p < rows.size(); ++p) {
      for (const auto& [blk, a] : sf_.rows[rows[p]].psd) {
        if (blk == static_cast<int>(b)) coeff[p] = &a;
      }
    }
    for (std::size_t p = 0; p < rows.size(); ++p) {
      const RealMatrix t = w * (*coeff[p]) * w;
      for (std::size_t q = 0; q <= p; ++q) {
        const double v = inner(t, *coeff[q]);
        schur(rows[p], rows[q]) += v;
        if (p != q) schur(rows[q], rows[p]) += v;
      }
    }
  }
  const RealVector d2 = s.orth_g.array().square();
  RealMatrix ao(m, sf_.n_orth);
  for (Eigen::Index i = 0; i < m; ++i) ao.row(i) = sf_.rows[i].orth.transpose();
  schur += ao * d2.asDiagonal() * ao.transpose();

  schur_matrix_ = schur;
  schur_.compute(schur);
  if (schur_.info() == Eigen::Success) return true;
  // Tiny diagonal lift for near-singular systems late in the run.
  const double lift = 1e-14 * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
  schur.diagonal().array() += lift;
  schur_.compute(schur);
  return schur_.info() == Eigen::Success;
}

Direction InteriorPoint::solve_direction(const Scaling& s, const Point& d_scaled,
                                         const RealVector& rp, const Point& rd) const {
  // Scaled complementarity gives dX~ + dZ~ = D, hence
  //   dX = G D G^T - W dZ W,  dZ = Rd - A^T dy,
  //   A W A^T dy = rp - A(G D G^T) + A(W Rd W).
  const std::size_t nb = sf_.dims.size();
  Point gdg, wrw;
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& bs = s.blocks[b];
    gdg.psd.push_back(bs.g * d_scaled.psd[b] * bs.g.transpose());
    wrw.psd.push_back(bs.w * rd.psd[b] * bs.w);
  }
  gdg.orth = s.orth_g.cwiseProduct(d_scaled.orth);
  wrw.orth = s.orth_g.array().square().matrix().cwiseProduct(rd.orth);

  Direction dir;
  const RealVector rhs = rp - apply_a(sf_, gdg) + apply_a(sf_, wrw);
  dir.dy = rhs.size() ? schur_solve(rhs) : RealVector();
  dir.dz = combine(rd, -1.0, apply_at(sf_, dir.dy));
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& bs = s.blocks[b];
    dir.dz.psd[b] = sym(dir.dz.psd[b]);
    dir.dx.psd.push_back(sym(gdg.psd[b] - bs.w * dir.dz.psd[b] * bs.w));
  }
  dir.dx.orth = gdg.orth - s.orth_g.array().square().matrix().cwiseProduct(dir.dz.orth);

  // Refinement on the primal equations: near the optimum the cancellation in
  // G D G^T - W dZ W leaves A(dX) visibly off rp. A correction dy' with
  // M dy' = rp - A(dX) moves dX by W A^T(dy') W and dZ by -A^T(dy').
  double err = (rp - apply_a(sf_, dir.dx)).norm();
  for (int k = 0; k < 3 && err > 0.0; ++k) {
    const RealVector fix = schur_solve(rp - apply_a(sf_, dir.dx));
    Point cand_dx = dir.dx, cand_dz = dir.dz;
    const Point at = apply_at(sf_, fix);
    for (std::size_t b = 0; b < nb; ++b) {
      cand_dx.psd[b] += sym(s.blocks[b].w * at.psd[b] * s.blocks[b].w);
      cand_dz.psd[b] -= at.psd[b];
    }
    cand_dx.orth += s.orth_g.array().square().matrix().cwiseProduct(at.orth);
    cand_dz.orth -= at.orth;
    const double cand_err = (rp - apply_a(sf_, cand_dx)).norm();
    if (!(cand_err < 0.5 * err)) break;
    dir.dx = std::move(cand_dx);
    dir.dz = std::move(cand_dz);
    dir.dy += fix;
    err = cand_err;
  }

  for (std::size_t b = 0; b < nb; ++b) {
    const auto& bs = s.blocks[b];
    dir.dz_scaled.psd.push_back(sym(bs.g.transpose() * dir.dz.psd[b] * bs.g));
    dir.dx_scaled.psd.push_back(sym(d_scaled.psd[b] - dir.dz_scaled.psd[b]));
  }
  dir.dz_scaled.orth = s.orth_g.cwiseProduct(dir.dz.orth);
  dir.dx_scaled.orth = d_scaled.orth - dir.dz_scaled.orth;
  return dir;
}

void InteriorPoint::step_limits(const Scaling& s, const Direction& d, double& ap, double& ad) {
  ap = max_step_orth(s.orth_lambda, d.dx_scaled.orth);
  ad = max_step_orth(s.orth_lambda, d.dz_scaled.orth);
  for (std::size_t b = 0; b < s.blocks.size(); ++b) {
    ap = std::min(ap, max_step_psd(s.blocks[b].lambda, d.dx_scaled.psd[b]));
    ad = std::min(ad, max_step_psd(s.blocks[b].lambda, d.dz_scaled.psd[b]));
  }
}

InteriorPoint::Result InteriorPoint::run(double obj_unscale) {
  Result res;
  const std::size_t nb = sf_.dims.size();
  const int m = static_cast<int>(sf_.rows.size());
  double degree = sf_.n_orth;
  for (int d : sf_.dims) degree += d;
  if (degree == 0) {
    res.status = SolverStatus::Optimal;
    res.y = RealVector::Zero(m);
    return res;
  }

  // Starting point as in SDPT3: per block, multiples of the identity sized
  // from the block's share of the constraint data.
  Point x, z;
  auto start = [&](int n, const std::vector<double>& a_norms, double c_norm, const std::vector<int>& rows) {
    double xi = std::max(10.0, std::sqrt(double(n)));
    double eta = std::max({10.0, std::sqrt(double(n)), c_norm});
    for (std::size_t p = 0; p < rows.size(); ++p) {
      xi = std::max(xi, n * (1.0 + std::abs(sf_.b(rows[p]))) / (1.0 + a_norms[p]));
      eta = std::max(eta, a_norms[p]);
    }
    return std::pair{xi, eta};
  };
  for (std::size_t b = 0; b < nb; ++b) {
    std::vector<double> norms;
    for (int r : sf_.rows_of_block[b]) {
      for (const auto& [blk, a] : sf_.rows[r].psd) if (blk == static_cast<int>(b)) norms.push_back(a.norm());
    }
    const auto [xi, eta] = start(sf_.dims[b], norms, sf_.c_psd[b].norm(), sf_.rows_of_block[b]);
    x.psd.push_back(xi * RealMatrix::Identity(sf_.dims[b], sf_.dims[b]));
    z.psd.push_back(eta * RealMatrix::Identity(sf_.dims[b], sf_.dims[b]));
  }
  {
    std::vector<double> norms;
    std::vector<int> rows;
    for (int r = 0; r < m; ++r) norms.push_back(sf_.rows[r].orth.norm()), rows.push_back(r);
    const auto [xi, eta] = start(sf_.n_orth, norms, sf_.c_orth.norm(), rows);
    x.orth = RealVector::Constant(sf_.n_orth, xi);
    z.orth = RealVector::Constant(sf_.n_orth, eta);
  }
  RealVector y = RealVector::Zero(m);

  const Point c = c_point(sf_);
  const double bscale = 1.0 + sf_.b.norm();
  const double cscale = 1.0 + norm(c);
  int stalls = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  int best_iter = 0;

  for (int iter = 0;; ++iter) {
    const RealVector rp = sf_.b - apply_a(sf_, x);
    const Point at_y = apply_at(sf_, y);
    Point rd = combine(combine(c, -1.0, at_y), -1.0, z);
    const double pobj = inner(c, x);
    const double dobj = sf_.b.dot(y);
    const double mu = inner(x, z) / degree;
    res.pinf = rp.norm() / bscale;
    res.dinf = norm(rd) / cscale;
    res.gap = std::max(std::abs(pobj - dobj), inner(x, z)) / (1.0 + std::abs(pobj) + std::abs(dobj));
    res.iterations = iter;

    IterationRecord rec{iter, pobj * obj_unscale, dobj * obj_unscale, res.gap, res.pinf, res.dinf, 0.0, 0.0, 0.0};

    if (res.pinf <= opts_.abs_tol && res.dinf <= opts_.abs_tol && res.gap <= opts_.rel_tol) {
      res.status = SolverStatus::Optimal;
      res.log.push_back(rec);
      break;
    }
    if (dobj > 0.0) {
      const double ray_res = norm(combine(at_y, 1.0, z)) / dobj;
      if (ray_res <= opts_.infeasibility_threshold) {
        res.status = SolverStatus::PrimalInfeasible;
        res.ray = y / dobj;
        res.message = "dual ray found";
        res.log.push_back(rec);
        break;
      }
    }
    if (pobj < 0.0 && m > 0) {
      const double ray_res = apply_a(sf_, x).norm() / -pobj;
      if (ray_res <= opts_.infeasibility_threshold) {
        res.status = SolverStatus::DualInfeasible;
        res.message = "primal ray found";
        res.log.push_back(rec);
        break;
      }
    }
    // Feasible but the gap stopped shrinking: the iterates have hit the
    // floating-point floor for this instance.
    if (res.pinf <= opts_.abs_tol && res.dinf <= opts_.abs_tol) {
      if (res.gap < 0.9 * best_gap) best_gap = res.gap, best_iter = iter;
      if (iter - best_iter >= kNoProgressIters) {
        res.status = SolverStatus::NumericalFailure;
        res.message = "no progress in duality gap";
        res.log.push_back(rec);
        break;
      }
    }
    if (iter >= opts_.max_iters) {
      res.status = SolverStatus::MaxIters;
      res.log.push_back(rec);
      break;
    }
    if (norm(x) > kDivergence || norm(z) > kDivergence || std::abs(dobj) > kDivergence) {
      res.status = SolverStatus::NumericalFailure;
      res.message = "iterates diverged";
      res.log.push_back(rec);
      break;
    }

    Scaling s;
    if (!compute_scaling(x, z, s) || !factor_schur(s)) {
      res.status = SolverStatus::NumericalFailure;
      res.message = "factorization failed";
      res.log.push_back(rec);
      break;
    }

    // Predictor: affine-scaling direction, D = -Lambda.
    Point d_aff;
    for (std::size_t b = 0; b < nb; ++b) d_aff.psd.push_back(-RealMatrix(s.blocks[b].lambda.asDiagonal()));
    d_aff.orth = -s.orth_lambda;
    const Direction aff = solve_direction(s, d_aff, rp, rd);
    double ap = 0.0, ad = 0.0;
    step_limits(s, aff, ap, ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);

    // Mehrotra centering from the affine complementarity, in the scaled frame.
    double mu_aff = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      const RealMatrix lx = RealMatrix(s.blocks[b].lambda.asDiagonal()) + ap * aff.dx_scaled.psd[b];
      const RealMatrix lz = RealMatrix(s.blocks[b].lambda.asDiagonal()) + ad * aff.dz_scaled.psd[b];
      mu_aff += inner(lx, lz);
    }
    mu_aff += (s.orth_lambda + ap * aff.dx_scaled.orth).dot(s.orth_lambda + ad * aff.dz_scaled.orth);
    mu_aff /= degree;
    // Short predictor steps call for more centering (smaller exponent).
    const double expon = std::max(1.0, 3.0 * std::min(ap, ad) * std::min(ap, ad));
    const double sigma = std::clamp(std::pow(std::max(0.0, mu_aff) / mu, expon), 0.0, 1.0);

    Point d_cor;
    for (std::size_t b = 0; b < nb; ++b) {
      const RealVector& lam = s.blocks[b].lambda;
      RealMatrix r = sigma * mu * RealMatrix::Identity(lam.size(), lam.size());
      r.diagonal() -= lam.cwiseProduct(lam);
      r -= jordan(aff.dx_scaled.psd[b], aff.dz_scaled.psd[b]);
      d_cor.psd.push_back(lyapunov(lam, r));
    }
    {
      const RealVector& lam = s.orth_lambda;
      RealVector r = RealVector::Constant(lam.size(), sigma * mu) - lam.cwiseProduct(lam) -
                     aff.dx_scaled.orth.cwiseProduct(aff.dz_scaled.orth);
      d_cor.orth = r.cwiseQuotient(lam);
    }
    const Direction dir = solve_direction(s, d_cor, rp, rd);
    step_limits(s, dir, ap, ad);
    ap = std::min(1.0, kStepFraction * ap);
    ad = std::min(1.0, kStepFraction * ad);

    // Halve on a failed factorization of the new iterate.
    Point x_new, z_new;
    for (int tries = 0;; ++tries) {
      x_new = combine(x, ap, dir.dx);
      z_new = combine(z, ad, dir.dz);
      for (std::size_t b = 0; b < nb; ++b) {
        x_new.psd[b] = sf_.embedded[b] ? project_embedded(x_new.psd[b]) : sym(x_new.psd[b]);
        z_new.psd[b] = sf_.embedded[b] ? project_embedded(z_new.psd[b]) : sym(z_new.psd[b]);
      }
      Scaling probe;
      if (compute_scaling(x_new, z_new, probe)) break;
      if (tries >= 30) {
        res.status = SolverStatus::NumericalFailure;
        res.message = "step length underflow";
        break;
      }
      ap *= 0.5;
      ad *= 0.5;
    }
    if (!res.message.empty()) {
      res.log.push_back(rec);
      break;
    }
    x = std::move(x_new);
    z = std::move(z_new);
    y += ad * dir.dy;

    rec.step_primal = ap;
    rec.step_dual = ad;
    rec.sigma = sigma;
    res.log.push_back(rec);
    if (opts_.log) {
      *opts_.log << std::setw(4) << iter << std::scientific << std::setprecision(6) << "  pobj "
                 << rec.primal_obj << "  dobj " << rec.dual_obj << "  gap " << std::setprecision(2)
                 << rec.gap << "  pres " << rec.primal_res << "  dres " << rec.dual_res << "  ap "
                 << std::fixed << std::setprecision(3) << ap << "  ad " << ad << "  sigma "
                 << std::scientific << std::setprecision(2) << sigma << std::defaultfloat << '\n';
    }

    stalls = (ap < 1e-8 && ad < 1e-8) ? stalls + 1 : 0;
    if (stalls >= 3) {
      res.status = SolverStatus::NumericalFailure;
      res.message = "stalled";
      break;
    }
  }
  res.x = std::move(x);
  res.z = std::move(z);
  res.y = std::move(y);
  return res;
}

}  // namespace

std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Optimal: return "optimal";
    case SolverStatus::PrimalInfeasible: return "primal_infeasible";
    case SolverStatus::DualInfeasible: return "dual_infeasible";
    case SolverStatus::MaxIters: return "max_iters";
    case SolverStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

void SolverOptions::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(infeasibility_threshold > 0.0)) {
    fail(ErrorCode::InvalidArgument, "solver options: tolerances must be positive");
  }
  if (max_iters < 1) fail(ErrorCode::InvalidArgument, "solver options: max_iters must be >= 1");
}

SolverReport solve(const ConicProblem& problem, const SolverOptions& opts) {
  problem.validate();
  opts.validate();
  const int nb = static_cast<int>(problem.psd_dims.size());
  const int n0 = problem.orthant_dim;
  const int m_all = static_cast<int>(problem.constraints.size());

  SolverReport report;
  report.multipliers = RealVector::Zero(m_all);
  report.slacks = RealVector::Zero(m_all);

  std::vector<double> d_psd(nb, 1.0), d_orth(n0, 1.0);

  // Presolve: drop empty rows, normalize each row to unit infinity norm.
  std::vector<int> kept;
  std::vector<double> row_scale(m_all, 1.0);
  for (int i = 0; i < m_all; ++i) {
    const auto& c = problem.constraints[i];
    double amax = 0.0;
    for (const auto& t : c.psd) amax = std::max(amax, d_psd[t.block] * t.coeff.cwiseAbs().maxCoeff());
    for (const auto& [v, coef] : c.orthant) amax = std::max(amax, d_orth[v] * std::abs(coef));
    if (amax == 0.0) {
      const bool satisfied = c.sense == Sense::GreaterEqual ? 0.0 >= c.rhs : 0.0 <= c.rhs;
      if (!satisfied) {
        report.status = SolverStatus::PrimalInfeasible;
        report.infeasibility_ray = RealVector::Zero(m_all);
        report.infeasibility_ray(i) = 1.0 / std::abs(c.rhs);
        report.message = "constraint '" + c.label + "' has an empty functional and cannot hold";
        return report;
      }
      continue;
    }
    row_scale[i] = amax;
    kept.push_back(i);
  }

  StandardForm sf;
  sf.dims = problem.psd_dims;
  const int m = static_cast<int>(kept.size());
  sf.n_orth = n0 + m;
  sf.rows.resize(m);
  sf.b.resize(m);
  sf.rows_of_block.assign(nb, {});
  for (int r = 0; r < m; ++r) {
    const auto& c = problem.constraints[kept[r]];
    const double s = row_scale[kept[r]];
    Row& row = sf.rows[r];
    row.orth = RealVector::Zero(sf.n_orth);
    for (const auto& t : c.psd) {
      auto it = std::find_if(row.psd.begin(), row.psd.end(), [&](const auto& e) { return e.first == t.block; });
      if (it == row.psd.end()) {
        row.psd.emplace_back(t.block, (d_psd[t.block] / s) * t.coeff);
        sf.rows_of_block[t.block].push_back(r);
      } else {
        it->second += (d_psd[t.block] / s) * t.coeff;
      }
    }
    for (const auto& [v, coef] : c.orthant) row.orth(v) += d_orth[v] * coef / s;
    row.orth(n0 + r) = c.sense == Sense::GreaterEqual ? -1.0 : 1.0;
    sf.b(r) = c.rhs / s;
  }

  sf.embedded.assign(nb, true);
  for (int b = 0; b < nb; ++b) {
    sf.embedded[b] = embedding_asymmetry(problem.objective_psd[b]) <= kStructureTol;
  }
  for (const auto& c : problem.constraints) {
    for (const auto& t : c.psd) {
      if (embedding_asymmetry(t.coeff) > kStructureTol) sf.embedded[t.block] = false;
    }
  }

  // Global scaling of rhs and objective to unit infinity norm.
  double bs = m ? sf.b.lpNorm<Eigen::Infinity>() : 0.0;
  if (bs == 0.0) bs = 1.0;
  double cs = 0.0;
  for (int b = 0; b < nb; ++b) cs = std::max(cs, d_psd[b] * problem.objective_psd[b].cwiseAbs().maxCoeff());
  for (int v = 0; v < n0; ++v) cs = std::max(cs, d_orth[v] * std::abs(problem.objective_orthant(v)));
  if (cs == 0.0) cs = 1.0;
  sf.b /= bs;
  for (int b = 0; b < nb; ++b) sf.c_psd.push_back((d_psd[b] / cs) * problem.objective_psd[b]);
  sf.c_orth = RealVector::Zero(sf.n_orth);
  for (int v = 0; v < n0; ++v) sf.c_orth(v) = d_orth[v] * problem.objective_orthant(v) / cs;

  InteriorPoint ipm(sf, opts);
  auto res = ipm.run(bs * cs);

  report.status = res.status;
  report.iterations = res.iterations;
  report.log = std::move(res.log);
  report.primal_residual = res.pinf;
  report.dual_residual = res.dinf;
  report.gap = res.gap;
  report.message = res.message;

  for (int b = 0; b < nb; ++b) {
    report.primal.psd.push_back((bs * d_psd[b]) * res.x.psd.at(b));
    report.dual.psd.push_back((cs / d_psd[b]) * res.z.psd.at(b));
  }
  report.primal.orthant = RealVector(n0);
  report.dual.orthant = RealVector(n0);
  for (int v = 0; v < n0; ++v) {
    report.primal.orthant(v) = bs * d_orth[v] * res.x.orth(v);
    report.dual.orthant(v) = cs / d_orth[v] * res.z.orth(v);
  }
  for (int r = 0; r < m; ++r) {
    const int i = kept[r];
    const double signed_y = cs * res.y(r) / row_scale[i];
    report.multipliers(i) = problem.constraints[i].sense == Sense::GreaterEqual ? signed_y : -signed_y;
    report.slacks(i) = bs * row_scale[i] * res.x.orth(n0 + r);
  }
  for (int i = 0; i < m_all; ++i) {
    if (std::find(kept.begin(), kept.end(), i) == kept.end()) {
      report.slacks(i) = constraint_slack(problem.constraints[i], report.primal);
    }
  }
  report.primal_obj = evaluate_objective(problem, report.primal);
  report.dual_obj = 0.0;
  for (int i = 0; i < m_all; ++i) {
    const auto& c = problem.constraints[i];
    report.dual_obj += (c.sense == Sense::GreaterEqual ? 1.0 : -1.0) * report.multipliers(i) * c.rhs;
  }
  if (res.status == SolverStatus::PrimalInfeasible) {
    report.infeasibility_ray = RealVector::Zero(m_all);
    for (int r = 0; r < m; ++r) {
      const int i = kept[r];
      const double signed_y = res.ray(r) / row_scale[i] / bs;
      report.infeasibility_ray(i) = problem.constraints[i].sense == Sense::GreaterEqual ? signed_y : -signed_y;
    }
  }
  return report;
}

KktResiduals kkt_residuals(const ConicProblem& problem, const SolverReport& report) {
  const int nb = static_cast<int>(problem.psd_dims.size());
  const int m = static_cast<int>(problem.constraints.size());
  if (static_cast<int>(report.primal.psd.size()) != nb || static_cast<int>(report.dual.psd.size()) != nb ||
      report.multipliers.size() != m) {
    fail(ErrorCode::InvalidArgument, "kkt_residuals: report does not match problem");
  }

  std::vector<RealMatrix> stat_psd = problem.objective_psd;
  RealVector stat_orth = problem.objective_orthant;
  double rhs_norm2 = 0.0;
  double primal_viol2 = 0.0;
  double dual_viol2 = 0.0;
  double compl_sum = 0.0;
  for (int i = 0; i < m; ++i) {
    const auto& c = problem.constraints[i];
    const double y = c.sense == Sense::GreaterEqual ? report.multipliers(i) : -report.multipliers(i);
    for (const auto& t : c.psd) stat_psd[t.block] -= y * t.coeff;
    for (const auto& [v, coef] : c.orthant) stat_orth(v) -= y * coef;
    rhs_norm2 += c.rhs * c.rhs;
    const double slack = constraint_slack(c, report.primal);
    if (slack < 0.0) primal_viol2 += slack * slack;
    if (report.multipliers(i) < 0.0) dual_viol2 += report.multipliers(i) * report.multipliers(i);
    compl_sum += std::abs(slack * report.multipliers(i));
  }
  double cnorm2 = problem.objective_orthant.squaredNorm();
  double stat2 = 0.0;
  for (int b = 0; b < nb; ++b) {
    stat_psd[b] -= report.dual.psd[b];
    stat2 += stat_psd[b].squaredNorm();
    cnorm2 += problem.objective_psd[b].squaredNorm();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym(report.dual.psd[b]), Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (es.eigenvalues()(i) < 0.0) dual_viol2 += es.eigenvalues()(i) * es.eigenvalues()(i);
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> ps(sym(report.primal.psd[b]), Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < ps.eigenvalues().size(); ++i) {
      if (ps.eigenvalues()(i) < 0.0) primal_viol2 += ps.eigenvalues()(i) * ps.eigenvalues()(i);
    }
    compl_sum += std::abs(inner(report.primal.psd[b], report.dual.psd[b]));
  }
  if (problem.orthant_dim) {
    stat_orth -= report.dual.orthant;
    stat2 += stat_orth.squaredNorm();
    for (int i = 0; i < problem.orthant_dim; ++i) {
      if (report.dual.orthant(i) < 0.0) dual_viol2 += report.dual.orthant(i) * report.dual.orthant(i);
      if (report.primal.orthant(i) < 0.0) primal_viol2 += report.primal.orthant(i) * report.primal.orthant(i);
      compl_sum += std::abs(report.primal.orthant(i) * report.dual.orthant(i));
    }
  }
  const double cnorm = std::sqrt(cnorm2);
  KktResiduals out;
  out.stationarity = std::sqrt(stat2) / (1.0 + cnorm);
  out.primal_feas = std::sqrt(primal_viol2) / (1.0 + std::sqrt(rhs_norm2));
  out.dual_feas = std::sqrt(dual_viol2) / (1.0 + cnorm);
  out.complementarity = compl_sum / (1.0 + std::abs(report.primal_obj));
  return out;
}

}  // namespace fdsec
