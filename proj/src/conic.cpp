#include "secbeam/conic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "secbeam/errors.hpp"

namespace secbeam {

using Eigen::MatrixXd;
using Eigen::VectorXd;

int ConeSpec::total_rows() const {
  int r = nonneg;
  for (int d : soc) r += d;
  return r;
}

int ConeSpec::degree() const { return nonneg + static_cast<int>(soc.size()); }

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kPrimalInfeasible: return "PrimalInfeasible";
    case SolveStatus::kDualInfeasible: return "DualInfeasible";
    case SolveStatus::kMaxIters: return "MaxIters";
    case SolveStatus::kNumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ConeLayout {
  int nn = 0;
  std::vector<int> off;  // SOC block offsets
  std::vector<int> dim;  // SOC block sizes
  int rows = 0;
  int degree = 0;
};

ConeLayout make_layout(const ConeSpec& spec) {
  ConeLayout L;
  L.nn = spec.nonneg;
  int at = spec.nonneg;
  for (int d : spec.soc) {
    L.off.push_back(at);
    L.dim.push_back(d);
    at += d;
  }
  L.rows = at;
  L.degree = spec.degree();
  return L;
}

// Identity element of the cone: ones on the orthant, (1, 0, ...) per block.
VectorXd cone_identity(const ConeLayout& L) {
  VectorXd e = VectorXd::Zero(L.rows);
  e.head(L.nn).setOnes();
  for (std::size_t k = 0; k < L.off.size(); ++k) e(L.off[k]) = 1.0;
  return e;
}

// Minimum margin to the cone boundary (negative means outside).
double cone_margin(const ConeLayout& L, const VectorXd& s) {
  double m = kInf;
  for (int i = 0; i < L.nn; ++i) m = std::min(m, s(i));
  for (std::size_t k = 0; k < L.off.size(); ++k) {
    const auto blk = s.segment(L.off[k], L.dim[k]);
    m = std::min(m, blk(0) - blk.tail(L.dim[k] - 1).norm());
  }
  return m;
}

void bring_to_cone(const ConeLayout& L, VectorXd& s) {
  const double m = cone_margin(L, s);
  if (m <= 0.0) s += (1.0 - m) * cone_identity(L);
}

// Largest step alpha with s + alpha * ds staying in one SOC block.
double soc_max_step(const Eigen::Ref<const VectorXd>& s,
                    const Eigen::Ref<const VectorXd>& ds) {
  const int d = static_cast<int>(s.size());
  const double a = ds(0) * ds(0) - ds.tail(d - 1).squaredNorm();
  const double b = s(0) * ds(0) - s.tail(d - 1).dot(ds.tail(d - 1));
  const double c = s(0) * s(0) - s.tail(d - 1).squaredNorm();
  // phi(alpha) = a alpha^2 + 2 b alpha + c, phi(0) = c > 0 in the interior.
  if (a >= 0.0 && b >= 0.0) return kInf;  // phi nondecreasing on [0, inf)
  if (std::abs(a) < 1e-300) return b < 0.0 ? -c / (2.0 * b) : kInf;
  const double disc = b * b - a * c;
  if (a > 0.0 && disc < 0.0) return kInf;
  const double sq = std::sqrt(std::max(disc, 0.0));
  const double q = -(b + (b >= 0.0 ? sq : -sq));
  const double r1 = q / a;
  const double r2 = (std::abs(q) > 1e-300) ? c / q : kInf;
  double best = kInf;
  if (r1 > 0.0) best = std::min(best, r1);
  if (r2 > 0.0) best = std::min(best, r2);
  return best;
}

double max_step(const ConeLayout& L, const VectorXd& s, const VectorXd& ds) {
  double alpha = kInf;
  for (int i = 0; i < L.nn; ++i)
    if (ds(i) < 0.0) alpha = std::min(alpha, -s(i) / ds(i));
  for (std::size_t k = 0; k < L.off.size(); ++k)
    alpha = std::min(alpha, soc_max_step(s.segment(L.off[k], L.dim[k]),
                                         ds.segment(L.off[k], L.dim[k])));
  return alpha;
}

// Nesterov-Todd scaling: symmetric W with W z = W^{-1} s = lambda.
struct NTScaling {
  Eigen::ArrayXd w_nn;   // sqrt(s_i / z_i)
  Eigen::ArrayXd lam_nn; // sqrt(s_i z_i)
  std::vector<double> eta;
  std::vector<VectorXd> wbar;
  std::vector<VectorXd> jwbar;
  std::vector<VectorXd> lam;  // per-block scaled point
};

// Structured multiply by the unit-hyperbolic matrix
// [[u0, u1'], [u1, I + u1 u1'/(1+u0)]].
VectorXd hyp_mul(const VectorXd& u, const Eigen::Ref<const VectorXd>& v) {
  const int d = static_cast<int>(u.size());
  VectorXd out(d);
  const double dot = u.tail(d - 1).dot(v.tail(d - 1));
  out(0) = u(0) * v(0) + dot;
  out.tail(d - 1) =
      v.tail(d - 1) + (v(0) + dot / (1.0 + u(0))) * u.tail(d - 1);
  return out;
}

bool compute_scaling(const ConeLayout& L, const VectorXd& s, const VectorXd& z,
                     NTScaling& W) {
  W.w_nn.resize(L.nn);
  W.lam_nn.resize(L.nn);
  for (int i = 0; i < L.nn; ++i) {
    if (s(i) <= 0.0 || z(i) <= 0.0) return false;
    W.w_nn(i) = std::sqrt(s(i) / z(i));
    W.lam_nn(i) = std::sqrt(s(i) * z(i));
  }
  const std::size_t nb = L.off.size();
  W.eta.assign(nb, 0.0);
  W.wbar.assign(nb, VectorXd());
  W.jwbar.assign(nb, VectorXd());
  W.lam.assign(nb, VectorXd());
  for (std::size_t k = 0; k < nb; ++k) {
    const int d = L.dim[k];
    const auto sb = s.segment(L.off[k], d);
    const auto zb = z.segment(L.off[k], d);
    const double sres = sb(0) * sb(0) - sb.tail(d - 1).squaredNorm();
    const double zres = zb(0) * zb(0) - zb.tail(d - 1).squaredNorm();
    if (sres <= 0.0 || zres <= 0.0 || sb(0) <= 0.0 || zb(0) <= 0.0)
      return false;
    const double snorm = std::sqrt(sres);
    const double znorm = std::sqrt(zres);
    const VectorXd st = sb / snorm;
    const VectorXd zt = zb / znorm;
    const double gamma = std::sqrt((1.0 + st.dot(zt)) / 2.0);
    VectorXd wb(d);
    wb(0) = (st(0) + zt(0)) / (2.0 * gamma);
    wb.tail(d - 1) =
        (st.tail(d - 1) - zt.tail(d - 1)) / (2.0 * gamma);
    W.eta[k] = std::sqrt(snorm / znorm);
    W.wbar[k] = wb;
    VectorXd jw = wb;
    jw.tail(d - 1) = -jw.tail(d - 1);
    W.jwbar[k] = jw;
    W.lam[k] = W.eta[k] * hyp_mul(wb, zb);
  }
  return true;
}

VectorXd lambda_full(const ConeLayout& L, const NTScaling& W) {
  VectorXd lam(L.rows);
  lam.head(L.nn) = W.lam_nn.matrix();
  for (std::size_t k = 0; k < L.off.size(); ++k)
    lam.segment(L.off[k], L.dim[k]) = W.lam[k];
  return lam;
}

VectorXd W_apply(const ConeLayout& L, const NTScaling& W, const VectorXd& u) {
  VectorXd out(L.rows);
  out.head(L.nn) = (W.w_nn * u.head(L.nn).array()).matrix();
  for (std::size_t k = 0; k < L.off.size(); ++k)
    out.segment(L.off[k], L.dim[k]) =
        W.eta[k] * hyp_mul(W.wbar[k], u.segment(L.off[k], L.dim[k]));
  return out;
}

VectorXd Winv_apply(const ConeLayout& L, const NTScaling& W, const VectorXd& u) {
  VectorXd out(L.rows);
  out.head(L.nn) = (u.head(L.nn).array() / W.w_nn).matrix();
  for (std::size_t k = 0; k < L.off.size(); ++k)
    out.segment(L.off[k], L.dim[k]) =
        hyp_mul(W.jwbar[k], u.segment(L.off[k], L.dim[k])) / W.eta[k];
  return out;
}

VectorXd Winv2_apply(const ConeLayout& L, const NTScaling& W, const VectorXd& u) {
  VectorXd out(L.rows);
  out.head(L.nn) = (u.head(L.nn).array() / (W.w_nn * W.w_nn)).matrix();
  for (std::size_t k = 0; k < L.off.size(); ++k) {
    const int d = L.dim[k];
    const auto ub = u.segment(L.off[k], d);
    const VectorXd& v = W.jwbar[k];
    VectorXd ju = ub;
    ju.tail(d - 1) = -ju.tail(d - 1);
    out.segment(L.off[k], d) =
        (2.0 * v.dot(ub) * v - ju) / (W.eta[k] * W.eta[k]);
  }
  return out;
}

// Jordan product u o v.
VectorXd jordan_mul(const ConeLayout& L, const VectorXd& u, const VectorXd& v) {
  VectorXd out(L.rows);
  out.head(L.nn) = (u.head(L.nn).array() * v.head(L.nn).array()).matrix();
  for (std::size_t k = 0; k < L.off.size(); ++k) {
    const int d = L.dim[k];
    const auto ub = u.segment(L.off[k], d);
    const auto vb = v.segment(L.off[k], d);
    out(L.off[k]) = ub.dot(vb);
    out.segment(L.off[k] + 1, d - 1) =
        ub(0) * vb.tail(d - 1) + vb(0) * ub.tail(d - 1);
  }
  return out;
}

// Solves lambda o x = d.
VectorXd jordan_div(const ConeLayout& L, const VectorXd& lam, const VectorXd& d) {
  VectorXd out(L.rows);
  out.head(L.nn) = (d.head(L.nn).array() / lam.head(L.nn).array()).matrix();
  for (std::size_t k = 0; k < L.off.size(); ++k) {
    const int dd = L.dim[k];
    const auto lb = lam.segment(L.off[k], dd);
    const auto db = d.segment(L.off[k], dd);
    const double det = lb(0) * lb(0) - lb.tail(dd - 1).squaredNorm();
    const double x0 = (lb(0) * db(0) - lb.tail(dd - 1).dot(db.tail(dd - 1))) / det;
    out(L.off[k]) = x0;
    out.segment(L.off[k] + 1, dd - 1) =
        (db.tail(dd - 1) - x0 * lb.tail(dd - 1)) / lb(0);
  }
  return out;
}

struct KktSolver {
  const ConeLayout& L;
  const MatrixXd& G;
  std::vector<MatrixXd> P;  // per-block G_k' J G_k, fixed for the program
  MatrixXd M;
  Eigen::LDLT<MatrixXd> ldlt;
  NTScaling Wf;  // scaling captured at factor time, for exact residuals
  bool debug = false;

  explicit KktSolver(const ConeLayout& layout, const MatrixXd& Gmat)
      : L(layout), G(Gmat) {
    const int n = static_cast<int>(G.cols());
    P.reserve(L.off.size());
    for (std::size_t k = 0; k < L.off.size(); ++k) {
      const auto Gk = G.middleRows(L.off[k], L.dim[k]);
      MatrixXd Pk(n, n);
      // G_k' J G_k = g0 g0' - Gbar' Gbar.
      Pk.noalias() = Gk.row(0).transpose() * Gk.row(0);
      Pk.noalias() -= Gk.bottomRows(L.dim[k] - 1).transpose() *
                      Gk.bottomRows(L.dim[k] - 1);
      P.push_back(std::move(Pk));
    }
    M.resize(n, n);
  }

  // Assembles and factorizes M = G' W^{-2} G + reg I.
  bool factor(const NTScaling& W) {
    Wf = W;
    M.setZero();
    for (int i = 0; i < L.nn; ++i) {
      const double d = 1.0 / (W.w_nn(i) * W.w_nn(i));
      M.noalias() += d * (G.row(i).transpose() * G.row(i));
    }
    for (std::size_t k = 0; k < L.off.size(); ++k) {
      const double e2 = 1.0 / (W.eta[k] * W.eta[k]);
      const VectorXd u =
          G.middleRows(L.off[k], L.dim[k]).transpose() * W.jwbar[k];
      M.noalias() += (2.0 * e2) * (u * u.transpose());
      M.noalias() -= e2 * P[k];
    }
    double reg = 1e-12 * std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
    if (debug) {
      double emax = 0.0, emin = kInf;
      for (std::size_t k = 0; k < L.off.size(); ++k) {
        emax = std::max(emax, 1.0 / (W.eta[k] * W.eta[k]));
        emin = std::min(emin, 1.0 / (W.eta[k] * W.eta[k]));
        emax = std::max(emax, W.wbar[k].norm());
      }
      std::printf(
          "    factor: maxdiag %.2e mindiag %.2e reg %.2e e2/wbar max %.2e\n",
          M.diagonal().maxCoeff(), M.diagonal().minCoeff(), reg, emax);
    }
    for (int attempt = 0; attempt < 4; ++attempt) {
      MatrixXd Mr = M;
      Mr.diagonal().array() += reg;
      ldlt.compute(Mr);
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) return true;
      reg *= 1e3;
    }
    return false;
  }

  // Exact operator product G' W^{-2} (G u), staged so no cancellation from
  // the assembled M enters the residual.
  VectorXd apply(const VectorXd& u) const {
    return G.transpose() * Winv2_apply(L, Wf, G * u);
  }

  // Solve (G' W^{-2} G) u = b.  The assembled M loses accuracy near the cone
  // boundary (the rank-one and block terms cancel), so refine against the
  // staged operator with the factorization as preconditioner.
  VectorXd solve(const VectorXd& b) const {
    VectorXd u = ldlt.solve(b);
    const double bnorm = std::max(b.norm(), 1e-300);
    double best = kInf;
    VectorXd best_u = u;
    for (int pass = 0; pass < 6; ++pass) {
      const VectorXd r = b - apply(u);
      const double rn = r.norm() / bnorm;
      if (debug)
        std::printf("    kkt pass %d rn %.2e unorm %.2e\n", pass, rn, u.norm());
      if (rn >= 0.5 * best) break;  // stagnated; keep the best iterate
      best = rn;
      best_u = u;
      if (rn <= 1e-14) break;
      u += ldlt.solve(r);
    }
    return best_u;
  }
};

}  // namespace

SolveResult solve_conic(const ConicProgram& prog, const SolverOptions& opts) {
  SolveResult res;
  const int n = static_cast<int>(prog.c.size());
  const ConeLayout L = make_layout(prog.cones);
  const int rows = L.rows;
  if (prog.G.rows() != rows || prog.G.cols() != n || prog.h.size() != rows)
    throw DimensionMismatch("solve_conic: G/h/cone shapes disagree");
  for (int d : prog.cones.soc)
    if (d < 2) throw DimensionMismatch("solve_conic: SOC blocks need size >= 2");
  if (!prog.G.allFinite() || !prog.h.allFinite() || !prog.c.allFinite())
    throw NonFiniteInput("solve_conic: non-finite program data");

  // Per-row (orthant) and per-block (SOC) scalar normalization.  Scaling a
  // whole SOC block by one positive factor preserves cone membership.
  VectorXd rowscale = VectorXd::Ones(rows);
  MatrixXd G = prog.G;
  VectorXd h = prog.h;
  for (int i = 0; i < L.nn; ++i) {
    const double d = std::max(G.row(i).cwiseAbs().maxCoeff(), std::abs(h(i)));
    if (d > 1e-12) rowscale(i) = 1.0 / d;
  }
  for (std::size_t k = 0; k < L.off.size(); ++k) {
    const double d = std::max(
        G.middleRows(L.off[k], L.dim[k]).cwiseAbs().maxCoeff(),
        h.segment(L.off[k], L.dim[k]).cwiseAbs().maxCoeff());
    if (d > 1e-12)
      rowscale.segment(L.off[k], L.dim[k]).setConstant(1.0 / d);
  }
  G.array().colwise() *= rowscale.array();
  h.array() *= rowscale.array();
  const VectorXd& c = prog.c;

  const double hscale = std::max(1.0, h.norm());
  const double cscale = std::max(1.0, c.norm());

  KktSolver kkt(L, G);
  kkt.debug = opts.verbose;

  // Starting point: least-squares primal/dual guesses shifted into the cone.
  VectorXd x, s, z;
  {
    NTScaling Wid;
    Wid.w_nn = Eigen::ArrayXd::Ones(L.nn);
    Wid.lam_nn = Eigen::ArrayXd::Ones(L.nn);
    for (std::size_t k = 0; k < L.off.size(); ++k) {
      VectorXd e0 = VectorXd::Zero(L.dim[k]);
      e0(0) = 1.0;
      Wid.eta.push_back(1.0);
      Wid.wbar.push_back(e0);
      Wid.jwbar.push_back(e0);
      Wid.lam.push_back(e0);
    }
    if (!kkt.factor(Wid)) {
      res.message = "initial KKT factorization failed";
      return res;
    }
    x = kkt.solve(G.transpose() * h);
    s = h - G * x;
    bring_to_cone(L, s);
    z = G * kkt.solve(-c);
    bring_to_cone(L, z);
  }
  double tau = 1.0, kappa = 1.0;

  const VectorXd e = cone_identity(L);
  const double nu = static_cast<double>(L.degree);
  int small_step_strikes = 0;
  int stalled_iters = 0;
  std::string diag;  // per-iteration step diagnostics for verbose mode

  // Best iterate seen so far, by worst-of primal/dual residual and gap.
  // Failure paths fall back to it; if it already meets relaxed tolerances
  // the solve is still usable and reported as optimal at reduced accuracy.
  struct Snapshot {
    double score = kInf;
    bool acceptable = false;
    VectorXd x, s, z;
    double tau = 1.0, kappa = 1.0;
    double pres = kInf, dres = kInf, gap = kInf, relgap = kInf;
  } best;
  constexpr double kLooseFeas = 1e-6;
  constexpr double kLooseGapAbs = 1e-7;
  constexpr double kLooseGapRel = 1e-4;
  auto loose_ok = [&](double pr, double dr, double gp, double rg) {
    return pr <= kLooseFeas && dr <= kLooseFeas &&
           (gp <= kLooseGapAbs || rg <= kLooseGapRel);
  };

  auto finalize_optimal = [&](int iter) {
    res.x = x / tau;
    res.s = (s.array() / rowscale.array()).matrix() / tau;
    res.z = (z.array() * rowscale.array()).matrix() / tau;
    res.primal_obj = prog.c.dot(res.x);
    res.dual_obj = -prog.h.dot(res.z);
    res.iterations = iter;
  };

  auto wrap_up = [&](SolveStatus fallback, const std::string& msg, int iter) {
    if (best.score < kInf) {
      x = best.x;
      s = best.s;
      z = best.z;
      tau = best.tau;
      kappa = best.kappa;
    }
    finalize_optimal(iter);
    res.gap = best.gap;
    res.rel_gap = best.relgap;
    res.primal_residual = best.pres;
    res.dual_residual = best.dres;
    if (best.acceptable) {
      res.status = SolveStatus::kOptimal;
      res.message = msg + "; best iterate accepted at reduced accuracy";
    } else {
      res.status = fallback;
      res.message = msg;
    }
    return res;
  };

  for (int iter = 0; iter <= opts.max_iters; ++iter) {
    // Residuals of the homogeneous embedding.
    VectorXd rx = G.transpose() * z + c * tau;
    VectorXd rz = s + G * x - h * tau;
    const double rtau = kappa + c.dot(x) + h.dot(z);

    const double mu = (s.dot(z) + tau * kappa) / (nu + 1.0);
    const double pres = rz.norm() / (tau * hscale);
    const double dres = rx.norm() / (tau * cscale);
    const double pobj = c.dot(x) / tau;
    const double dobj = -h.dot(z) / tau;
    const double gap = s.dot(z) / (tau * tau);
    const double relgap = gap / std::max(1.0, std::abs(pobj));

    if (opts.verbose) {
      std::printf(
          "iter %3d  mu %.3e  pres %.3e  dres %.3e  gap %.3e  tau %.3e  "
          "kap %.3e%s\n",
          iter, mu, pres, dres, gap, tau, kappa, diag.c_str());
      diag.clear();
    }

    if (!std::isfinite(mu) || !std::isfinite(pres) || !std::isfinite(dres))
      return wrap_up(SolveStatus::kNumericalFailure, "non-finite iterate",
                     iter);

    if (pres <= opts.feastol && dres <= opts.feastol &&
        (gap <= opts.abstol || relgap <= opts.reltol)) {
      res.status = SolveStatus::kOptimal;
      finalize_optimal(iter);
      res.gap = gap;
      res.rel_gap = relgap;
      res.primal_residual = pres;
      res.dual_residual = dres;
      res.message = "converged";
      return res;
    }

    // Rank iterates the same way the reduced-accuracy acceptance does, so a
    // feasible near-optimal point is never displaced by one that trades
    // feasibility for gap.
    const double score = std::max({pres, dres, std::min(gap, relgap)});
    const bool acceptable = loose_ok(pres, dres, gap, relgap);
    if (tau > 1e-10 && ((acceptable && !best.acceptable) ||
                        (acceptable == best.acceptable && score < best.score))) {
      best.score = score;
      best.acceptable = acceptable;
      best.x = x;
      best.s = s;
      best.z = z;
      best.tau = tau;
      best.kappa = kappa;
      best.pres = pres;
      best.dres = dres;
      best.gap = gap;
      best.relgap = relgap;
      stalled_iters = 0;
    } else if (++stalled_iters >= 5 && best.score < 1e-4) {
      // The end-game of the interior-point method: directions have hit the
      // precision floor of the assembled normal equations and iterates
      // oscillate instead of polishing.  Keep the best point seen.  Only
      // near convergence -- far from it, non-improving stretches are normal
      // and infeasible problems still need tau to collapse for certificates.
      return wrap_up(SolveStatus::kMaxIters, "progress stalled", iter);
    }

    // Certificate checks once tau collapses relative to kappa.
    if (tau <= 1e-2 * std::min(1.0, kappa)) {
      const double hz = h.dot(z);
      if (hz < 0.0) {
        const VectorXd zc = z / (-hz);
        if ((G.transpose() * zc).norm() <= opts.feastol * cscale) {
          res.status = SolveStatus::kPrimalInfeasible;
          res.z = (zc.array() * rowscale.array()).matrix();
          res.iterations = iter;
          res.message = "primal infeasibility certificate";
          return res;
        }
      }
      const double cx = c.dot(x);
      if (cx < 0.0) {
        const VectorXd xc = x / (-cx);
        const VectorXd sc = s / (-cx);
        if ((G * xc + sc).norm() <= opts.feastol * hscale) {
          res.status = SolveStatus::kDualInfeasible;
          res.x = xc;
          res.s = (sc.array() / rowscale.array()).matrix();
          res.iterations = iter;
          res.message = "dual infeasibility certificate";
          return res;
        }
      }
    }

    if (iter == opts.max_iters)
      return wrap_up(SolveStatus::kMaxIters, "iteration limit reached", iter);

    NTScaling W;
    if (!compute_scaling(L, s, z, W) || !kkt.factor(W))
      return wrap_up(SolveStatus::kNumericalFailure,
                     "scaling/factorization breakdown", iter);
    const VectorXd lam = lambda_full(L, W);

    // tau-elimination vectors, shared by both predictor and corrector.  The
    // denominator equals c'u2 + h'v2 - kappa/tau, but that form cancels
    // catastrophically; expanding with M u2 = G'W^{-2}h - c gives the
    // provably negative expression used here.
    const VectorXd u2 = kkt.solve(G.transpose() * Winv2_apply(L, W, h) - c);
    const VectorXd v2 = Winv2_apply(L, W, G * u2 - h);
    const double denom =
        -Winv_apply(L, W, h - G * u2).squaredNorm() - kappa / tau;
    if (!std::isfinite(denom) || denom >= 0.0)
      return wrap_up(SolveStatus::kNumericalFailure,
                     "tau-elimination denominator lost definiteness", iter);

    struct Direction {
      VectorXd dx, ds, dz;
      double dtau = 0.0, dkappa = 0.0;
    };
    struct Rhs {
      VectorXd bx, bz, bs;
      double btau = 0.0, bkappa = 0.0;
    };

    // Solves the Newton system
    //   G'dz + c dtau                  = bx
    //   ds + G dx - h dtau             = bz
    //   dkappa + c'dx + h'dz           = btau
    //   lam o (W dz + W^{-1} ds)       = bs
    //   tau dkappa + kappa dtau        = bkappa
    // by eliminating ds, dz, dkappa, and dtau against the Schur factor.
    auto solve_general = [&](const Rhs& B) -> Direction {
      Direction D;
      const VectorXd dtil = jordan_div(L, lam, B.bs);
      const VectorXd wd = W_apply(L, W, dtil) - B.bz;
      const VectorXd u1 =
          kkt.solve(B.bx - G.transpose() * Winv2_apply(L, W, wd));
      const VectorXd v1 = Winv2_apply(L, W, G * u1 + wd);
      D.dtau =
          (B.btau - B.bkappa / tau - c.dot(u1) - h.dot(v1)) / denom;
      D.dx = u1 + D.dtau * u2;
      D.dz = v1 + D.dtau * v2;
      D.ds = W_apply(L, W, dtil - W_apply(L, W, D.dz));
      D.dkappa = (B.bkappa - kappa * D.dtau) / tau;
      return D;
    };

    // Exact Newton-equation residuals for a candidate direction; used for
    // full-system iterative refinement (the elimination above amplifies the
    // Schur-solve error by the scaling's condition number at small mu).
    auto newton_residual = [&](const Rhs& B, const Direction& D) -> Rhs {
      Rhs R;
      R.bx = B.bx - (G.transpose() * D.dz + c * D.dtau);
      R.bz = B.bz - (D.ds + G * D.dx - h * D.dtau);
      R.btau = B.btau - (D.dkappa + c.dot(D.dx) + h.dot(D.dz));
      R.bs = B.bs - jordan_mul(L, lam,
                               W_apply(L, W, D.dz) + Winv_apply(L, W, D.ds));
      R.bkappa = B.bkappa - (tau * D.dkappa + kappa * D.dtau);
      return R;
    };

    auto rhs_norm = [](const Rhs& B) {
      return std::max({B.bx.norm(), B.bz.norm(), B.bs.norm(),
                       std::abs(B.btau), std::abs(B.bkappa)});
    };

    auto solve_newton = [&](double rfac, const VectorXd& d_s,
                            double d_kappa) -> Direction {
      Rhs B;
      B.bx = -rfac * rx;
      B.bz = -rfac * rz;
      B.btau = -rfac * rtau;
      B.bs = d_s;
      B.bkappa = d_kappa;
      Direction D = solve_general(B);
      const double scale = std::max(rhs_norm(B), 1e-300);
      Direction best_dir = D;
      double best_rn = kInf;
      for (int pass = 0; pass < 4; ++pass) {
        const Rhs R = newton_residual(B, D);
        const double rn = rhs_norm(R) / scale;
        if (rn >= 0.5 * best_rn) break;  // stagnated; keep the best direction
        best_rn = rn;
        best_dir = D;
        if (rn <= 1e-13) break;
        const Direction C = solve_general(R);
        D.dx += C.dx;
        D.ds += C.ds;
        D.dz += C.dz;
        D.dtau += C.dtau;
        D.dkappa += C.dkappa;
      }
      if (opts.verbose) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "  rn %.1e", best_rn);
        diag += buf;
      }
      return best_dir;
    };

    // Predictor (affine scaling direction).
    const Direction aff =
        solve_newton(1.0, -jordan_mul(L, lam, lam), -tau * kappa);
    double alpha_aff = max_step(L, s, aff.ds);
    alpha_aff = std::min(alpha_aff, max_step(L, z, aff.dz));
    if (aff.dtau < 0.0) alpha_aff = std::min(alpha_aff, -tau / aff.dtau);
    if (aff.dkappa < 0.0) alpha_aff = std::min(alpha_aff, -kappa / aff.dkappa);
    alpha_aff = std::min(alpha_aff, 1.0);

    const double sigma = std::pow(1.0 - alpha_aff, 3);

    // Corrector (combined direction with Mehrotra second-order term).
    const VectorXd corr = jordan_mul(L, Winv_apply(L, W, aff.ds),
                                     W_apply(L, W, aff.dz));
    const VectorXd d_s = -jordan_mul(L, lam, lam) - corr + sigma * mu * e;
    const double d_kappa =
        -tau * kappa - aff.dtau * aff.dkappa + sigma * mu;
    const Direction dir = solve_newton(1.0 - sigma, d_s, d_kappa);

    double alpha = max_step(L, s, dir.ds);
    alpha = std::min(alpha, max_step(L, z, dir.dz));
    if (dir.dtau < 0.0) alpha = std::min(alpha, -tau / dir.dtau);
    if (dir.dkappa < 0.0) alpha = std::min(alpha, -kappa / dir.dkappa);
    alpha = std::min(0.99 * alpha, 1.0);

    if (opts.verbose) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "  a_aff %.2e  sigma %.2e  a %.2e",
                    alpha_aff, sigma, alpha);
      diag += buf;
    }

    if (!std::isfinite(alpha) || alpha <= 1e-11) {
      ++small_step_strikes;
      if (small_step_strikes >= 3)
        return wrap_up(SolveStatus::kNumericalFailure, "step size collapsed",
                       iter);
    } else {
      small_step_strikes = 0;
    }

    x += alpha * dir.dx;
    s += alpha * dir.ds;
    z += alpha * dir.dz;
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;

    // The embedding is positively homogeneous, so the iterate can drift down
    // its ray without de-homogenized progress.  Renormalize to tau+kappa=2,
    // which keeps the optimal ray at tau ~ 2 and complementarity away from
    // the precision floor.  All convergence tests are scale-invariant.
    const double rho = 2.0 / std::max(tau + kappa, 1e-300);
    x *= rho;
    s *= rho;
    z *= rho;
    tau *= rho;
    kappa *= rho;
  }

  res.status = SolveStatus::kNumericalFailure;
  res.message = "unreachable";
  return res;
}

void dump_program_json(const ConicProgram& prog, const std::string& path) {
  nlohmann::json j;
  j["n"] = prog.c.size();
  j["rows"] = prog.h.size();
  j["nonneg"] = prog.cones.nonneg;
  j["soc"] = prog.cones.soc;
  j["c"] = std::vector<double>(prog.c.data(), prog.c.data() + prog.c.size());
  j["h"] = std::vector<double>(prog.h.data(), prog.h.data() + prog.h.size());
  std::vector<std::vector<double>> rows;
  rows.reserve(prog.G.rows());
  for (Eigen::Index i = 0; i < prog.G.rows(); ++i) {
    const VectorXd r = prog.G.row(i).transpose();
    rows.emplace_back(r.data(), r.data() + r.size());
  }
  j["G"] = rows;
  std::ofstream out(path);
  out << j.dump();
}

}  // namespace secbeam
