#include "secbeam/zf.hpp"

#include <chrono>
#include <cmath>

#include "secbeam/linalg.hpp"
#include "secbeam/metrics.hpp"

namespace secbeam {

namespace {
using Clock = std::chrono::steady_clock;
}

ZfFeasibility check_zf_feasibility(const SystemConfig& cfg) {
  ZfFeasibility f;
  f.eve_room = cfg.N >= cfg.N_e + cfg.d_1;
  f.counting = cfg.D * (cfg.N + cfg.N_r - cfg.N_e - 2 * cfg.d_1) >=
               (cfg.D - 1) * cfg.d_1;
  return f;
}

ZfDesign design_zf_subspaces(const ChannelSet& ch, const SystemConfig& cfg) {
  ZfDesign out;
  out.T.resize(cfg.D);
  out.modes.resize(cfg.D);
  out.gains.resize(cfg.D);
  out.null_dims.assign(cfg.D, 0);

  // Dominant receive subspaces of the direct links.
  std::vector<Eigen::MatrixXcd> U(cfg.D);
  for (int i = 0; i < cfg.D; ++i) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(ch.user(i, i),
                                           Eigen::ComputeThinU);
    U[i] = svd.matrixU().leftCols(cfg.d_1);
  }

  out.ok = true;
  for (int j = 0; j < cfg.D; ++j) {
    // Directions transmitter j must avoid: the eavesdropper rows and the
    // projected cross links into every other user's dominant subspace.
    const int prot_rows = cfg.N_e + (cfg.D - 1) * cfg.d_1;
    Eigen::MatrixXcd A(prot_rows, cfg.N);
    A.topRows(cfg.N_e) = ch.eve(j);
    int at = cfg.N_e;
    for (int i = 0; i < cfg.D; ++i) {
      if (i == j) continue;
      A.middleRows(at, cfg.d_1) = U[i].adjoint() * ch.user(j, i);
      at += cfg.d_1;
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    const double tol = 1e-10 * std::max(1.0, svd.singularValues()(0));
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > tol) ++rank;
    const int nullity = cfg.N - rank;
    out.null_dims[j] = nullity;
    if (nullity < cfg.d_1) {
      out.ok = false;
      continue;
    }
    out.T[j] = svd.matrixV().rightCols(nullity);

    // Effective direct channel on the allowed subspace.
    const Eigen::MatrixXcd G = ch.user(j, j) * out.T[j];
    const Eigen::MatrixXcd gram = G.adjoint() * G / cfg.sigma2_u(j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitize(gram));
    // Top d_1 eigenmodes (eigenvalues ascend in this solver).
    const int k = static_cast<int>(es.eigenvalues().size());
    out.modes[j] = es.eigenvectors().rightCols(cfg.d_1).rowwise().reverse();
    out.gains[j] = es.eigenvalues().tail(cfg.d_1).reverse().cwiseMax(0.0);
  }
  return out;
}

WaterFillResult water_fill(const Eigen::VectorXd& gains, double a, double cap) {
  WaterFillResult out;
  const int n = static_cast<int>(gains.size());
  out.p = Eigen::VectorXd::Zero(n);
  if (n == 0 || cap <= 0.0) return out;

  auto loads = [&](double mu) {
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) {
      const double level = a + mu;
      p(i) = (gains(i) > 0.0 && level > 0.0 && gains(i) > level)
                 ? 1.0 / level - 1.0 / gains(i)
                 : 0.0;
    }
    return p;
  };

  if (a > 0.0) {
    const Eigen::VectorXd p0 = loads(0.0);
    if (p0.sum() <= cap) {
      out.p = p0;
      out.mu = 0.0;
      return out;
    }
  }
  // Bisect the cap multiplier; sum of loads decreases monotonically in mu.
  double lo = 0.0;
  double hi = std::max(gains.maxCoeff() - a, 1e-12);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (loads(mid).sum() > cap)
      lo = mid;
    else
      hi = mid;
  }
  out.mu = 0.5 * (lo + hi);
  out.p = loads(out.mu);
  return out;
}

RunOutcome run_zf(const ChannelSet& ch, const SystemConfig& cfg,
                  const RunOptions& opts) {
  const auto t_start = Clock::now();
  RunOutcome out;
  out.method = Method::kZf;
  out.V = BeamformerSet::zeros(cfg.D, cfg.N, cfg.d_1);

  auto wall = [&]() {
    return opts.timing ? std::chrono::duration<double, std::milli>(
                             Clock::now() - t_start)
                             .count()
                       : 0.0;
  };

  const ZfFeasibility dims = check_zf_feasibility(cfg);
  ZfDesign design;
  if (dims.feasible()) design = design_zf_subspaces(ch, cfg);
  if (!dims.feasible() || !design.ok) {
    out.reason = TerminationReason::kInfeasible;
    out.t = total_consumed_power(out.V, cfg);
    out.see_nats = 0.0;
    out.objective_nats = 0.0;
    out.note = dims.feasible()
                   ? "instance nulling subspace too small"
                   : "dimension counting rules out the nulling design";
    out.wall_ms = wall();
    return out;
  }

  // Dinkelbach iterations on the leakage-free effective rates.
  double lambda = 0.0;
  std::vector<Eigen::VectorXd> p(cfg.D);
  for (int it = 1; it <= 200; ++it) {
    double rate = 0.0, spent = 0.0;
    for (int j = 0; j < cfg.D; ++j) {
      const WaterFillResult wf =
          water_fill(design.gains[j], lambda * cfg.zeta, cfg.P_max);
      p[j] = wf.p;
      for (int i = 0; i < wf.p.size(); ++i)
        rate += std::log1p(design.gains[j](i) * wf.p(i));
      spent += wf.p.sum();
    }
    const double power = cfg.zeta * spent + cfg.P_c;
    const double F = rate - lambda * power;

    IterateRecord rec;
    rec.iter = it;
    rec.objective = lambda;
    rec.surrogate_objective = F;
    out.trace.push_back(rec);
    out.outer_iters = it;

    if (std::abs(F) <= 1e-8) {
      out.reason = TerminationReason::kConverged;
      break;
    }
    lambda = rate / power;
    if (it == 200) out.reason = TerminationReason::kMaxIters;
  }

  for (int j = 0; j < cfg.D; ++j) {
    const Eigen::MatrixXcd W = design.modes[j];
    Eigen::MatrixXcd scaled = design.T[j] * W;
    for (int i = 0; i < cfg.d_1; ++i) scaled.col(i) *= std::sqrt(p[j](i));
    out.V.V[j] = scaled;
  }
  out.objective_nats = lambda;  // efficiency of the idealized allocation
  out.t = total_consumed_power(out.V, cfg);
  out.see_nats = see_objective(ch, out.V, cfg);
  out.wall_ms = wall();
  return out;
}

}  // namespace secbeam
