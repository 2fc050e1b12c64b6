// End-to-end acceptance gate for the secrecy-beamforming simulator.  Each
// numbered criterion prints exactly one PASS/FAIL line with its measured
// numbers; the process exit code is the number of failed criteria.  All
// tolerances are pinned here, next to the check they guard.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "secbeam/beamformer.hpp"
#include "secbeam/channel.hpp"
#include "secbeam/config.hpp"
#include "secbeam/encode.hpp"
#include "secbeam/harness.hpp"
#include "secbeam/metrics.hpp"
#include "secbeam/optimizer.hpp"
#include "secbeam/rng.hpp"
#include "secbeam/surrogate.hpp"
#include "secbeam/zf.hpp"

using namespace secbeam;
using Eigen::MatrixXcd;
using Eigen::VectorXd;

namespace {

// ---------------------------------------------------------------------------
// Pinned tolerances.
constexpr double kAnchorTol = 1e-10;       // three-way equality at the anchor
constexpr double kBoundSlack = 1e-9;       // global minorant/majorant slack
constexpr double kValueTol = 1e-8;         // surrogate-vs-exact value match
constexpr double kGradRelTol = 1e-4;       // finite-difference gradient match
constexpr double kAscentSlack = 1e-8;      // per-step exact-objective ascent
constexpr double kIterFeasTol = 1e-6;      // per-iterate constraint slack
constexpr double kOracleRelTol = 0.02;     // gap to the random-search oracle
// Saturated budgets reproduce the same optimum only to solver accuracy; the
// observed cell-to-cell jitter is ~1e-5 relative, so the monotonicity check
// carries a 1e-4 relative slack.
constexpr double kMonotoneRelSlack = 1e-4;
constexpr double kSaturationGain = 0.05;   // last-step gain over the peak mean
constexpr double kFixedPointTol = 1e-8;    // parametric-baseline residual
constexpr double kKktTol = 1e-8;           // water-filling stationarity

double elapsed_s(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       since)
      .count();
}

MatrixXcd random_complex(NormalStream& rng, int rows, int cols) {
  MatrixXcd A(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) A(r, c) = rng.next_complex();
  return A;
}

// Raw-determinant reference for f(X) = ln det(I + X X^H / sigma2).
double naive_f(const MatrixXcd& X, double sigma2) {
  const int m = static_cast<int>(X.rows());
  const std::complex<double> d =
      (MatrixXcd::Identity(m, m) + X * X.adjoint() / sigma2).determinant();
  return std::log(d.real());
}

SystemConfig base_cfg(int D, int N, int N_r, int N_e, int d_1) {
  SystemConfig cfg;
  cfg.D = D;
  cfg.N = N;
  cfg.N_r = N_r;
  cfg.N_e = N_e;
  cfg.d_1 = d_1;
  cfg.sigma_u.assign(D, 1.0);
  cfg.sigma_e = 1.0;
  cfg.r_nats.assign(D, bits_to_nats(1.0));
  cfg.zeta = 1.0;
  cfg.P_c = db_to_watts(7.0);
  cfg.P_max = db_to_watts(10.0);
  cfg.eps_stop = 1e-3;
  cfg.max_outer_iters = 200;
  return cfg;
}

SystemConfig full_cfg() { return base_cfg(3, 12, 6, 9, 3); }
SystemConfig scaled_cfg() {
  SystemConfig cfg = base_cfg(2, 4, 2, 3, 1);
  cfg.r_nats.assign(cfg.D, bits_to_nats(0.5));
  return cfg;
}

BeamformerSet random_V(const SystemConfig& cfg, std::uint64_t stream,
                       double scale) {
  NormalStream rng(909, stream);
  BeamformerSet V = BeamformerSet::zeros(cfg.D, cfg.N, cfg.d_1);
  for (auto& Vj : V.V)
    for (int c = 0; c < Vj.cols(); ++c)
      for (int r = 0; r < Vj.rows(); ++r) Vj(r, c) = scale * rng.next_complex();
  return V;
}

// Central finite differences over the packed real beamformer coordinates
// plus (optionally) the power scalar as a trailing coordinate.
VectorXd fd_gradient(const std::function<double(const BeamformerSet&, double)>& fn,
                     const BeamformerSet& at, double t, bool with_t,
                     const SystemConfig& cfg) {
  VectorXd x0 = pack_real(at);
  const int nv = static_cast<int>(x0.size());
  VectorXd g(nv + (with_t ? 1 : 0));
  const double h = 1e-5;
  for (int i = 0; i < nv; ++i) {
    VectorXd xp = x0, xm = x0;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (fn(unpack_real(xp, cfg.D, cfg.N, cfg.d_1), t) -
            fn(unpack_real(xm, cfg.D, cfg.N, cfg.d_1), t)) /
           (2.0 * h);
  }
  if (with_t)
    g(nv) = (fn(at, t + h) - fn(at, t - h)) / (2.0 * h);
  return g;
}

bool gradients_match(const std::function<double(const BeamformerSet&, double)>& a,
                     const std::function<double(const BeamformerSet&, double)>& b,
                     const BeamformerSet& at, double t, bool with_t,
                     const SystemConfig& cfg) {
  const VectorXd ga = fd_gradient(a, at, t, with_t, cfg);
  const VectorXd gb = fd_gradient(b, at, t, with_t, cfg);
  return (ga - gb).norm() / std::max(1.0, gb.norm()) < kGradRelTol;
}

std::string fmt_runtime(double s) {
  std::ostringstream os;
  os.precision(1);
  os << std::fixed << s << " s";
  return os.str();
}

// ---------------------------------------------------------------------------
// 1. Log-det sandwich: lower and upper bound touch the exact value at the
//    anchor and bound it globally.
bool criterion_sandwich(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  NormalStream rng(1000, 0);
  int checked = 0, violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 1 + trial % 4;
    const int n = 1 + (trial / 4) % 4;
    const double sigma2 = 0.25 + 0.25 * (trial % 8);
    const MatrixXcd Xbar = random_complex(rng, m, n);
    const LogDetBounds b = gaussian_logdet_bounds(Xbar, sigma2);

    const double f_bar = naive_f(Xbar, sigma2);
    if (std::abs(b.anchor_value - f_bar) > kAnchorTol) ++violations;
    if (std::abs(b.eval_lower(Xbar) - f_bar) > kAnchorTol) ++violations;
    if (std::abs(b.eval_upper(Xbar) - f_bar) > kAnchorTol) ++violations;

    for (int k = 0; k < 4; ++k) {
      const MatrixXcd X = std::pow(2.0, k - 1) * random_complex(rng, m, n);
      const double f = naive_f(X, sigma2);
      if (b.eval_lower(X) > f + kBoundSlack) ++violations;
      if (b.eval_upper(X) < f - kBoundSlack) ++violations;
      ++checked;
    }
  }
  const double dt = elapsed_s(t0);
  std::ostringstream os;
  os << violations << " violations over 1000 triples / " << checked
     << " bound points (" << fmt_runtime(dt) << ")";
  detail = os.str();
  return violations == 0 && dt < 10.0;
}

// ---------------------------------------------------------------------------
// 2. Tangency: the secrecy minorant and the ratio minorant match the exact
//    functions in value and finite-difference gradient at random anchors.
bool criterion_tangency(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemConfig cfg = scaled_cfg();
  const ChannelSet ch = generate_channels(cfg, 2);
  int bad_value = 0, bad_grad = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const BeamformerSet anchor = random_V(cfg, s, 0.5 + 0.02 * (s % 20));
    const double t_bar = total_consumed_power(anchor, cfg);
    for (int j = 0; j < cfg.D; ++j) {
      const QuadraticSurrogate sec = build_secrecy_minorant(ch, cfg, anchor, j);
      const auto exact_sec = [&](const BeamformerSet& V, double) {
        return user_throughput(ch, V, cfg, j) - eve_throughput(ch, V, cfg, j);
      };
      if (std::abs(sec.evaluate(anchor) - exact_sec(anchor, 0.0)) > kValueTol)
        ++bad_value;
      if (!gradients_match(
              [&](const BeamformerSet& V, double) { return sec.evaluate(V); },
              exact_sec, anchor, t_bar, false, cfg))
        ++bad_grad;

      const FractionalSurrogate frac =
          build_fractional_minorant(sec, anchor, t_bar);
      const auto exact_ratio = [&](const BeamformerSet& V, double t) {
        return exact_sec(V, 0.0) / t;
      };
      if (std::abs(frac.evaluate(anchor, t_bar) - exact_ratio(anchor, t_bar)) >
          kValueTol)
        ++bad_value;
      if (!gradients_match(
              [&](const BeamformerSet& V, double t) {
                return frac.evaluate(V, t);
              },
              exact_ratio, anchor, t_bar, true, cfg))
        ++bad_grad;
    }
  }
  const double dt = elapsed_s(t0);
  std::ostringstream os;
  os << bad_value << " value / " << bad_grad
     << " gradient mismatches over 50 anchors x 2 users x 2 surrogates ("
     << fmt_runtime(dt) << ")";
  detail = os.str();
  return bad_value == 0 && bad_grad == 0 && dt < 30.0;
}

// ---------------------------------------------------------------------------
// 3. Ascent and feasibility at full size: every trace climbs in the exact
//    objective and every iterate keeps the power and QoS constraints.
bool criterion_ascent(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemConfig cfg = full_cfg();
  int bad_runs = 0, total_iters = 0;
  std::string first_bad;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ChannelSet ch = generate_channels(cfg, seed);
    RunOptions opts;
    opts.timing = false;
    const RunOutcome out = run_see(ch, cfg, opts);
    bool ok = out.reason == TerminationReason::kConverged ||
              out.reason == TerminationReason::kMaxIters ||
              out.reason == TerminationReason::kStalled;
    ok = ok && !out.trace.empty();  // guards against a vacuous pass
    double prev = -std::numeric_limits<double>::infinity();
    for (const IterateRecord& rec : out.trace) {
      ok = ok && rec.objective >= prev - kAscentSlack;
      ok = ok && rec.min_power_slack >= -kIterFeasTol;
      ok = ok && rec.min_qos_slack >= -kIterFeasTol;
      prev = rec.objective;
      ++total_iters;
    }
    if (!ok) {
      ++bad_runs;
      if (first_bad.empty()) {
        std::ostringstream os;
        os << "seed " << seed << " (" << to_string(out.reason) << ")";
        first_bad = os.str();
      }
    }
  }
  const double dt = elapsed_s(t0);
  std::ostringstream os;
  os << (50 - bad_runs) << "/50 runs monotone and feasible across "
     << total_iters << " iterates (" << fmt_runtime(dt) << ")";
  if (!first_bad.empty()) os << "; first failure: " << first_bad;
  detail = os.str();
  return bad_runs == 0;
}

// ---------------------------------------------------------------------------
// 4. Variable accounting of the ratio subproblem encoder at full size.
bool criterion_accounting(std::string& detail) {
  const SystemConfig cfg = full_cfg();
  const ChannelSet ch = generate_channels(cfg, 0);
  const InitResult init = initialize_feasible(ch, cfg, Method::kSee);
  if (!init.ok) {
    detail = "no feasible anchor found";
    return false;
  }
  const double t_bar = total_consumed_power(init.V, cfg);
  std::vector<QuadraticSurrogate> secrecy;
  std::vector<FractionalSurrogate> terms;
  for (int j = 0; j < cfg.D; ++j) {
    secrecy.push_back(build_secrecy_minorant(ch, cfg, init.V, j));
    terms.push_back(build_fractional_minorant(secrecy[j], init.V, t_bar));
  }
  const SubproblemEncoding enc = encode_see_subproblem(terms, secrecy, cfg);
  std::ostringstream os;
  os << enc.n_core << " core reals (want 217), " << enc.m_quadratic_groups
     << " quadratic groups (want 7)";
  detail = os.str();
  return enc.n_core == 2 * cfg.D * cfg.N * cfg.d_1 + 1 && enc.n_core == 217 &&
         enc.m_quadratic_groups == 2 * cfg.D + 1 &&
         enc.m_quadratic_groups == 7;
}

// ---------------------------------------------------------------------------
// 5. Small-instance oracle: the ascent result matches the best of 1e6
//    random feasible beamformers within 2%.
bool criterion_small_oracle(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  SystemConfig cfg = base_cfg(1, 2, 1, 1, 1);
  cfg.r_nats.assign(1, bits_to_nats(0.1));
  int bad = 0;
  double worst_rel = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ChannelSet ch = generate_channels(cfg, seed);
    RunOptions opts;
    opts.timing = false;
    const RunOutcome out = run_see(ch, cfg, opts);

    // Random search: 1e4 directions x 100 power levels.  Direction fixes the
    // two channel gains, so each power level costs two scalar logs.
    const Eigen::RowVectorXcd h = ch.user(0, 0).row(0);
    const Eigen::RowVectorXcd g = ch.eve(0).row(0);
    NormalStream draw(4242, seed);
    double best = 0.0;
    for (int dir = 0; dir < 10000; ++dir) {
      Eigen::Vector2cd v(draw.next_complex(), draw.next_complex());
      v.normalize();
      const double a = std::norm((h * v)(0)) / (cfg.sigma_u[0] * cfg.sigma_u[0]);
      const double bgain = std::norm((g * v)(0)) / cfg.sigma2_e();
      for (int k = 1; k <= 100; ++k) {
        const double p = cfg.P_max * k / 100.0;
        const double fs = std::log1p(a * p) - std::log1p(bgain * p);
        if (fs < cfg.r_nats[0]) continue;
        best = std::max(best, fs / (cfg.zeta * p + cfg.P_c));
      }
    }
    const double rel = (best - out.see_nats) / std::max(best, 1e-12);
    worst_rel = std::max(worst_rel, rel);
    if (rel > kOracleRelTol) ++bad;
  }
  const double dt = elapsed_s(t0);
  std::ostringstream os;
  os.precision(3);
  os << (10 - bad) << "/10 seeds within 2% (worst gap "
     << worst_rel * 100.0 << "%, " << fmt_runtime(dt) << ")";
  detail = os.str();
  return bad == 0 && dt < 120.0;
}

// ---------------------------------------------------------------------------
// Shared sweep for the trend criteria: full dimensions, a 0-30 dB budget
// grid, 20 paired channel draws, all three comparable methods.
const SweepResult& trend_sweep() {
  static const SweepResult res = [] {
    SweepSpec spec;
    spec.base = full_cfg();
    spec.base.eps_secrecy_nats = bits_to_nats(0.05);
    spec.pmax_db = {0, 5, 10, 15, 20, 25, 30};
    spec.seeds.resize(20);
    for (std::uint64_t s = 0; s < 20; ++s) spec.seeds[s] = s;
    spec.methods = {Method::kSee, Method::kEe, Method::kZf};
    spec.timing = TimingMode::kNone;
    return run_sweep(spec);
  }();
  return res;
}

// 6. Ratio objective dominates the leakage-capped objective in achieved
//    secrecy efficiency at every budget.
bool criterion_method_ordering(std::string& detail) {
  const SweepResult& res = trend_sweep();
  int bad = 0;
  std::ostringstream os;
  os.precision(4);
  for (double p : res.spec.pmax_db) {
    const double see = aggregate_mean(res, Method::kSee, p);
    const double ee = aggregate_mean(res, Method::kEe, p);
    if (see < ee) ++bad;
    if (p == 10.0) os << "at 10 dB: " << see << " vs " << ee << " bits/J";
  }
  detail = os.str() + (bad ? "; " + std::to_string(bad) + " grid points inverted"
                           : "; ordering holds at all 7 budgets");
  return bad == 0;
}

// 7. Proposed design dominates the nulling baseline; the baseline's
//    dimension check rejects d_1 = 4 outright.
bool criterion_baseline_ordering(std::string& detail) {
  const SweepResult& res = trend_sweep();
  int bad = 0;
  for (double p : res.spec.pmax_db)
    if (aggregate_mean(res, Method::kSee, p) <
        aggregate_mean(res, Method::kZf, p))
      ++bad;

  SystemConfig cfg4 = full_cfg();
  cfg4.d_1 = 4;
  const ZfFeasibility f4 = check_zf_feasibility(cfg4);
  const RunOutcome out4 = run_zf(generate_channels(cfg4, 0), cfg4, {});
  const bool static_flag = !f4.feasible() &&
                           out4.reason == TerminationReason::kInfeasible;

  std::ostringstream os;
  os << (bad == 0 ? "baseline never exceeds the proposed mean"
                  : std::to_string(bad) + " grid points inverted")
     << "; four-stream config " << (static_flag ? "rejected" : "NOT rejected")
     << " by the dimension check";
  detail = os.str();
  return bad == 0 && static_flag;
}

// 8. Saturation: the proposed mean is non-decreasing in the budget and the
//    final 5 dB step adds at most 5% of the peak.
bool criterion_saturation(std::string& detail) {
  const SweepResult& res = trend_sweep();
  std::vector<double> mean;
  for (double p : res.spec.pmax_db)
    mean.push_back(aggregate_mean(res, Method::kSee, p));
  const double peak = *std::max_element(mean.begin(), mean.end());

  bool monotone = true;
  for (size_t i = 1; i < mean.size(); ++i)
    monotone = monotone && mean[i] >= mean[i - 1] - kMonotoneRelSlack * peak;
  const double last_gain = mean.back() - mean[mean.size() - 2];
  const bool saturated = last_gain <= kSaturationGain * peak;

  std::ostringstream os;
  os.precision(4);
  os << "means";
  for (double m : mean) os << ' ' << m;
  os << " bits/J; last step +" << (last_gain / peak * 100.0) << "% of peak";
  detail = os.str();
  return monotone && saturated;
}

// ---------------------------------------------------------------------------
// 9. Parametric baseline: fixed-point residual at the accepted parameter and
//    water-filling stationarity against the scalar condition.
bool criterion_dinkelbach(std::string& detail) {
  SystemConfig cfg = base_cfg(2, 6, 2, 2, 1);
  cfg.r_nats.assign(cfg.D, 0.0);
  double worst_residual = 0.0;
  int converged = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RunOutcome out = run_zf(generate_channels(cfg, seed), cfg, {});
    if (out.reason != TerminationReason::kConverged || out.trace.empty())
      continue;
    ++converged;
    worst_residual = std::max(
        worst_residual, std::abs(out.trace.back().surrogate_objective));
  }

  // Water-filling stationarity on a mixed capped/uncapped batch.
  NormalStream rng(77, 0);
  double worst_kkt = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 4;
    VectorXd gains(n);
    for (int i = 0; i < n; ++i)
      gains(i) = 0.05 + std::norm(rng.next_complex());
    const double a = 0.05 + 0.1 * (trial % 5);
    const double cap = (trial % 2) ? 0.8 : 1e6;
    const WaterFillResult wf = water_fill(gains, a, cap);
    double used = 0.0;
    for (int i = 0; i < n; ++i) {
      used += wf.p(i);
      if (wf.p(i) > 1e-12) {
        const double marginal = gains(i) / (1.0 + gains(i) * wf.p(i));
        worst_kkt = std::max(worst_kkt, std::abs(marginal - (a + wf.mu)));
      } else {
        worst_kkt = std::max(worst_kkt, std::max(0.0, gains(i) - (a + wf.mu)));
      }
    }
    if (wf.mu > 0.0)
      worst_kkt = std::max(worst_kkt, std::abs(used - cap) / cap);
  }

  std::ostringstream os;
  os << converged << "/5 baseline runs converged, worst fixed-point residual "
     << worst_residual << ", worst stationarity residual " << worst_kkt;
  detail = os.str();
  return converged == 5 && worst_residual <= kFixedPointTol &&
         worst_kkt <= kKktTol;
}

// ---------------------------------------------------------------------------
// 10. Determinism: rerunning a sweep yields byte-identical tables, at any
//     worker count.
bool criterion_determinism(std::string& detail) {
  SweepSpec spec;
  spec.base = scaled_cfg();
  spec.pmax_db = {0.0, 10.0};
  spec.seeds = {0, 1, 2};
  spec.methods = {Method::kSee, Method::kZf};
  spec.timing = TimingMode::kNone;

  const auto bytes = [](const SweepResult& r) {
    std::ostringstream rows, agg;
    write_rows_csv(r, rows);
    write_aggregate_csv(r, agg);
    return rows.str() + "\x1e" + agg.str();
  };
  const std::string a = bytes(run_sweep(spec));
  const std::string b = bytes(run_sweep(spec));
  spec.jobs = 3;
  const std::string c = bytes(run_sweep(spec));

  const bool same = (a == b) && (a == c);
  detail = same ? "rerun and 3-worker rerun byte-identical ("
                  + std::to_string(a.size()) + " bytes)"
                : "outputs differ between reruns";
  return same;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<bool(std::string&)> fn;
  };
  const std::vector<Entry> entries = {
      {"log-det sandwich bounds", criterion_sandwich},
      {"surrogate tangency (value + gradient)", criterion_tangency},
      {"ascent and per-iterate feasibility at full size", criterion_ascent},
      {"subproblem variable accounting", criterion_accounting},
      {"small-instance random-search oracle", criterion_small_oracle},
      {"ratio form beats leakage-capped form", criterion_method_ordering},
      {"proposed beats nulling baseline; d_1=4 rejected", criterion_baseline_ordering},
      {"efficiency saturates with the power budget", criterion_saturation},
      {"parametric baseline fixed point + water-filling", criterion_dinkelbach},
      {"bit-identical sweep reruns", criterion_determinism},
  };

  int failures = 0;
  for (size_t i = 0; i < entries.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = entries[i].fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << (i + 1) << ". "
              << entries[i].name << " — " << detail << std::endl;
    if (!ok) ++failures;
  }
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                              : std::to_string(failures) + " CRITERIA FAILED")
            << std::endl;
  return failures;
}
