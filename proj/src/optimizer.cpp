#include "secbeam/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include "secbeam/encode.hpp"
#include "secbeam/errors.hpp"
#include "secbeam/metrics.hpp"
#include "secbeam/rng.hpp"
#include "secbeam/surrogate.hpp"
#include "secbeam/zf.hpp"

namespace secbeam {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0, bool timing) {
  if (!timing) return 0.0;
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Matched-filter start: V_j = H_jj^H R_j with R_j a random orthonormal
// receive basis, scaled to a fraction of the power budget.
BeamformerSet matched_filter_seed(const ChannelSet& ch, const SystemConfig& cfg,
                                  int retry, double power_fraction) {
  BeamformerSet V = BeamformerSet::zeros(cfg.D, cfg.N, cfg.d_1);
  for (int j = 0; j < cfg.D; ++j) {
    const std::uint64_t stream =
        (3ull << 48) | (static_cast<std::uint64_t>(retry) << 24) |
        static_cast<std::uint64_t>(j);
    NormalStream rng(ch.seed, stream);
    Eigen::MatrixXcd R(cfg.N_r, cfg.d_1);
    for (int c = 0; c < cfg.d_1; ++c)
      for (int r = 0; r < cfg.N_r; ++r) R(r, c) = rng.next_complex();
    const Eigen::MatrixXcd Q =
        Eigen::HouseholderQR<Eigen::MatrixXcd>(R).householderQ() *
        Eigen::MatrixXcd::Identity(cfg.N_r, cfg.d_1);
    Eigen::MatrixXcd Vj = ch.user(j, j).adjoint() * Q;
    const double norm2 = Vj.squaredNorm();
    if (norm2 > 0.0)
      Vj *= std::sqrt(power_fraction * cfg.P_max / norm2);
    V.V[j] = Vj;
  }
  return V;
}

std::vector<QuadraticSurrogate> secrecy_minorants(const ChannelSet& ch,
                                                  const SystemConfig& cfg,
                                                  const BeamformerSet& anchor) {
  std::vector<QuadraticSurrogate> out;
  out.reserve(cfg.D);
  for (int j = 0; j < cfg.D; ++j)
    out.push_back(build_secrecy_minorant(ch, cfg, anchor, j));
  return out;
}

// Exact QoS margin used by the initialization acceptance tests.
double exact_init_margin(const ChannelSet& ch, const SystemConfig& cfg,
                         const BeamformerSet& V, Method method) {
  MetricsReport rep = evaluate_metrics(ch, V, cfg);
  double margin = std::numeric_limits<double>::infinity();
  if (method == Method::kEe) {
    for (int j = 0; j < cfg.D; ++j) {
      margin = std::min(margin, rep.f[j] - cfg.r_nats[j]);
      if (std::isfinite(cfg.eps_secrecy_nats))
        margin = std::min(margin, cfg.eps_secrecy_nats - rep.f_e[j]);
    }
    return margin;  // accept at margin >= 0
  }
  // Ratio form: min_j f_{j,s} / r_j over users with a positive floor.
  bool any = false;
  for (int j = 0; j < cfg.D; ++j) {
    if (cfg.r_nats[j] <= 0.0) continue;
    any = true;
    margin = std::min(margin, rep.f_s[j] / cfg.r_nats[j]);
  }
  return any ? margin : std::numeric_limits<double>::infinity();
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::kSee: return "see";
    case Method::kEe: return "ee";
    case Method::kSumSecrecy: return "sum_secrecy";
    case Method::kZf: return "zf";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "see") return Method::kSee;
  if (name == "ee") return Method::kEe;
  if (name == "sum_secrecy" || name == "sum") return Method::kSumSecrecy;
  if (name == "zf" || name == "zf_dinkelbach") return Method::kZf;
  throw InvalidValue("method", "unknown method name: " + name);
}

const char* to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::kConverged: return "Converged";
    case TerminationReason::kMaxIters: return "MaxIters";
    case TerminationReason::kStalled: return "Stalled";
    case TerminationReason::kInitFailed: return "InitFailed";
    case TerminationReason::kInfeasible: return "Infeasible";
    case TerminationReason::kNumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

double RunOutcome::see_bits() const { return nats_to_bits(see_nats); }

double exact_qos_slack(const ChannelSet& ch, const SystemConfig& cfg,
                       const BeamformerSet& V, Method method) {
  const MetricsReport rep = evaluate_metrics(ch, V, cfg);
  double slack = std::numeric_limits<double>::infinity();
  if (method == Method::kEe) {
    for (int j = 0; j < cfg.D; ++j) {
      slack = std::min(slack, rep.f[j] - cfg.r_nats[j]);
      if (std::isfinite(cfg.eps_secrecy_nats))
        slack = std::min(slack, cfg.eps_secrecy_nats - rep.f_e[j]);
    }
    return slack;
  }
  for (int j = 0; j < cfg.D; ++j)
    slack = std::min(slack, rep.f_s[j] - cfg.r_nats[j]);
  return slack;
}

InitResult initialize_feasible(const ChannelSet& ch, const SystemConfig& cfg,
                               Method method, const RunOptions& opts) {
  InitResult best;
  const bool ee = (method == Method::kEe);
  const double accept_at = ee ? 0.0 : 1.0;

  // Seeding at the full budget backfires when P_max is large: the wiretap
  // rate grows with power too, and ratio objectives favour operating near
  // the circuit-power crossover zeta*P^t ~ P_c.  Cap the seed level there
  // and back off by a decade on each retry alongside a fresh receive basis.
  const double seed_cap = std::min(cfg.P_max, cfg.P_c / cfg.zeta);
  for (int retry = 0; retry < opts.init_retries; ++retry) {
    const double fraction = opts.seed_power_fraction * std::pow(0.1, retry) *
                            (seed_cap / cfg.P_max);
    BeamformerSet V = matched_filter_seed(ch, cfg, retry, fraction);
    double prev_tau = -std::numeric_limits<double>::infinity();
    for (int it = 0; it <= opts.max_init_iters; ++it) {
      const double margin = exact_init_margin(ch, cfg, V, method);
      if (margin >= accept_at) {
        best.ok = true;
        best.V = V;
        best.iters = it;
        best.retries_used = retry;
        best.margin = margin;
        best.message = "feasible start found";
        return best;
      }
      if (it == opts.max_init_iters) break;

      SubproblemEncoding enc;
      if (ee) {
        std::vector<QuadraticSurrogate> thr, wtp;
        for (int j = 0; j < cfg.D; ++j) {
          thr.push_back(build_throughput_minorant(ch, cfg, V, j));
          wtp.push_back(build_wiretap_majorant(ch, cfg, V, j));
        }
        enc = encode_ee_feasibility(thr, wtp, cfg);
      } else {
        enc = encode_feasibility_ratio(secrecy_minorants(ch, cfg, V), cfg);
      }
      const SolveResult res = solve_conic(enc.prog, opts.solver);
      if (!res.usable()) {
        best.message = std::string("feasibility subproblem: ") + res.message;
        break;
      }
      const double tau = res.x(enc.t_index);
      V = enc.extract(res.x);
      if (tau < accept_at && tau - prev_tau < 1e-5) {
        best.message = "feasibility search stalled";
        break;  // reseed
      }
      prev_tau = tau;
    }
    if (best.message.empty()) best.message = "feasibility search exhausted";
  }
  best.ok = false;
  return best;
}

namespace {

struct LoopHooks {
  // Builds the convex step subproblem at the current anchor.
  std::function<SubproblemEncoding(const BeamformerSet&, double)> encode;
  // Exact objective being ascended.
  std::function<double(const BeamformerSet&)> objective;
  // Exact slack of the method's QoS constraints (>= 0 means satisfied).
  std::function<double(const BeamformerSet&)> qos_slack;
};

double min_power_slack(const BeamformerSet& V, const SystemConfig& cfg) {
  double slack = std::numeric_limits<double>::infinity();
  for (const auto& Vj : V.V)
    slack = std::min(slack, cfg.P_max - Vj.squaredNorm());
  return slack;
}

// Rescaling a feasible start along its power ray costs a handful of exact
// metric evaluations and often lands in a far better basin than the QoS
// search returned (which cares about feasibility, not the objective).
BeamformerSet best_power_scaling(const SystemConfig& cfg,
                                 const BeamformerSet& V0,
                                 const LoopHooks& hooks) {
  double peak = 0.0;
  for (const auto& Vj : V0.V) peak = std::max(peak, Vj.squaredNorm());
  if (!(peak > 0.0)) return V0;
  BeamformerSet best = V0;
  double best_obj = hooks.objective(V0);
  const double s_hi = std::sqrt(cfg.P_max / peak);
  // The ladder is anchored at the seed's own scale (not the budget ceiling)
  // so the chosen start is budget-independent once the cap stops binding.
  for (int k = -20; k <= 40; ++k) {
    const double s = std::pow(1.25, k);
    if (s > s_hi) break;
    BeamformerSet W = V0;
    for (auto& Wj : W.V) Wj *= s;
    if (hooks.qos_slack(W) < 0.0) continue;
    const double obj = hooks.objective(W);
    if (obj > best_obj) {
      best_obj = obj;
      best = W;
    }
  }
  return best;
}

RunOutcome surrogate_ascent(const ChannelSet& ch, const SystemConfig& cfg,
                            Method method, const RunOptions& opts,
                            const LoopHooks& hooks) {
  const auto t_start = Clock::now();
  RunOutcome out;
  out.method = method;

  const InitResult init = initialize_feasible(ch, cfg, method, opts);
  if (!init.ok) {
    out.reason = TerminationReason::kInitFailed;
    out.V = BeamformerSet::zeros(cfg.D, cfg.N, cfg.d_1);
    out.t = total_consumed_power(out.V, cfg);
    out.note = init.message;
    out.wall_ms = ms_since(t_start, opts.timing);
    return out;
  }

  BeamformerSet V = best_power_scaling(cfg, init.V, hooks);
  double t_bar = total_consumed_power(V, cfg);
  double obj = hooks.objective(V);
  out.reason = TerminationReason::kMaxIters;

  for (int k = 1; k <= cfg.max_outer_iters; ++k) {
    const auto it_start = Clock::now();
    SubproblemEncoding enc;
    try {
      enc = hooks.encode(V, t_bar);
    } catch (const DegenerateAnchor& e) {
      out.reason = out.outer_iters > 0 ? TerminationReason::kStalled
                                       : TerminationReason::kNumericalFailure;
      out.note = e.what();
      break;
    }
    const SolveResult res = solve_conic(enc.prog, opts.solver);
    const bool solver_ok = res.usable();
    const std::string solver_note = std::string("subproblem solve: ") +
                                    res.message + " (" +
                                    to_string(res.status) + ")";
    if (res.x.size() != enc.prog.c.size() || !res.x.allFinite()) {
      out.reason = out.outer_iters > 0 ? TerminationReason::kStalled
                                       : TerminationReason::kNumericalFailure;
      out.note = solver_note;
      break;
    }
    BeamformerSet V_next = enc.extract(res.x);
    // Power overshoot within solver tolerance is clipped back to the cap;
    // the exact QoS gate below re-checks the clipped point.
    for (auto& Vj : V_next.V) {
      const double p2 = Vj.squaredNorm();
      if (p2 > cfg.P_max && p2 <= cfg.P_max * (1.0 + 1e-4))
        Vj *= std::sqrt(cfg.P_max / p2);
    }
    const double obj_next = hooks.objective(V_next);
    const double power_slack = min_power_slack(V_next, cfg);
    const double qos_slack = hooks.qos_slack(V_next);

    // Candidates must satisfy the exact constraints (not merely the model's
    // rows, which the solver only enforces to its own tolerance) and must
    // not let the exact objective slip.  A solve that finished at reduced
    // accuracy can still deliver a usable step; such a step is taken only
    // if it strictly improves the exact objective.
    const bool feasible_step = std::min(power_slack, qos_slack) >= -1e-8;
    const bool improving =
        solver_ok ? obj_next >= obj - 1e-10 : obj_next > obj + 1e-10;
    if (!feasible_step || !improving) {
      if (solver_ok && feasible_step) {
        // The model step stopped paying off within solver accuracy.
        out.reason = TerminationReason::kConverged;
        out.note = "stalled: model step no longer improves the exact objective";
      } else {
        out.reason = out.outer_iters > 0 ? TerminationReason::kStalled
                                         : TerminationReason::kNumericalFailure;
        out.note = solver_ok ? "candidate step left the exact feasible set"
                             : solver_note;
      }
      break;
    }

    V = V_next;
    t_bar = total_consumed_power(V, cfg);

    IterateRecord rec;
    rec.iter = k;
    rec.objective = obj_next;
    rec.surrogate_objective = enc.surrogate_value(res.x);
    rec.min_power_slack = power_slack;
    rec.min_qos_slack = qos_slack;
    rec.solver_status = to_string(res.status);
    rec.solver_iters = res.iterations;
    rec.solver_pres = res.primal_residual;
    rec.solver_dres = res.dual_residual;
    rec.solver_gap = res.gap;
    rec.wall_ms = ms_since(it_start, opts.timing);
    out.trace.push_back(rec);
    out.outer_iters = k;

    const double gain = obj_next - obj;
    obj = obj_next;
    if (gain <= cfg.eps_stop * std::max(std::abs(obj), 1e-12)) {
      out.reason = TerminationReason::kConverged;
      break;
    }
  }

  out.V = V;
  out.t = t_bar;
  out.objective_nats = obj;
  out.see_nats = see_objective(ch, V, cfg);
  out.wall_ms = ms_since(t_start, opts.timing);
  return out;
}

}  // namespace

RunOutcome run_see(const ChannelSet& ch, const SystemConfig& cfg,
                   const RunOptions& opts) {
  LoopHooks hooks;
  hooks.encode = [&](const BeamformerSet& anchor, double t_bar) {
    const auto secrecy = secrecy_minorants(ch, cfg, anchor);
    std::vector<FractionalSurrogate> terms;
    terms.reserve(cfg.D);
    for (int j = 0; j < cfg.D; ++j)
      terms.push_back(build_fractional_minorant(secrecy[j], anchor, t_bar));
    return encode_see_subproblem(terms, secrecy, cfg);
  };
  hooks.objective = [&](const BeamformerSet& V) {
    return see_objective(ch, V, cfg);
  };
  hooks.qos_slack = [&](const BeamformerSet& V) {
    return exact_qos_slack(ch, cfg, V, Method::kSee);
  };
  RunOutcome out = surrogate_ascent(ch, cfg, Method::kSee, opts, hooks);
  out.objective_nats = out.see_nats;
  return out;
}

RunOutcome run_ee(const ChannelSet& ch, const SystemConfig& cfg,
                  const RunOptions& opts) {
  LoopHooks hooks;
  hooks.encode = [&](const BeamformerSet& anchor, double t_bar) {
    std::vector<QuadraticSurrogate> thr, wtp;
    thr.reserve(cfg.D);
    wtp.reserve(cfg.D);
    for (int j = 0; j < cfg.D; ++j) {
      thr.push_back(build_throughput_minorant(ch, cfg, anchor, j));
      wtp.push_back(build_wiretap_majorant(ch, cfg, anchor, j));
    }
    return encode_ee_subproblem(thr, wtp, anchor, t_bar, cfg);
  };
  hooks.objective = [&](const BeamformerSet& V) {
    const MetricsReport rep = evaluate_metrics(ch, V, cfg);
    return rep.ee;
  };
  hooks.qos_slack = [&](const BeamformerSet& V) {
    return exact_qos_slack(ch, cfg, V, Method::kEe);
  };
  return surrogate_ascent(ch, cfg, Method::kEe, opts, hooks);
}

RunOutcome run_sum_secrecy(const ChannelSet& ch, const SystemConfig& cfg,
                           const RunOptions& opts) {
  LoopHooks hooks;
  hooks.encode = [&](const BeamformerSet& anchor, double) {
    return encode_sum_secrecy_subproblem(secrecy_minorants(ch, cfg, anchor),
                                         cfg);
  };
  hooks.objective = [&](const BeamformerSet& V) {
    const MetricsReport rep = evaluate_metrics(ch, V, cfg);
    double acc = 0.0;
    for (double fs : rep.f_s) acc += fs;
    return acc;
  };
  hooks.qos_slack = [&](const BeamformerSet& V) {
    return exact_qos_slack(ch, cfg, V, Method::kSumSecrecy);
  };
  return surrogate_ascent(ch, cfg, Method::kSumSecrecy, opts, hooks);
}

RunOutcome run_method(const ChannelSet& ch, const SystemConfig& cfg,
                      Method method, const RunOptions& opts) {
  switch (method) {
    case Method::kSee: return run_see(ch, cfg, opts);
    case Method::kEe: return run_ee(ch, cfg, opts);
    case Method::kSumSecrecy: return run_sum_secrecy(ch, cfg, opts);
    case Method::kZf: return run_zf(ch, cfg, opts);
  }
  throw Error("run_method: unknown method");
}

}  // namespace secbeam
