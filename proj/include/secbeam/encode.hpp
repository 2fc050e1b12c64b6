#pragma once

#include <vector>

#include "secbeam/beamformer.hpp"
#include "secbeam/config.hpp"
#include "secbeam/conic.hpp"
#include "secbeam/surrogate.hpp"

namespace secbeam {

// A convex subproblem lowered to inequality-form conic data, together with
// the variable layout needed to read solutions back.
struct SubproblemEncoding {
  ConicProgram prog;
  int D = 0, N = 0, d_1 = 0;

  // Column of the scalar coupled to the beamformers: the consumed-power
  // epigraph t for the ratio subproblems, the feasibility margin for the
  // initialization subproblems, the quadratic epigraph for the sum form.
  int t_index = -1;

  // The encoded objective maximizes obj_constant - c'x (conic min form).
  double obj_constant = 0.0;

  // Layout summary: beamformer coordinates plus the coupled scalar, and the
  // number of quadratic constraint groups tied to the surrogate model
  // (per-user rate stacks, per-user ratio epigraphs, one power coupling).
  int n_core = 0;
  int m_quadratic_groups = 0;

  BeamformerSet extract(const Eigen::VectorXd& x) const;
  double scalar_of(const Eigen::VectorXd& x) const;
  double surrogate_value(const Eigen::VectorXd& x) const;
};

// Ratio objective step: maximize sum_j g_j(V, t) subject to per-transmitter
// power caps, the consumed-power coupling zeta*sum||V_j||^2 + P_c <= t, and
// the per-user secrecy floors secrecy_j(V) >= r_j.
SubproblemEncoding encode_see_subproblem(
    const std::vector<FractionalSurrogate>& terms,
    const std::vector<QuadraticSurrogate>& secrecy, const SystemConfig& cfg);

// Initialization step: maximize the minimum QoS ratio tau subject to
// secrecy_j(V) >= r_j * tau and the power caps.  Users with r_j = 0 keep a
// plain secrecy_j(V) >= 0 row.  tau is capped (nonneg row) to keep the
// subproblem bounded; the loop stops once tau >= 1 anyway.
SubproblemEncoding encode_feasibility_ratio(
    const std::vector<QuadraticSurrogate>& secrecy, const SystemConfig& cfg,
    double tau_cap = 4.0);

// Leakage-capped energy-efficiency step: maximize sum_j of the throughput
// ratio minorants subject to power, coupling, throughput floors
// throughput_j(V) >= r_j and wiretap ceilings wiretap_j(V) <= eps.
SubproblemEncoding encode_ee_subproblem(
    const std::vector<QuadraticSurrogate>& throughput,
    const std::vector<QuadraticSurrogate>& wiretap,
    const BeamformerSet& anchor, double t_anchor, const SystemConfig& cfg);

// Margin form of the EE constraint set for initialization: maximize tau with
// throughput_j(V) >= r_j + tau and wiretap_j(V) <= eps - tau.
SubproblemEncoding encode_ee_feasibility(
    const std::vector<QuadraticSurrogate>& throughput,
    const std::vector<QuadraticSurrogate>& wiretap, const SystemConfig& cfg,
    double tau_cap = 4.0);

// Sum-secrecy step: maximize sum_j secrecy_j(V) subject to power caps and
// secrecy floors.
SubproblemEncoding encode_sum_secrecy_subproblem(
    const std::vector<QuadraticSurrogate>& secrecy, const SystemConfig& cfg);

}  // namespace secbeam
