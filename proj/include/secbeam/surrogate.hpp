#pragma once

#include <vector>

#include <Eigen/Dense>

#include "secbeam/beamformer.hpp"
#include "secbeam/channel.hpp"
#include "secbeam/config.hpp"

namespace secbeam {

// Quadratic sandwich for f(X) = ln det(I_m + X X^H / sigma2) around an
// anchor Xbar:
//
//   lower(X) = lower_const + (2/sigma2) Re tr(Xbar^H X) - ||lower_factor X||_F^2
//   upper(X) = upper_const + ||upper_factor X||_F^2
//
// with lower_factor^H lower_factor = sigma2^-1 I - (sigma2 I + Xbar Xbar^H)^-1
// and upper_factor^H upper_factor = (I + Xbar Xbar^H / sigma2)^-1 / sigma2.
// Both touch f at Xbar and bound it globally (lower everywhere below, upper
// everywhere above).
struct LogDetBounds {
  double lower_const = 0.0;
  Eigen::MatrixXcd lower_lin;     // equals Xbar / sigma2
  Eigen::MatrixXcd lower_factor;  // rows may be fewer than m (rank pruning)
  double upper_const = 0.0;
  Eigen::MatrixXcd upper_factor;
  double anchor_value = 0.0;      // f(Xbar)

  double eval_lower(const Eigen::MatrixXcd& X) const;
  double eval_upper(const Eigen::MatrixXcd& X) const;
};
LogDetBounds gaussian_logdet_bounds(const Eigen::MatrixXcd& Xbar, double sigma2);

// One term ||F V_{user}||_F^2 of a quadratic form in the beamformers.
struct QuadPiece {
  int user = 0;
  Eigen::MatrixXcd F;  // p x N complex factor
};

// Surrogate of a rate function around an anchor beamformer set:
//
//   value(V) = a0 + sum_l 2 Re<lin[l], V_l> + sign * sum_k ||F_k V_{u_k}||^2
//
// where sign is -1 for a concave minorant and +1 for a convex majorant.
struct QuadraticSurrogate {
  enum class Sense { kMinorant, kMajorant };
  Sense sense = Sense::kMinorant;
  double a0 = 0.0;
  std::vector<Eigen::MatrixXcd> lin;  // one N x d_1 coefficient per user
  std::vector<QuadPiece> quad;
  double anchor_value = 0.0;  // exact rate at the anchor

  double linear_value(const BeamformerSet& V) const;
  double quad_value(const BeamformerSet& V) const;
  double evaluate(const BeamformerSet& V) const;
};

// Concave minorant of user j's throughput f_j (tight at the anchor).
QuadraticSurrogate build_throughput_minorant(const ChannelSet& ch,
                                             const SystemConfig& cfg,
                                             const BeamformerSet& anchor, int j);

// Convex majorant of the wiretap throughput f_{j,e} (tight at the anchor).
QuadraticSurrogate build_wiretap_majorant(const ChannelSet& ch,
                                          const SystemConfig& cfg,
                                          const BeamformerSet& anchor, int j);

// Concave minorant of the secrecy rate f_j - f_{j,e}: the throughput
// minorant minus the wiretap majorant, merged at coefficient level.
QuadraticSurrogate build_secrecy_minorant(const ChannelSet& ch,
                                          const SystemConfig& cfg,
                                          const BeamformerSet& anchor, int j);

// Concave minorant of the ratio secrecy_minorant(V) / t over the region
// where the minorant's linear part stays nonnegative and t > 0:
//
//   g(V, t) = a_term(t) + 2 b sqrt(linear(V)) - b^2 t - quad(V) / t
//
// with b = sqrt(linear at anchor) / t_anchor.  The constant a0 contributes
// a0/t when a0 <= 0 (kept exact, still concave) and its tangent
// a0 (2/t_anchor - t/t_anchor^2) when a0 > 0.
struct FractionalSurrogate {
  double a0 = 0.0;
  double b = 0.0;
  double t_anchor = 0.0;
  std::vector<Eigen::MatrixXcd> lin;  // linear(V) = sum_l 2 Re<lin[l], V_l>
  std::vector<QuadPiece> quad;        // quad(V) = sum_k ||F_k V||^2

  double a_term(double t) const;
  double linear_value(const BeamformerSet& V) const;
  double quad_value(const BeamformerSet& V) const;
  double evaluate(const BeamformerSet& V, double t) const;
};

// Builds the ratio minorant from a secrecy minorant anchored at `anchor`
// with power anchor t_anchor.  Throws DegenerateAnchor when the linear part
// at the anchor is <= 1e-12 (the square-root linearization has no slope).
FractionalSurrogate build_fractional_minorant(const QuadraticSurrogate& secrecy,
                                              const BeamformerSet& anchor,
                                              double t_anchor);

}  // namespace secbeam
