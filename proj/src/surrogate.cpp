#include "secbeam/surrogate.hpp"

#include <cmath>
#include <limits>

#include "secbeam/errors.hpp"
#include "secbeam/linalg.hpp"
#include "secbeam/metrics.hpp"

namespace secbeam {

using Eigen::MatrixXcd;

double LogDetBounds::eval_lower(const MatrixXcd& X) const {
  const double lin = 2.0 * (lower_lin.conjugate().cwiseProduct(X)).sum().real();
  return lower_const + lin - (lower_factor * X).squaredNorm();
}

double LogDetBounds::eval_upper(const MatrixXcd& X) const {
  return upper_const + (upper_factor * X).squaredNorm();
}

LogDetBounds gaussian_logdet_bounds(const MatrixXcd& Xbar, double sigma2) {
  check_finite(Xbar, "gaussian_logdet_bounds");
  const int m = static_cast<int>(Xbar.rows());
  const MatrixXcd Q = Xbar * Xbar.adjoint();
  const MatrixXcd denom =
      sigma2 * MatrixXcd::Identity(m, m) + Q;  // sigma2 I + Xbar Xbar^H
  const MatrixXcd denom_inv = hpd_inverse(denom);

  LogDetBounds out;
  out.anchor_value = logdet_id_plus_scaled(Q, sigma2);

  // Lower bound: linear in X, minus a convex quadratic.
  out.lower_lin = Xbar / sigma2;
  const MatrixXcd B_low =
      MatrixXcd::Identity(m, m) / sigma2 - denom_inv;
  out.lower_factor = psd_factor(B_low);
  out.lower_const = out.anchor_value - Q.trace().real() / sigma2 -
                    (denom_inv * Q).trace().real();

  // Upper bound: constant plus a convex quadratic.
  // upper_factor^H upper_factor = (I + Q/sigma2)^-1 / sigma2 = denom_inv.
  out.upper_factor = psd_factor(denom_inv);
  out.upper_const =
      out.anchor_value + sigma2 * denom_inv.trace().real() - m;
  return out;
}

double QuadraticSurrogate::linear_value(const BeamformerSet& V) const {
  double acc = 0.0;
  for (std::size_t l = 0; l < lin.size(); ++l) {
    if (lin[l].size() == 0) continue;
    acc += 2.0 * (lin[l].conjugate().cwiseProduct(V.V[l])).sum().real();
  }
  return acc;
}

double QuadraticSurrogate::quad_value(const BeamformerSet& V) const {
  double acc = 0.0;
  for (const auto& piece : quad) acc += (piece.F * V.V[piece.user]).squaredNorm();
  return acc;
}

double QuadraticSurrogate::evaluate(const BeamformerSet& V) const {
  const double sign = (sense == Sense::kMinorant) ? -1.0 : 1.0;
  return a0 + linear_value(V) + sign * quad_value(V);
}

QuadraticSurrogate build_throughput_minorant(const ChannelSet& ch,
                                             const SystemConfig& cfg,
                                             const BeamformerSet& anchor,
                                             int j) {
  const double sigma2 = cfg.sigma2_u(j);
  const MatrixXcd L = ch.user(j, j) * anchor.V[j];        // desired link
  const MatrixXcd S = interference_noise_user(ch, anchor, cfg, j);
  const MatrixXcd S_inv = hpd_inverse(S);
  const MatrixXcd Q = L * L.adjoint();
  const MatrixXcd total_inv = hpd_inverse(S + Q);  // (M + sigma2 I)^-1

  QuadraticSurrogate out;
  out.sense = QuadraticSurrogate::Sense::kMinorant;
  out.anchor_value = logdet_id_plus_gram(L, S);

  // Linear term: 2 Re<S^-1 L, H_jj V_j> expressed in V_j coordinates.
  out.lin.assign(cfg.D, MatrixXcd());
  out.lin[j] = ch.user(j, j).adjoint() * (S_inv * L);

  // Quadratic term: <B, sum_l H_lj V_l V_l^H H_lj^H> with
  // B = S^-1 - (M + sigma2 I)^-1 (PSD by construction).
  const MatrixXcd B = S_inv - total_inv;
  const MatrixXcd F_B = psd_factor(B);
  for (int l = 0; l < cfg.D; ++l)
    out.quad.push_back({l, F_B * ch.user(l, j)});

  out.a0 = out.anchor_value - (S_inv * Q).trace().real() -
           sigma2 * B.trace().real();
  return out;
}

QuadraticSurrogate build_wiretap_majorant(const ChannelSet& ch,
                                          const SystemConfig& cfg,
                                          const BeamformerSet& anchor, int j) {
  const double sigma2 = cfg.sigma2_e();
  const int Ne = cfg.N_e;
  const MatrixXcd own = ch.eve(j) * anchor.V[j];
  const MatrixXcd psi = interference_eve(ch, anchor, cfg, j);
  const MatrixXcd total = psi + own * own.adjoint();

  QuadraticSurrogate out;
  out.sense = QuadraticSurrogate::Sense::kMajorant;
  out.anchor_value = logdet_id_plus_scaled(total, sigma2) -
                     logdet_id_plus_scaled(psi, sigma2);
  out.lin.assign(cfg.D, MatrixXcd());

  // Majorize ln det(I + (M_e)/sigma2) where M_e stacks every transmitter's
  // contribution at the eavesdropper: quadratic term <B1, M_e>/sigma2 with
  // B1 = (I + M_e(anchor)/sigma2)^-1.
  const MatrixXcd B1 =
      hpd_inverse(MatrixXcd::Identity(Ne, Ne) + total / sigma2);
  const MatrixXcd F1 = psd_factor(B1 / sigma2);
  for (int l = 0; l < cfg.D; ++l) out.quad.push_back({l, F1 * ch.eve(l)});

  // Minorize the subtracted term ln det(I + psi/sigma2): its linear part
  // enters negated, its quadratic part <B2, psi(V)> enters positively, with
  // B2 = sigma2^-1 I - (sigma2 I + psi(anchor))^-1.
  const MatrixXcd psi_denom_inv =
      hpd_inverse(sigma2 * MatrixXcd::Identity(Ne, Ne) + psi);
  const MatrixXcd B2 =
      MatrixXcd::Identity(Ne, Ne) / sigma2 - psi_denom_inv;
  const MatrixXcd F2 = psd_factor(B2);
  for (int l = 0; l < cfg.D; ++l) {
    if (l == j) continue;
    out.lin[l] = -(ch.eve(l).adjoint() * (ch.eve(l) * anchor.V[l])) / sigma2;
    out.quad.push_back({l, F2 * ch.eve(l)});
  }

  out.a0 = out.anchor_value + B1.trace().real() - Ne +
           psi.trace().real() / sigma2 + (psi_denom_inv * psi).trace().real();
  return out;
}

QuadraticSurrogate build_secrecy_minorant(const ChannelSet& ch,
                                          const SystemConfig& cfg,
                                          const BeamformerSet& anchor, int j) {
  const QuadraticSurrogate lo = build_throughput_minorant(ch, cfg, anchor, j);
  const QuadraticSurrogate hi = build_wiretap_majorant(ch, cfg, anchor, j);

  QuadraticSurrogate out;
  out.sense = QuadraticSurrogate::Sense::kMinorant;
  out.a0 = lo.a0 - hi.a0;
  out.anchor_value = lo.anchor_value - hi.anchor_value;
  out.lin.assign(cfg.D, MatrixXcd());
  for (int l = 0; l < cfg.D; ++l) {
    if (lo.lin[l].size() && hi.lin[l].size())
      out.lin[l] = lo.lin[l] - hi.lin[l];
    else if (lo.lin[l].size())
      out.lin[l] = lo.lin[l];
    else if (hi.lin[l].size())
      out.lin[l] = -hi.lin[l];
  }
  // Minorant quads subtract; the majorant's convex quads subtract as well
  // once the majorant itself is subtracted, so both lists merge unchanged.
  out.quad = lo.quad;
  out.quad.insert(out.quad.end(), hi.quad.begin(), hi.quad.end());
  return out;
}

double FractionalSurrogate::a_term(double t) const {
  if (a0 < 0.0) return a0 / t;
  if (a0 > 0.0) return a0 * (2.0 / t_anchor - t / (t_anchor * t_anchor));
  return 0.0;
}

double FractionalSurrogate::linear_value(const BeamformerSet& V) const {
  double acc = 0.0;
  for (std::size_t l = 0; l < lin.size(); ++l) {
    if (lin[l].size() == 0) continue;
    acc += 2.0 * (lin[l].conjugate().cwiseProduct(V.V[l])).sum().real();
  }
  return acc;
}

double FractionalSurrogate::quad_value(const BeamformerSet& V) const {
  double acc = 0.0;
  for (const auto& piece : quad) acc += (piece.F * V.V[piece.user]).squaredNorm();
  return acc;
}

double FractionalSurrogate::evaluate(const BeamformerSet& V, double t) const {
  const double x = linear_value(V);
  if (x < 0.0) return -std::numeric_limits<double>::infinity();
  return a_term(t) + 2.0 * b * std::sqrt(x) - b * b * t - quad_value(V) / t;
}

FractionalSurrogate build_fractional_minorant(const QuadraticSurrogate& secrecy,
                                              const BeamformerSet& anchor,
                                              double t_anchor) {
  if (secrecy.sense != QuadraticSurrogate::Sense::kMinorant)
    throw Error("build_fractional_minorant: needs a minorant");
  const double x_bar = secrecy.linear_value(anchor);
  if (x_bar <= 1e-12)
    throw DegenerateAnchor(
        "fractional minorant: linear part at the anchor is not positive");
  FractionalSurrogate out;
  out.a0 = secrecy.a0;
  out.t_anchor = t_anchor;
  out.b = std::sqrt(x_bar) / t_anchor;
  out.lin = secrecy.lin;
  out.quad = secrecy.quad;
  return out;
}

}  // namespace secbeam
