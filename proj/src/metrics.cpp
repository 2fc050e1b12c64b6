#include "secbeam/metrics.hpp"

#include <algorithm>

#include "secbeam/errors.hpp"
#include "secbeam/linalg.hpp"

namespace secbeam {

using Eigen::MatrixXcd;

namespace {

void check_shapes(const ChannelSet& ch, const BeamformerSet& V,
                  const SystemConfig& cfg) {
  if (ch.num_transmitters() != cfg.D || V.num_users() != cfg.D)
    throw DimensionMismatch("metrics: D mismatch between channels/beamformers");
  for (int j = 0; j < cfg.D; ++j) {
    if (V.V[j].rows() != cfg.N || V.V[j].cols() != cfg.d_1)
      throw DimensionMismatch("metrics: beamformer shape mismatch");
  }
}

}  // namespace

MatrixXcd interference_noise_user(const ChannelSet& ch, const BeamformerSet& V,
                                  const SystemConfig& cfg, int j) {
  MatrixXcd C = cfg.sigma2_u(j) * MatrixXcd::Identity(cfg.N_r, cfg.N_r);
  for (int l = 0; l < cfg.D; ++l) {
    if (l == j) continue;
    const MatrixXcd HV = ch.user(l, j) * V.V[l];
    C.noalias() += HV * HV.adjoint();
  }
  return C;
}

MatrixXcd interference_eve(const ChannelSet& ch, const BeamformerSet& V,
                           const SystemConfig& cfg, int j) {
  MatrixXcd C = MatrixXcd::Zero(cfg.N_e, cfg.N_e);
  for (int l = 0; l < cfg.D; ++l) {
    if (l == j) continue;
    const MatrixXcd HV = ch.eve(l) * V.V[l];
    C.noalias() += HV * HV.adjoint();
  }
  return C;
}

double user_throughput(const ChannelSet& ch, const BeamformerSet& V,
                       const SystemConfig& cfg, int j) {
  check_shapes(ch, V, cfg);
  const MatrixXcd L = ch.user(j, j) * V.V[j];
  return logdet_id_plus_gram(L, interference_noise_user(ch, V, cfg, j));
}

double eve_throughput(const ChannelSet& ch, const BeamformerSet& V,
                      const SystemConfig& cfg, int j) {
  check_shapes(ch, V, cfg);
  const MatrixXcd L = ch.eve(j) * V.V[j];
  MatrixXcd C = interference_eve(ch, V, cfg, j);
  C += cfg.sigma2_e() * MatrixXcd::Identity(cfg.N_e, cfg.N_e);
  return logdet_id_plus_gram(L, C);
}

double eve_throughput_split(const ChannelSet& ch, const BeamformerSet& V,
                            const SystemConfig& cfg, int j) {
  check_shapes(ch, V, cfg);
  const MatrixXcd own = ch.eve(j) * V.V[j];
  const MatrixXcd psi = interference_eve(ch, V, cfg, j);
  const MatrixXcd total = psi + own * own.adjoint();
  return logdet_id_plus_scaled(total, cfg.sigma2_e()) -
         logdet_id_plus_scaled(psi, cfg.sigma2_e());
}

double total_consumed_power(const BeamformerSet& V, const SystemConfig& cfg) {
  return cfg.zeta * V.total_power() + cfg.P_c;
}

double MetricsReport::see_bits() const { return nats_to_bits(see); }

MetricsReport evaluate_metrics(const ChannelSet& ch, const BeamformerSet& V,
                               const SystemConfig& cfg) {
  MetricsReport rep;
  rep.f.resize(cfg.D);
  rep.f_e.resize(cfg.D);
  rep.f_s.resize(cfg.D);
  for (int j = 0; j < cfg.D; ++j) {
    rep.f[j] = user_throughput(ch, V, cfg, j);
    rep.f_e[j] = eve_throughput(ch, V, cfg, j);
    rep.f_s[j] = rep.f[j] - rep.f_e[j];
    rep.sum_secrecy += std::max(rep.f_s[j], 0.0);
    rep.sum_throughput += rep.f[j];
  }
  rep.power = total_consumed_power(V, cfg);
  rep.see = rep.sum_secrecy / rep.power;
  rep.ee = rep.sum_throughput / rep.power;
  return rep;
}

double see_objective(const ChannelSet& ch, const BeamformerSet& V,
                     const SystemConfig& cfg) {
  return evaluate_metrics(ch, V, cfg).see;
}

FeasibilityReport check_feasible(const ChannelSet& ch, const BeamformerSet& V,
                                 const SystemConfig& cfg, double tol) {
  FeasibilityReport rep;
  rep.power_ok = true;
  rep.qos_ok = true;
  rep.power_slack.resize(cfg.D);
  rep.qos_slack.resize(cfg.D);
  for (int j = 0; j < cfg.D; ++j) {
    rep.power_slack[j] = cfg.P_max - V.power(j);
    if (rep.power_slack[j] < -tol) rep.power_ok = false;
    const double fs = user_throughput(ch, V, cfg, j) -
                      eve_throughput(ch, V, cfg, j);
    rep.qos_slack[j] = fs - cfg.r_nats[j];
    if (rep.qos_slack[j] < -tol) rep.qos_ok = false;
  }
  return rep;
}

}  // namespace secbeam
