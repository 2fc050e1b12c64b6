#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "secbeam/channel.hpp"
#include "secbeam/errors.hpp"
#include "secbeam/metrics.hpp"
#include "secbeam/rng.hpp"

using namespace secbeam;
using Eigen::MatrixXcd;

namespace {

SystemConfig tiny_cfg() {
  SystemConfig cfg;
  cfg.D = 2;
  cfg.N = 4;
  cfg.N_r = 3;
  cfg.N_e = 2;
  cfg.d_1 = 2;
  cfg.sigma_u.assign(cfg.D, 1.0);
  cfg.sigma_e = 1.0;
  cfg.r_nats.assign(cfg.D, 0.5);
  cfg.zeta = 2.0;
  cfg.P_c = 3.0;
  cfg.P_max = 5.0;
  return cfg;
}

BeamformerSet random_V(const SystemConfig& cfg, std::uint64_t stream) {
  NormalStream rng(77, stream);
  BeamformerSet V = BeamformerSet::zeros(cfg.D, cfg.N, cfg.d_1);
  for (auto& Vj : V.V)
    for (int c = 0; c < Vj.cols(); ++c)
      for (int r = 0; r < Vj.rows(); ++r) Vj(r, c) = rng.next_complex();
  return V;
}

// Raw-determinant oracle for ln det(I + L L^H C^{-1}).
double naive_rate(const MatrixXcd& L, const MatrixXcd& C) {
  const int m = static_cast<int>(L.rows());
  const std::complex<double> d =
      (MatrixXcd::Identity(m, m) + L * L.adjoint() * C.inverse())
          .determinant();
  return std::log(d.real());
}

}  // namespace

TEST_CASE("throughputs match the raw determinant oracle") {
  const SystemConfig cfg = tiny_cfg();
  const ChannelSet ch = generate_channels(cfg, 3);
  const BeamformerSet V = random_V(cfg, 0);

  for (int j = 0; j < cfg.D; ++j) {
    const double f = user_throughput(ch, V, cfg, j);
    const double f_ref = naive_rate(ch.user(j, j) * V.V[j],
                                    interference_noise_user(ch, V, cfg, j));
    CHECK(f == doctest::Approx(f_ref).epsilon(1e-10));

    MatrixXcd C = interference_eve(ch, V, cfg, j);
    C += cfg.sigma2_e() * MatrixXcd::Identity(cfg.N_e, cfg.N_e);
    const double fe = eve_throughput(ch, V, cfg, j);
    CHECK(fe == doctest::Approx(naive_rate(ch.eve(j) * V.V[j], C))
                    .epsilon(1e-10));
  }
}

TEST_CASE("the two wiretap evaluation paths agree") {
  const SystemConfig cfg = tiny_cfg();
  const ChannelSet ch = generate_channels(cfg, 9);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const BeamformerSet V = random_V(cfg, s);
    for (int j = 0; j < cfg.D; ++j) {
      const double direct = eve_throughput(ch, V, cfg, j);
      const double split = eve_throughput_split(ch, V, cfg, j);
      CHECK(direct == doctest::Approx(split).epsilon(1e-10));
    }
  }
}

TEST_CASE("consumed power follows the amplifier model") {
  const SystemConfig cfg = tiny_cfg();
  const BeamformerSet V = random_V(cfg, 4);
  CHECK(total_consumed_power(V, cfg) ==
        doctest::Approx(cfg.zeta * V.total_power() + cfg.P_c));
  const BeamformerSet Z = BeamformerSet::zeros(cfg.D, cfg.N, cfg.d_1);
  CHECK(total_consumed_power(Z, cfg) == doctest::Approx(cfg.P_c));
}

TEST_CASE("report aggregates are consistent and clamp leakage") {
  const SystemConfig cfg = tiny_cfg();
  const ChannelSet ch = generate_channels(cfg, 21);
  const BeamformerSet V = random_V(cfg, 2);
  const MetricsReport rep = evaluate_metrics(ch, V, cfg);

  double sum_pos = 0.0, sum_f = 0.0;
  for (int j = 0; j < cfg.D; ++j) {
    CHECK(rep.f_s[j] == doctest::Approx(rep.f[j] - rep.f_e[j]));
    sum_pos += std::max(rep.f_s[j], 0.0);
    sum_f += rep.f[j];
  }
  CHECK(rep.sum_secrecy == doctest::Approx(sum_pos));
  CHECK(rep.see == doctest::Approx(rep.sum_secrecy / rep.power));
  CHECK(rep.ee == doctest::Approx(sum_f / rep.power));
  CHECK(see_objective(ch, V, cfg) == doctest::Approx(rep.see));
}

TEST_CASE("negative secrecy rates do not pull the objective below zero") {
  SystemConfig cfg = tiny_cfg();
  cfg.D = 1;
  cfg.sigma_u.assign(1, 1.0);
  cfg.r_nats.assign(1, 0.0);
  // Hand-built channels: the eavesdropper hears 3x stronger than the user.
  ChannelSet ch;
  ch.user_links = {{MatrixXcd::Identity(cfg.N_r, cfg.N).eval()}};
  ch.eve_links = {3.0 * MatrixXcd::Identity(cfg.N_e, cfg.N)};
  BeamformerSet V = BeamformerSet::zeros(1, cfg.N, cfg.d_1);
  V.V[0](0, 0) = 1.0;
  V.V[0](1, 1) = 1.0;

  const MetricsReport rep = evaluate_metrics(ch, V, cfg);
  CHECK(rep.f_s[0] < 0.0);          // leaky instance by construction
  CHECK(rep.sum_secrecy == 0.0);    // clamped at zero
  CHECK(rep.see == 0.0);
}

TEST_CASE("feasibility slacks carry sign information") {
  const SystemConfig cfg = tiny_cfg();
  const ChannelSet ch = generate_channels(cfg, 30);

  const BeamformerSet Z = BeamformerSet::zeros(cfg.D, cfg.N, cfg.d_1);
  const FeasibilityReport rep = check_feasible(ch, Z, cfg);
  for (int j = 0; j < cfg.D; ++j) {
    CHECK(rep.power_slack[j] == doctest::Approx(cfg.P_max));
    CHECK(rep.qos_slack[j] == doctest::Approx(-cfg.r_nats[j]));
  }
  CHECK(rep.power_ok);
  CHECK(!rep.qos_ok);  // zero beamformers meet no positive rate floor
  CHECK(!rep.ok());
}

TEST_CASE("shape mismatches are rejected") {
  const SystemConfig cfg = tiny_cfg();
  const ChannelSet ch = generate_channels(cfg, 1);
  BeamformerSet bad = BeamformerSet::zeros(cfg.D, cfg.N + 1, cfg.d_1);
  CHECK_THROWS_AS(evaluate_metrics(ch, bad, cfg), DimensionMismatch);
  BeamformerSet bad2 = BeamformerSet::zeros(cfg.D + 1, cfg.N, cfg.d_1);
  CHECK_THROWS_AS(user_throughput(ch, bad2, cfg, 0), DimensionMismatch);
}
