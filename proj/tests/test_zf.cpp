#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "secbeam/channel.hpp"
#include "secbeam/metrics.hpp"
#include "secbeam/zf.hpp"

using namespace secbeam;
using Eigen::MatrixXcd;
using Eigen::VectorXd;

namespace {

SystemConfig stock_cfg(int d_1) {
  SystemConfig cfg;
  cfg.D = 3;
  cfg.N = 12;
  cfg.N_r = 6;
  cfg.N_e = 9;
  cfg.d_1 = d_1;
  cfg.sigma_u.assign(cfg.D, 1.0);
  cfg.sigma_e = 1.0;
  cfg.r_nats.assign(cfg.D, bits_to_nats(1.0));
  cfg.zeta = 1.0;
  cfg.P_c = db_to_watts(7.0);
  cfg.P_max = db_to_watts(10.0);
  return cfg;
}

// Dimensions small enough that the per-instance nulling subspace exists.
SystemConfig nullable_cfg() {
  SystemConfig cfg = stock_cfg(1);
  cfg.D = 2;
  cfg.N = 6;
  cfg.N_r = 2;
  cfg.N_e = 2;
  cfg.d_1 = 1;
  cfg.sigma_u.assign(cfg.D, 1.0);
  cfg.r_nats.assign(cfg.D, 0.0);
  return cfg;
}

}  // namespace

TEST_CASE("dimension counting separates feasible stream counts") {
  // d_1 = 3: 12 >= 9 + 3 and 3*(12+6-9-6) = 9 >= 2*3 = 6.
  CHECK(check_zf_feasibility(stock_cfg(3)).feasible());
  // d_1 = 4 fails the antenna-count room: 12 < 9 + 4.
  const ZfFeasibility f4 = check_zf_feasibility(stock_cfg(4));
  CHECK(!f4.eve_room);
  CHECK(!f4.feasible());
  // Degenerate stream count passes trivially.
  SystemConfig cfg0 = stock_cfg(3);
  cfg0.d_1 = 0;
  CHECK(check_zf_feasibility(cfg0).feasible());
}

TEST_CASE("water-filling matches the scalar stationarity oracle") {
  // Effective gains diag(2,1)^2 with price a = 0.1 and a loose cap: the
  // per-mode condition g/(1 + g p) = a gives p_i = 1/a - 1/g_i.
  VectorXd gains(2);
  gains << 4.0, 1.0;
  const WaterFillResult wf = water_fill(gains, 0.1, 1e6);
  REQUIRE(wf.p.size() == 2);
  CHECK(wf.p(0) == doctest::Approx(10.0 - 0.25).epsilon(1e-10));
  CHECK(wf.p(1) == doctest::Approx(10.0 - 1.0).epsilon(1e-10));
  CHECK(wf.mu == 0.0);
  for (int i = 0; i < 2; ++i) {
    const double marginal = gains(i) / (1.0 + gains(i) * wf.p(i));
    CHECK(std::abs(marginal - 0.1) < 1e-8);
  }
}

TEST_CASE("water-filling honors the cap through the multiplier") {
  VectorXd gains(3);
  gains << 5.0, 2.0, 0.5;
  const double cap = 1.5;
  const WaterFillResult wf = water_fill(gains, 0.2, cap);
  CHECK(wf.p.sum() == doctest::Approx(cap).epsilon(1e-9));
  CHECK(wf.mu > 0.0);
  for (int i = 0; i < 3; ++i) {
    if (wf.p(i) > 1e-12) {
      // Active modes share the same marginal value a + mu.
      const double marginal = gains(i) / (1.0 + gains(i) * wf.p(i));
      CHECK(std::abs(marginal - (0.2 + wf.mu)) < 1e-8);
    } else {
      // Inactive modes cannot pay the price.
      CHECK(gains(i) <= 0.2 + wf.mu + 1e-9);
    }
  }
}

TEST_CASE("water-filling handles edge cases") {
  VectorXd gains(2);
  gains << 1.0, 0.5;
  // Zero cap or empty gains allocate nothing.
  CHECK(water_fill(gains, 0.1, 0.0).p.sum() == 0.0);
  CHECK(water_fill(VectorXd(), 0.1, 1.0).p.size() == 0);
  // A price above every gain allocates nothing even with budget.
  CHECK(water_fill(gains, 2.0, 10.0).p.sum() == doctest::Approx(0.0));
}

TEST_CASE("nulling design cancels the eavesdropper exactly") {
  const SystemConfig cfg = nullable_cfg();
  const ChannelSet ch = generate_channels(cfg, 4);
  const ZfDesign design = design_zf_subspaces(ch, cfg);
  REQUIRE(design.ok);
  for (int j = 0; j < cfg.D; ++j) {
    REQUIRE(design.T[j].cols() >= cfg.d_1);
    CHECK((ch.eve(j) * design.T[j]).norm() < 1e-10 * design.T[j].norm());
    // Orthonormal basis columns.
    const MatrixXcd gram =
        design.T[j].adjoint() * design.T[j];
    CHECK((gram - MatrixXcd::Identity(gram.rows(), gram.cols())).norm() <
          1e-12);
  }
}

TEST_CASE("baseline run nulls leakage and reports its efficiency") {
  const SystemConfig cfg = nullable_cfg();
  const ChannelSet ch = generate_channels(cfg, 6);
  const RunOutcome out = run_zf(ch, cfg, {});
  REQUIRE(out.reason == TerminationReason::kConverged);

  // Wiretap rates vanish under exact nulling.
  for (int j = 0; j < cfg.D; ++j)
    CHECK(eve_throughput(ch, out.V, cfg, j) <= 1e-12);
  for (int j = 0; j < cfg.D; ++j)
    CHECK(out.V.power(j) <= cfg.P_max + 1e-9);
  CHECK(out.see_nats >= 0.0);

  // Dinkelbach transform residual vanishes and the parameter climbs.
  CHECK(std::abs(out.trace.back().surrogate_objective) <= 1e-8);
  double prev = -1.0;
  for (const IterateRecord& rec : out.trace) {
    CHECK(rec.objective >= prev);  // lambda non-decreasing
    prev = rec.objective;
  }
}

TEST_CASE("stock dimensions are flagged at the right layer") {
  // d_1 = 4: the dimension count itself rules the design out.
  {
    const RunOutcome out = run_zf(generate_channels(stock_cfg(4), 0),
                                  stock_cfg(4), {});
    CHECK(out.reason == TerminationReason::kInfeasible);
    CHECK(out.note.find("dimension counting") != std::string::npos);
    CHECK(out.see_nats == 0.0);
  }
  // d_1 = 3: counting passes, but the stacked protected rows exceed the
  // antenna count (9 + 2*3 = 15 > 12), so instances report the subspace
  // shortfall distinctly.
  {
    const SystemConfig cfg = stock_cfg(3);
    const ZfDesign design = design_zf_subspaces(generate_channels(cfg, 1), cfg);
    CHECK(!design.ok);
    for (int dim : design.null_dims) CHECK(dim < cfg.d_1);
    const RunOutcome out = run_zf(generate_channels(cfg, 1), cfg, {});
    CHECK(out.reason == TerminationReason::kInfeasible);
    CHECK(out.note.find("subspace") != std::string::npos);
  }
}
