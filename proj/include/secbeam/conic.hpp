#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace secbeam {

// Cone layout for the slack vector: `nonneg` leading rows constrained to the
// nonnegative orthant, followed by second-order-cone blocks of the listed
// sizes laid out contiguously (first row of each block is the cone "top").
struct ConeSpec {
  int nonneg = 0;
  std::vector<int> soc;

  int total_rows() const;
  // Barrier degree: one per nonnegative row, one per SOC block.
  int degree() const;
};

// Conic program in inequality form:
//
//   minimize    c'x
//   subject to  G x + s = h,   s in K.
//
// The dual is max -h'z s.t. G'z + c = 0, z in K.
struct ConicProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  ConeSpec cones;
};

enum class SolveStatus {
  kOptimal,
  kPrimalInfeasible,   // certificate z: G'z ~ 0, h'z < 0
  kDualInfeasible,     // certificate x: Gx + s ~ 0, c'x < 0 (primal unbounded)
  kMaxIters,
  kNumericalFailure,
};
const char* to_string(SolveStatus s);

struct SolverOptions {
  int max_iters = 100;
  double feastol = 1e-8;
  double abstol = 1e-9;   // absolute duality-gap threshold
  double reltol = 1e-8;   // relative duality-gap threshold
  bool verbose = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kNumericalFailure;
  Eigen::VectorXd x, s, z;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double gap = 0.0;
  double rel_gap = 0.0;
  double primal_residual = 0.0;  // relative equality-constraint residual
  double dual_residual = 0.0;
  int iterations = 0;
  std::string message;

  bool usable() const { return status == SolveStatus::kOptimal; }
};

// Primal-dual interior-point solve on the homogeneous self-dual embedding
// with Nesterov-Todd scaling and a Mehrotra predictor-corrector.  Fully
// deterministic: the same program yields bit-identical results.
SolveResult solve_conic(const ConicProgram& prog, const SolverOptions& opts = {});

// Serializes a program to JSON for offline debugging of failed solves.
void dump_program_json(const ConicProgram& prog, const std::string& path);

}  // namespace secbeam
