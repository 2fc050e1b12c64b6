#pragma once

#include <vector>

#include <Eigen/Dense>

namespace secbeam {

// One transmit beamformer per transmitter: V[j] is N x d_1.
struct BeamformerSet {
  std::vector<Eigen::MatrixXcd> V;

  static BeamformerSet zeros(int D, int N, int d_1);

  int num_users() const { return static_cast<int>(V.size()); }
  double power(int j) const { return V[j].squaredNorm(); }
  double total_power() const;
};

// Real vectorization used by the convex subproblems and the finite-difference
// checks.  User j occupies a contiguous block of 2*N*d_1 entries at offset
// j*2*N*d_1; within the block, column c contributes [Re v_c; Im v_c].
Eigen::VectorXd pack_real(const BeamformerSet& V);
BeamformerSet unpack_real(const Eigen::VectorXd& x, int D, int N, int d_1);

}  // namespace secbeam
