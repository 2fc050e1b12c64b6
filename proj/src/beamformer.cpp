#include "secbeam/beamformer.hpp"

#include "secbeam/errors.hpp"

namespace secbeam {

BeamformerSet BeamformerSet::zeros(int D, int N, int d_1) {
  BeamformerSet out;
  out.V.assign(D, Eigen::MatrixXcd::Zero(N, d_1));
  return out;
}

double BeamformerSet::total_power() const {
  double p = 0.0;
  for (const auto& v : V) p += v.squaredNorm();
  return p;
}

Eigen::VectorXd pack_real(const BeamformerSet& V) {
  const int D = V.num_users();
  if (D == 0) return {};
  const int N = static_cast<int>(V.V[0].rows());
  const int d_1 = static_cast<int>(V.V[0].cols());
  Eigen::VectorXd x(2 * N * d_1 * D);
  for (int j = 0; j < D; ++j) {
    const int base = j * 2 * N * d_1;
    for (int c = 0; c < d_1; ++c) {
      x.segment(base + c * 2 * N, N) = V.V[j].col(c).real();
      x.segment(base + c * 2 * N + N, N) = V.V[j].col(c).imag();
    }
  }
  return x;
}

BeamformerSet unpack_real(const Eigen::VectorXd& x, int D, int N, int d_1) {
  if (x.size() != 2 * N * d_1 * D)
    throw DimensionMismatch("unpack_real: vector length does not match D*N*d_1");
  BeamformerSet out = BeamformerSet::zeros(D, N, d_1);
  for (int j = 0; j < D; ++j) {
    const int base = j * 2 * N * d_1;
    for (int c = 0; c < d_1; ++c) {
      out.V[j].col(c).real() = x.segment(base + c * 2 * N, N);
      out.V[j].col(c).imag() = x.segment(base + c * 2 * N + N, N);
    }
  }
  return out;
}

}  // namespace secbeam
