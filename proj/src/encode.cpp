#include "secbeam/encode.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "secbeam/errors.hpp"

namespace secbeam {
namespace {

// Affine expression constant + sum coeff_i * x_i.
struct LinExpr {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;

  void add(int col, double coeff) {
    if (coeff != 0.0) terms.emplace_back(col, coeff);
  }
};

// Accumulates rows for G x + s = h.  Nonnegative rows are kept separate and
// emitted ahead of the SOC blocks in the final program.
class ProgramBuilder {
 public:
  explicit ProgramBuilder(int n) : n_(n) {}

  // s_row = expr >= 0.
  void nonneg(const LinExpr& e) { nn_rows_.push_back(e); }

  // ||body|| <= top.
  void soc(const LinExpr& top, std::vector<LinExpr> body) {
    soc_sizes_.push_back(static_cast<int>(body.size()) + 1);
    soc_rows_.push_back(top);
    for (auto& e : body) soc_rows_.push_back(std::move(e));
  }

  // sum of quadratic stacks <= u (affine): ||[w; (u-1)/2]|| <= (u+1)/2.
  void quad_le_affine(std::vector<LinExpr> body, const LinExpr& u) {
    LinExpr top = scale_shift(u, 0.5, 0.5);
    body.push_back(scale_shift(u, 0.5, -0.5));
    soc(top, std::move(body));
  }

  // sum of quadratic stacks <= a * b (both affine, nonneg at the optimum):
  // ||[w; (a-b)/2]|| <= (a+b)/2.
  void quad_le_product(std::vector<LinExpr> body, const LinExpr& a,
                       const LinExpr& b) {
    LinExpr top = combine(a, b, 0.5, 0.5);
    body.push_back(combine(a, b, 0.5, -0.5));
    soc(top, std::move(body));
  }

  ConicProgram finalize(Eigen::VectorXd c) const {
    ConicProgram prog;
    prog.c = std::move(c);
    const int rows =
        static_cast<int>(nn_rows_.size() + soc_rows_.size());
    prog.G = Eigen::MatrixXd::Zero(rows, n_);
    prog.h = Eigen::VectorXd::Zero(rows);
    int r = 0;
    auto emit = [&](const LinExpr& e) {
      prog.h(r) = e.constant;
      for (const auto& [col, coeff] : e.terms) prog.G(r, col) -= coeff;
      ++r;
    };
    for (const auto& e : nn_rows_) emit(e);
    for (const auto& e : soc_rows_) emit(e);
    prog.cones.nonneg = static_cast<int>(nn_rows_.size());
    prog.cones.soc = soc_sizes_;
    return prog;
  }

  static LinExpr scale_shift(const LinExpr& e, double scale, double shift) {
    LinExpr out;
    out.constant = scale * e.constant + shift;
    out.terms.reserve(e.terms.size());
    for (const auto& [col, coeff] : e.terms)
      out.terms.emplace_back(col, scale * coeff);
    return out;
  }

  static LinExpr combine(const LinExpr& a, const LinExpr& b, double fa,
                         double fb) {
    LinExpr out = scale_shift(a, fa, 0.0);
    out.constant += fb * b.constant;
    for (const auto& [col, coeff] : b.terms) out.add(col, fb * coeff);
    return out;
  }

 private:
  int n_;
  std::vector<LinExpr> nn_rows_;
  std::vector<LinExpr> soc_rows_;
  std::vector<int> soc_sizes_;
};

// Column index of Re/Im part of beamformer entry (user, row, col).
struct VarLayout {
  int N = 0, d_1 = 0;
  int user_base(int u) const { return u * 2 * N * d_1; }
  int re(int u, int i, int c) const { return user_base(u) + 2 * N * c + i; }
  int im(int u, int i, int c) const { return user_base(u) + 2 * N * c + N + i; }
};

// Real rows of one complex quadratic factor ||F V_u||_F^2.
void quad_piece_rows(const VarLayout& lay, const QuadPiece& piece,
                     std::vector<LinExpr>& body) {
  const int p = static_cast<int>(piece.F.rows());
  const int N = static_cast<int>(piece.F.cols());
  for (int c = 0; c < lay.d_1; ++c) {
    for (int r = 0; r < p; ++r) {
      LinExpr re_row, im_row;
      for (int i = 0; i < N; ++i) {
        const double fr = piece.F(r, i).real();
        const double fi = piece.F(r, i).imag();
        re_row.add(lay.re(piece.user, i, c), fr);
        re_row.add(lay.im(piece.user, i, c), -fi);
        im_row.add(lay.re(piece.user, i, c), fi);
        im_row.add(lay.im(piece.user, i, c), fr);
      }
      body.push_back(std::move(re_row));
      body.push_back(std::move(im_row));
    }
  }
}

std::vector<LinExpr> quad_rows(const VarLayout& lay,
                               const std::vector<QuadPiece>& quad) {
  std::vector<LinExpr> body;
  for (const auto& piece : quad) quad_piece_rows(lay, piece, body);
  return body;
}

// Linear part sum_l 2 Re<C_l, V_l> as a real affine expression.
LinExpr linear_expr(const VarLayout& lay,
                    const std::vector<Eigen::MatrixXcd>& lin, double scale) {
  LinExpr e;
  for (std::size_t u = 0; u < lin.size(); ++u) {
    const auto& C = lin[u];
    if (C.size() == 0) continue;
    for (int c = 0; c < lay.d_1; ++c) {
      for (int i = 0; i < static_cast<int>(C.rows()); ++i) {
        e.add(lay.re(static_cast<int>(u), i, c), scale * 2.0 * C(i, c).real());
        e.add(lay.im(static_cast<int>(u), i, c), scale * 2.0 * C(i, c).imag());
      }
    }
  }
  return e;
}

// ||V_j||^2 <= P_max for each transmitter.
void add_power_caps(ProgramBuilder& pb, const VarLayout& lay,
                    const SystemConfig& cfg) {
  const int nv = 2 * lay.N * lay.d_1;
  for (int j = 0; j < cfg.D; ++j) {
    LinExpr top;
    top.constant = std::sqrt(cfg.P_max);
    std::vector<LinExpr> body(nv);
    for (int k = 0; k < nv; ++k)
      body[k].add(lay.user_base(j) + k, 1.0);
    pb.soc(top, std::move(body));
  }
}

// zeta * sum_j ||V_j||^2 + P_c <= t.
void add_power_coupling(ProgramBuilder& pb, const VarLayout& lay,
                        const SystemConfig& cfg, int t_col) {
  const double root_zeta = std::sqrt(cfg.zeta);
  std::vector<LinExpr> body;
  const int nv_total = cfg.D * 2 * lay.N * lay.d_1;
  body.reserve(nv_total);
  for (int k = 0; k < nv_total; ++k) {
    LinExpr e;
    e.add(k, root_zeta);
    body.push_back(std::move(e));
  }
  LinExpr u;
  u.add(t_col, 1.0);
  u.constant = -cfg.P_c;
  pb.quad_le_affine(std::move(body), u);
}

}  // namespace

BeamformerSet SubproblemEncoding::extract(const Eigen::VectorXd& x) const {
  return unpack_real(x.head(D * 2 * N * d_1), D, N, d_1);
}

double SubproblemEncoding::scalar_of(const Eigen::VectorXd& x) const {
  return t_index >= 0 ? x(t_index) : 0.0;
}

double SubproblemEncoding::surrogate_value(const Eigen::VectorXd& x) const {
  return obj_constant - prog.c.dot(x);
}

SubproblemEncoding encode_see_subproblem(
    const std::vector<FractionalSurrogate>& terms,
    const std::vector<QuadraticSurrogate>& secrecy, const SystemConfig& cfg) {
  const int D = cfg.D;
  const VarLayout lay{cfg.N, cfg.d_1};
  const int nv = D * 2 * cfg.N * cfg.d_1;
  const int t_col = nv;

  // Auxiliary columns: per user a hypograph scalar y_j for the square-root
  // term, an epigraph scalar s_j for quad/t, and q_j for a0/t when a0 < 0.
  std::vector<int> y_col(D), s_col(D), q_col(D, -1);
  int next = nv + 1;
  for (int j = 0; j < D; ++j) y_col[j] = next++;
  for (int j = 0; j < D; ++j) s_col[j] = next++;
  for (int j = 0; j < D; ++j)
    if (terms[j].a0 < 0.0) q_col[j] = next++;
  const int n = next;

  SubproblemEncoding enc;
  enc.D = D;
  enc.N = cfg.N;
  enc.d_1 = cfg.d_1;
  enc.t_index = t_col;
  enc.n_core = nv + 1;
  enc.m_quadratic_groups = 2 * D + 1;

  Eigen::VectorXd cmax = Eigen::VectorXd::Zero(n);
  ProgramBuilder pb(n);

  for (int j = 0; j < D; ++j) {
    const FractionalSurrogate& g = terms[j];
    const double tb = g.t_anchor;

    cmax(y_col[j]) += 2.0 * g.b;
    cmax(t_col) -= g.b * g.b;
    cmax(s_col[j]) -= 1.0;
    if (g.a0 < 0.0) {
      cmax(q_col[j]) -= 1.0;
      // q_j * t >= |a0|.
      LinExpr q, t;
      q.add(q_col[j], 1.0);
      t.add(t_col, 1.0);
      std::vector<LinExpr> body(1);
      body[0].constant = std::sqrt(-g.a0);
      pb.quad_le_product(std::move(body), q, t);
    } else if (g.a0 > 0.0) {
      // Tangent of the convex a0/t at the anchor.
      enc.obj_constant += 2.0 * g.a0 / tb;
      cmax(t_col) -= g.a0 / (tb * tb);
    }

    // y_j^2 <= linear part of the secrecy minorant.
    {
      LinExpr A = linear_expr(lay, g.lin, 1.0);
      std::vector<LinExpr> body(1);
      body[0].add(y_col[j], 1.0);
      pb.quad_le_affine(std::move(body), A);
    }

    // quad part <= s_j * t.
    {
      LinExpr sjt, t;
      sjt.add(s_col[j], 1.0);
      t.add(t_col, 1.0);
      pb.quad_le_product(quad_rows(lay, g.quad), sjt, t);
    }

    // Secrecy floor: quad <= linear + a0 - r_j.
    {
      LinExpr u = linear_expr(lay, secrecy[j].lin, 1.0);
      u.constant += secrecy[j].a0 - cfg.r_nats[j];
      pb.quad_le_affine(quad_rows(lay, secrecy[j].quad), u);
    }
  }

  add_power_coupling(pb, lay, cfg, t_col);
  add_power_caps(pb, lay, cfg);

  enc.prog = pb.finalize(-cmax);
  return enc;
}

SubproblemEncoding encode_feasibility_ratio(
    const std::vector<QuadraticSurrogate>& secrecy, const SystemConfig& cfg,
    double tau_cap) {
  const int D = cfg.D;
  const VarLayout lay{cfg.N, cfg.d_1};
  const int nv = D * 2 * cfg.N * cfg.d_1;
  const int tau_col = nv;
  const int n = nv + 1;

  SubproblemEncoding enc;
  enc.D = D;
  enc.N = cfg.N;
  enc.d_1 = cfg.d_1;
  enc.t_index = tau_col;
  enc.n_core = n;
  enc.m_quadratic_groups = D;

  Eigen::VectorXd cmax = Eigen::VectorXd::Zero(n);
  cmax(tau_col) = 1.0;

  ProgramBuilder pb(n);
  LinExpr cap;
  cap.constant = tau_cap;
  cap.add(tau_col, -1.0);
  pb.nonneg(cap);

  for (int j = 0; j < D; ++j) {
    LinExpr u = linear_expr(lay, secrecy[j].lin, 1.0);
    u.constant += secrecy[j].a0;
    if (cfg.r_nats[j] > 0.0) u.add(tau_col, -cfg.r_nats[j]);
    pb.quad_le_affine(quad_rows(lay, secrecy[j].quad), u);
  }
  add_power_caps(pb, lay, cfg);

  enc.prog = pb.finalize(-cmax);
  return enc;
}

SubproblemEncoding encode_ee_subproblem(
    const std::vector<QuadraticSurrogate>& throughput,
    const std::vector<QuadraticSurrogate>& wiretap,
    const BeamformerSet& anchor, double t_anchor, const SystemConfig& cfg) {
  const int D = cfg.D;
  const VarLayout lay{cfg.N, cfg.d_1};
  const int nv = D * 2 * cfg.N * cfg.d_1;
  const int t_col = nv;

  std::vector<int> y_col(D), s_col(D), q_col(D, -1);
  int next = nv + 1;
  for (int j = 0; j < D; ++j) y_col[j] = next++;
  for (int j = 0; j < D; ++j) s_col[j] = next++;
  for (int j = 0; j < D; ++j)
    if (throughput[j].a0 < 0.0) q_col[j] = next++;
  const int n = next;

  SubproblemEncoding enc;
  enc.D = D;
  enc.N = cfg.N;
  enc.d_1 = cfg.d_1;
  enc.t_index = t_col;
  enc.n_core = nv + 1;
  enc.m_quadratic_groups = 2 * D + 1;

  Eigen::VectorXd cmax = Eigen::VectorXd::Zero(n);
  ProgramBuilder pb(n);

  for (int j = 0; j < D; ++j) {
    const QuadraticSurrogate& thr = throughput[j];

    // Half linear form x_j(V) = Re<A_j, H_jj V_j>; its anchor value feeds
    // the square-root linearization of 2 x_j / t.
    const double x_bar = 0.5 * thr.linear_value(anchor);
    if (x_bar <= 1e-12)
      throw DegenerateAnchor(
          "ee subproblem: throughput linear part vanished at the anchor");
    const double b = std::sqrt(x_bar) / t_anchor;
    const double c_coef = b * b;

    cmax(y_col[j]) += 4.0 * b;
    cmax(t_col) -= 2.0 * c_coef;
    cmax(s_col[j]) -= 1.0;
    if (thr.a0 < 0.0) {
      cmax(q_col[j]) -= 1.0;
      LinExpr q, t;
      q.add(q_col[j], 1.0);
      t.add(t_col, 1.0);
      std::vector<LinExpr> body(1);
      body[0].constant = std::sqrt(-thr.a0);
      pb.quad_le_product(std::move(body), q, t);
    } else if (thr.a0 > 0.0) {
      enc.obj_constant += 2.0 * thr.a0 / t_anchor;
      cmax(t_col) -= thr.a0 / (t_anchor * t_anchor);
    }

    // y_j^2 <= x_j(V).
    {
      LinExpr A = linear_expr(lay, thr.lin, 0.5);
      std::vector<LinExpr> body(1);
      body[0].add(y_col[j], 1.0);
      pb.quad_le_affine(std::move(body), A);
    }
    // quad part of the throughput minorant <= s_j * t.
    {
      LinExpr sj, t;
      sj.add(s_col[j], 1.0);
      t.add(t_col, 1.0);
      pb.quad_le_product(quad_rows(lay, thr.quad), sj, t);
    }
    // Throughput floor: quad <= linear + a0 - r_j.
    {
      LinExpr u = linear_expr(lay, thr.lin, 1.0);
      u.constant += thr.a0 - cfg.r_nats[j];
      pb.quad_le_affine(quad_rows(lay, thr.quad), u);
    }
    // Leakage ceiling via the wiretap majorant: quad <= eps - a0 - linear.
    if (std::isfinite(cfg.eps_secrecy_nats)) {
      LinExpr u = linear_expr(lay, wiretap[j].lin, -1.0);
      u.constant += cfg.eps_secrecy_nats - wiretap[j].a0;
      pb.quad_le_affine(quad_rows(lay, wiretap[j].quad), u);
    }
  }

  add_power_coupling(pb, lay, cfg, t_col);
  add_power_caps(pb, lay, cfg);

  enc.prog = pb.finalize(-cmax);
  return enc;
}

SubproblemEncoding encode_ee_feasibility(
    const std::vector<QuadraticSurrogate>& throughput,
    const std::vector<QuadraticSurrogate>& wiretap, const SystemConfig& cfg,
    double tau_cap) {
  const int D = cfg.D;
  const VarLayout lay{cfg.N, cfg.d_1};
  const int nv = D * 2 * cfg.N * cfg.d_1;
  const int tau_col = nv;
  const int n = nv + 1;

  SubproblemEncoding enc;
  enc.D = D;
  enc.N = cfg.N;
  enc.d_1 = cfg.d_1;
  enc.t_index = tau_col;
  enc.n_core = n;
  enc.m_quadratic_groups = D;

  Eigen::VectorXd cmax = Eigen::VectorXd::Zero(n);
  cmax(tau_col) = 1.0;

  ProgramBuilder pb(n);
  LinExpr cap;
  cap.constant = tau_cap;
  cap.add(tau_col, -1.0);
  pb.nonneg(cap);

  for (int j = 0; j < D; ++j) {
    {
      LinExpr u = linear_expr(lay, throughput[j].lin, 1.0);
      u.constant += throughput[j].a0 - cfg.r_nats[j];
      u.add(tau_col, -1.0);
      pb.quad_le_affine(quad_rows(lay, throughput[j].quad), u);
    }
    if (std::isfinite(cfg.eps_secrecy_nats)) {
      LinExpr u = linear_expr(lay, wiretap[j].lin, -1.0);
      u.constant += cfg.eps_secrecy_nats - wiretap[j].a0;
      u.add(tau_col, -1.0);
      pb.quad_le_affine(quad_rows(lay, wiretap[j].quad), u);
    }
  }
  add_power_caps(pb, lay, cfg);

  enc.prog = pb.finalize(-cmax);
  return enc;
}

SubproblemEncoding encode_sum_secrecy_subproblem(
    const std::vector<QuadraticSurrogate>& secrecy, const SystemConfig& cfg) {
  const int D = cfg.D;
  const VarLayout lay{cfg.N, cfg.d_1};
  const int nv = D * 2 * cfg.N * cfg.d_1;
  const int w_col = nv;
  const int n = nv + 1;

  SubproblemEncoding enc;
  enc.D = D;
  enc.N = cfg.N;
  enc.d_1 = cfg.d_1;
  enc.t_index = w_col;
  enc.n_core = n;
  enc.m_quadratic_groups = D + 1;

  Eigen::VectorXd cmax = Eigen::VectorXd::Zero(n);
  cmax(w_col) = -1.0;

  ProgramBuilder pb(n);
  std::vector<LinExpr> all_quads;
  for (int j = 0; j < D; ++j) {
    enc.obj_constant += secrecy[j].a0;
    const LinExpr A = linear_expr(lay, secrecy[j].lin, 1.0);
    for (const auto& [col, coeff] : A.terms) cmax(col) += coeff;

    auto rows = quad_rows(lay, secrecy[j].quad);
    all_quads.insert(all_quads.end(), rows.begin(), rows.end());

    LinExpr u = A;
    u.constant += secrecy[j].a0 - cfg.r_nats[j];
    pb.quad_le_affine(quad_rows(lay, secrecy[j].quad), u);
  }
  // sum_j quad_j(V) <= w.
  LinExpr w;
  w.add(w_col, 1.0);
  pb.quad_le_affine(std::move(all_quads), w);
  add_power_caps(pb, lay, cfg);

  enc.prog = pb.finalize(-cmax);
  return enc;
}

}  // namespace secbeam
