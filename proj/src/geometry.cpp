#include "prwave/geometry.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace prwave {

namespace {

constexpr int kPairIndex[4][4] = {{-1, 0, 1, 2},
                                  {-1, -1, 3, 4},
                                  {-1, -1, -1, 5},
                                  {-1, -1, -1, -1}};

inline int rop_at(int i, int j, int k, int m) {
  return (kPairIndex[i][j] * 4 + k) * 4 + m;
}

Jet3 det3(const Jet3& a00, const Jet3& a01, const Jet3& a02, const Jet3& a10,
          const Jet3& a11, const Jet3& a12, const Jet3& a20, const Jet3& a21,
          const Jet3& a22) {
  return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) +
         a02 * (a10 * a21 - a11 * a20);
}

// Inverse of a symmetric 4x4 jet matrix via the adjugate.
void invert4(const std::array<Jet3, 16>& g, std::array<Jet3, 16>& inv, Jet3& det) {
  std::array<Jet3, 16> cof;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      int rows[3], cols[3], ri = 0, ci = 0;
      for (int k = 0; k < 4; ++k) {
        if (k != r) rows[ri++] = k;
        if (k != c) cols[ci++] = k;
      }
      Jet3 minor = det3(g[rows[0] * 4 + cols[0]], g[rows[0] * 4 + cols[1]],
                        g[rows[0] * 4 + cols[2]], g[rows[1] * 4 + cols[0]],
                        g[rows[1] * 4 + cols[1]], g[rows[1] * 4 + cols[2]],
                        g[rows[2] * 4 + cols[0]], g[rows[2] * 4 + cols[1]],
                        g[rows[2] * 4 + cols[2]]);
      cof[r * 4 + c] = ((r + c) % 2 == 0) ? minor : -minor;
    }
  det = Jet3();
  for (int c = 0; c < 4; ++c) det += g[c] * cof[c];  // expansion along row 0
  if (std::abs(det.value()) < 1e-12)
    throw SingularMetricError("metric is singular (|det| < 1e-12)");
  // adj(A)^T / det; adjugate of a symmetric matrix is symmetric.
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) inv[r * 4 + c] = cof[c * 4 + r] / det;
}

}  // namespace

int sym_index(int i, int j) {
  static constexpr int table[4][4] = {
      {0, 1, 2, 3}, {1, 4, 5, 6}, {2, 5, 7, 8}, {3, 6, 8, 9}};
  return table[i][j];
}

MetricField MetricField::pr_wave(ScalarField F) {
  MetricField m;
  m.kind_ = Kind::PrWave;
  m.F_ = std::move(F);
  return m;
}

MetricField MetricField::general(const std::array<ScalarField, 10>& components) {
  MetricField m;
  m.kind_ = Kind::General;
  m.comps_ = components;
  return m;
}

MetricField prwave_metric(const ScalarField& F) { return MetricField::pr_wave(F); }

MetricField general_metric(const std::array<ScalarField, 10>& components) {
  return MetricField::general(components);
}

MetricField::Jets MetricField::eval(const Point& p) const {
  Jets out;
  if (kind_ == Kind::PrWave) {
    const Jet3 F = F_.eval(p);
    const Jet3 one = Jet3::constant(1.0);
    out.g[kAxisU * 4 + kAxisV] = one;
    out.g[kAxisV * 4 + kAxisU] = one;
    out.g[kAxisV * 4 + kAxisV] = F;
    out.g[kAxisX * 4 + kAxisX] = one;
    out.g[kAxisY * 4 + kAxisY] = one;
    out.det = -1.0;
    out.ginv[kAxisU * 4 + kAxisU] = -F;
    out.ginv[kAxisU * 4 + kAxisV] = one;
    out.ginv[kAxisV * 4 + kAxisU] = one;
    out.ginv[kAxisX * 4 + kAxisX] = one;
    out.ginv[kAxisY * 4 + kAxisY] = one;
    // Cross-check the closed form against a numeric inversion of the values.
    Eigen::Matrix4d gv;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) gv(i, j) = out.g[i * 4 + j].value();
    const Eigen::Matrix4d num_inv = gv.inverse();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (std::abs(num_inv(i, j) - out.ginv[i * 4 + j].value()) >
            1e-10 * (1.0 + std::abs(F.value())))
          throw SingularMetricError("pr-wave inverse cross-check failed");
    return out;
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      Jet3 c = comps_[sym_index(i, j)].valid() ? comps_[sym_index(i, j)].eval(p)
                                               : Jet3();
      out.g[i * 4 + j] = c;
      out.g[j * 4 + i] = c;
    }
  Jet3 det;
  invert4(out.g, out.ginv, det);
  out.det = det.value();
  return out;
}

Eigen::Matrix4d MetricField::value(const Point& p) const {
  Eigen::Matrix4d gv = Eigen::Matrix4d::Zero();
  if (kind_ == Kind::PrWave) {
    const double F = F_.value(p);
    gv(kAxisU, kAxisV) = gv(kAxisV, kAxisU) = 1.0;
    gv(kAxisV, kAxisV) = F;
    gv(kAxisX, kAxisX) = gv(kAxisY, kAxisY) = 1.0;
    return gv;
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const double c =
          comps_[sym_index(i, j)].valid() ? comps_[sym_index(i, j)].value(p) : 0.0;
      gv(i, j) = c;
      gv(j, i) = c;
    }
  return gv;
}

Jet3 CurvatureJets::curv_op(int m, int k, int i, int j) const {
  if (i == j) return Jet3();
  if (i < j) return rop[rop_at(i, j, k, m)];
  return -rop[rop_at(j, i, k, m)];
}

namespace {

std::array<Jet3, 64> christoffel_jets(const MetricField::Jets& m) {
  // dg[c][ij] = d g_{ij} / d x^c
  std::array<Jet3, 64> dg;
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        Jet3 d = derive(m.g[i * 4 + j], c);
        dg[c * 16 + i * 4 + j] = d;
        dg[c * 16 + j * 4 + i] = d;
      }

  // Gamma_{c,ij} = (dg[i][jc] + dg[j][ic] - dg[c][ij]) / 2
  std::array<Jet3, 64> low;
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        Jet3 t = (dg[i * 16 + j * 4 + c] + dg[j * 16 + i * 4 + c] -
                  dg[c * 16 + i * 4 + j]) *
                 0.5;
        low[c * 16 + i * 4 + j] = t;
        low[c * 16 + j * 4 + i] = t;
      }

  std::array<Jet3, 64> gamma;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        Jet3 sum;
        for (int c = 0; c < 4; ++c)
          sum += m.ginv[k * 4 + c] * low[c * 16 + i * 4 + j];
        gamma[k * 16 + i * 4 + j] = sum;
        gamma[k * 16 + j * 4 + i] = sum;
      }
  return gamma;
}

}  // namespace

CurvatureJets curvature_jets(const MetricField::Jets& m) {
  CurvatureJets cj;
  cj.g = m.g;
  cj.ginv = m.ginv;
  cj.gamma = christoffel_jets(m);

  // dgamma[a][k][ij]
  std::array<Jet3, 256> dgamma;
  for (int a = 0; a < 4; ++a)
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
          Jet3 d = derive(cj.gamma[k * 16 + i * 4 + j], a);
          dgamma[((a * 4 + k) * 4 + i) * 4 + j] = d;
          dgamma[((a * 4 + k) * 4 + j) * 4 + i] = d;
        }

  // R(e_i,e_j)e_k = [d_i Gamma^m_{jk} - d_j Gamma^m_{ik}
  //                 + Gamma^m_{in} Gamma^n_{jk} - Gamma^m_{jn} Gamma^n_{ik}] e_m
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int mm = 0; mm < 4; ++mm) {
          Jet3 r = dgamma[((i * 4 + mm) * 4 + j) * 4 + k] -
                   dgamma[((j * 4 + mm) * 4 + i) * 4 + k];
          for (int nn = 0; nn < 4; ++nn)
            r += cj.gamma[mm * 16 + i * 4 + nn] * cj.gamma[nn * 16 + j * 4 + k] -
                 cj.gamma[mm * 16 + j * 4 + nn] * cj.gamma[nn * 16 + i * 4 + k];
          cj.rop[rop_at(i, j, k, mm)] = r;
        }

  // rho_{jk} = sum_i [R(e_i,e_j)e_k]^i, then symmetrized.
  std::array<Jet3, 16> raw;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      Jet3 sum;
      for (int i = 0; i < 4; ++i) sum += cj.curv_op(i, k, i, j);
      raw[j * 4 + k] = sum;
    }
  for (int j = 0; j < 4; ++j)
    for (int k = j; k < 4; ++k) {
      Jet3 s = (raw[j * 4 + k] + raw[k * 4 + j]) * 0.5;
      cj.ricci[j * 4 + k] = s;
      cj.ricci[k * 4 + j] = s;
    }

  cj.tau = Jet3();
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) cj.tau += cj.ginv[j * 4 + k] * cj.ricci[j * 4 + k];

  return cj;
}

std::array<Jet3, 256> riemann_lowered_jets(const CurvatureJets& cj) {
  std::array<Jet3, 256> R;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          Jet3 sum;
          for (int mm = 0; mm < 4; ++mm)
            sum += cj.g[mm * 4 + l] * cj.rop[rop_at(i, j, k, mm)];
          // Sign: the lowered tensor matches 2 R_{xvvx} = F_{0,xx}.
          sum = -sum;
          R[((i * 4 + j) * 4 + k) * 4 + l] = sum;
          R[((j * 4 + i) * 4 + k) * 4 + l] = -sum;
        }
  return R;
}

CurvatureBundle curvature_from_jets(const CurvatureJets& cj, const Point& p) {
  CurvatureBundle b;
  b.point = p;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      b.g(i, j) = cj.g[i * 4 + j].value();
      b.ginv(i, j) = cj.ginv[i * 4 + j].value();
      b.ricci(i, j) = cj.ricci[i * 4 + j].value();
    }
  for (int e = 0; e < 64; ++e) b.gamma[e] = cj.gamma[e].value();
  const auto R = riemann_lowered_jets(cj);
  for (int e = 0; e < 256; ++e) b.riemann[e] = R[e].value();
  b.ricci_op = b.ginv * b.ricci;
  b.tau = cj.tau.value();

  for (int a = 0; a < 4; ++a)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double d = derive(cj.ricci[j * 4 + k], a).value();
        for (int mm = 0; mm < 4; ++mm)
          d -= b.christoffel(mm, a, j) * b.ricci(mm, k) +
               b.christoffel(mm, a, k) * b.ricci(j, mm);
        b.nabla_ricci[a * 16 + j * 4 + k] = d;
      }
  return b;
}

CurvatureBundle curvature_at(const MetricField& metric, const Point& p) {
  return curvature_from_jets(curvature_jets(metric.eval(p)), p);
}

double CurvatureBundle::riemann_norm() const {
  double s = 0;
  for (double r : riemann) s += r * r;
  return std::sqrt(s);
}

RicciImage ricci_operator_image(const CurvatureBundle& bundle, double rank_tol,
                                double isotropy_tol) {
  RicciImage img;
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(bundle.ricci_op, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_tol * (sv(0) + 1e-30);
  for (int i = 0; i < 4; ++i)
    if (sv(i) > cutoff) ++img.rank;
  img.basis = svd.matrixU();
  img.max_pairing = 0.0;
  for (int i = 0; i < img.rank; ++i)
    for (int j = 0; j < img.rank; ++j) {
      const double pairing =
          std::abs(img.basis.col(i).dot(bundle.g * img.basis.col(j)));
      img.max_pairing = std::max(img.max_pairing, pairing);
    }
  img.totally_isotropic = img.max_pairing < isotropy_tol;
  return img;
}

double codazzi_defect(const CurvatureBundle& bundle) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        worst = std::max(worst,
                         std::abs(bundle.dricci(i, j, k) - bundle.dricci(j, i, k)));
  return worst;
}

PrStructureReport check_pr_structure(const MetricField& metric, const Point& p,
                                     double tol) {
  const auto mj = metric.eval(p);
  const auto cj = curvature_jets(mj);
  const auto bundle = curvature_from_jets(cj, p);

  PrStructureReport rep;
  rep.v_lightlike = std::abs(bundle.g(kAxisU, kAxisU)) < tol;

  // nabla_{e_i} V has components Gamma^m_{i u}; proportionality to V = e_u
  // means every m != u component vanishes.
  rep.recurrence_residual = 0.0;
  for (int i = 0; i < 4; ++i) {
    rep.omega[i] = bundle.christoffel(kAxisU, i, kAxisU);
    for (int mm = 0; mm < 4; ++mm) {
      if (mm == kAxisU) continue;
      rep.recurrence_residual =
          std::max(rep.recurrence_residual, std::abs(bundle.christoffel(mm, i, kAxisU)));
    }
  }
  rep.parallel = rep.omega.cwiseAbs().maxCoeff() < tol;

  if (metric.is_pr_wave())
    rep.max_du_F = std::abs(derive(metric.pr_profile().eval(p), kAxisU).value());

  // V-perp is spanned by e_u, e_x, e_y for the pr-wave ansatz.
  constexpr int perp[3] = {kAxisU, kAxisX, kAxisY};
  rep.perp_curvature_residual = 0.0;
  for (int a : perp)
    for (int b : perp)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          rep.perp_curvature_residual =
              std::max(rep.perp_curvature_residual, std::abs(bundle.R(a, b, k, l)));
  return rep;
}

double recurrent_curvature_defect(const MetricField& metric, const Point& p) {
  const auto mj = metric.eval(p);
  const auto cj = curvature_jets(mj);
  const auto bundle = curvature_from_jets(cj, p);
  const auto RJ = riemann_lowered_jets(cj);

  double norm_R_sq = 0.0;
  for (int e = 0; e < 256; ++e) norm_R_sq += bundle.riemann[e] * bundle.riemann[e];
  if (std::sqrt(norm_R_sq) < 1e-12)
    throw ZeroCurvatureError("curvature vanishes; recurrence fit is undefined");

  std::array<std::array<double, 256>, 4> dR{};
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            const int e = ((i * 4 + j) * 4 + k) * 4 + l;
            double d = derive(RJ[e], a).value();
            for (int mm = 0; mm < 4; ++mm) {
              d -= bundle.christoffel(mm, a, i) * bundle.R(mm, j, k, l);
              d -= bundle.christoffel(mm, a, j) * bundle.R(i, mm, k, l);
              d -= bundle.christoffel(mm, a, k) * bundle.R(i, j, mm, l);
              d -= bundle.christoffel(mm, a, l) * bundle.R(i, j, k, mm);
            }
            dR[a][e] = d;
          }

  double norm_dR_sq = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int e = 0; e < 256; ++e) norm_dR_sq += dR[a][e] * dR[a][e];
  if (std::sqrt(norm_dR_sq) < 1e-10 * std::sqrt(norm_R_sq)) return 0.0;

  double residual_sq = 0.0;
  for (int a = 0; a < 4; ++a) {
    double dot = 0.0;
    for (int e = 0; e < 256; ++e) dot += dR[a][e] * bundle.riemann[e];
    const double sigma = dot / norm_R_sq;
    for (int e = 0; e < 256; ++e) {
      const double r = dR[a][e] - sigma * bundle.riemann[e];
      residual_sq += r * r;
    }
  }
  return std::sqrt(residual_sq / norm_dR_sq);
}

std::array<double, 64> christoffel_values(const MetricField& metric, const Point& p) {
  const auto gamma = christoffel_jets(metric.eval(p));
  std::array<double, 64> out;
  for (int e = 0; e < 64; ++e) out[e] = gamma[e].value();
  return out;
}

}  // namespace prwave
