#pragma once

#include <array>
#include <optional>

#include <Eigen/Core>

#include "prwave/field.hpp"

namespace prwave {

/// Position of the symmetric pair (i,j) in the 10-entry upper-triangle
/// ordering uu,uv,ux,uy,vv,vx,vy,xx,xy,yy.
int sym_index(int i, int j);

/// Metric on the chart (u,v,x,y). The pr-wave kind evaluates
/// g = 2 du dv + F dv^2 + dx^2 + dy^2 exactly, with the closed-form inverse
/// g^{uu} = -F, g^{uv} = 1, g^{xx} = g^{yy} = 1; the general kind takes ten
/// component fields and inverts numerically.
class MetricField {
 public:
  enum class Kind { PrWave, General };

  struct Jets {
    std::array<Jet3, 16> g;     // g_{ij}, dense symmetric
    std::array<Jet3, 16> ginv;  // g^{ij}
    double det;
  };

  MetricField() = default;

  static MetricField pr_wave(ScalarField F);
  static MetricField general(const std::array<ScalarField, 10>& components);

  Kind kind() const { return kind_; }
  bool is_pr_wave() const { return kind_ == Kind::PrWave; }
  const ScalarField& pr_profile() const { return F_; }

  /// Throws SingularMetricError when |det g| < 1e-12 at p.
  Jets eval(const Point& p) const;
  Eigen::Matrix4d value(const Point& p) const;

 private:
  Kind kind_ = Kind::PrWave;
  ScalarField F_;
  std::array<ScalarField, 10> comps_;
};

/// Spec-facing constructor name for the pr-wave ansatz.
MetricField prwave_metric(const ScalarField& F);
MetricField general_metric(const std::array<ScalarField, 10>& components);

/// Curvature quantities carried as jets so downstream consumers can still
/// differentiate once (covariant derivatives of rho and G^h need it).
struct CurvatureJets {
  std::array<Jet3, 16> g, ginv;
  std::array<Jet3, 64> gamma;  // Gamma^k_{ij} at k*16 + i*4 + j
  // R(e_i,e_j)e_k output component m, stored for i<j at
  // ((pair(i,j)*4 + k)*4 + m); antisymmetric in (i,j).
  std::array<Jet3, 96> rop;
  std::array<Jet3, 16> ricci;  // rho_{jk}, symmetrized
  Jet3 tau;

  const Jet3& christoffel(int k, int i, int j) const { return gamma[k * 16 + i * 4 + j]; }
  Jet3 curv_op(int m, int k, int i, int j) const;  // handles antisymmetry
};

CurvatureJets curvature_jets(const MetricField::Jets& m);

/// Fully lowered curvature tensor R_{ijkl} as jets; sign fixed so that a
/// pr-wave satisfies 2 R_{xvvx} = d^2F/dx^2 for u-independent F.
std::array<Jet3, 256> riemann_lowered_jets(const CurvatureJets& cj);

struct CurvatureBundle {
  Point point;
  Eigen::Matrix4d g, ginv;
  std::array<double, 64> gamma;      // Gamma^k_{ij}
  std::array<double, 256> riemann;   // R_{ijkl}, fully lowered
  Eigen::Matrix4d ricci;             // rho_{jk}
  Eigen::Matrix4d ricci_op;          // rho^j_k
  double tau;
  std::array<double, 64> nabla_ricci;  // (nabla_a rho)_{jk} at a*16 + j*4 + k

  double christoffel(int k, int i, int j) const { return gamma[k * 16 + i * 4 + j]; }
  double R(int i, int j, int k, int l) const {
    return riemann[((i * 4 + j) * 4 + k) * 4 + l];
  }
  double dricci(int a, int j, int k) const { return nabla_ricci[a * 16 + j * 4 + k]; }
  double riemann_norm() const;
};

CurvatureBundle curvature_at(const MetricField& metric, const Point& p);
CurvatureBundle curvature_from_jets(const CurvatureJets& cj, const Point& p);

struct RicciImage {
  int rank = 0;
  // First `rank` columns span the image (unit vectors from the SVD).
  Eigen::Matrix4d basis = Eigen::Matrix4d::Zero();
  bool totally_isotropic = true;
  double max_pairing = 0.0;  // largest |g(w_i, w_j)| over the basis
};

/// Numerical column space of the Ricci operator. Singular values below
/// rank_tol * (sigma_max + 1e-30) are treated as zero.
RicciImage ricci_operator_image(const CurvatureBundle& bundle, double rank_tol = 1e-9,
                                double isotropy_tol = 1e-7);

/// max over index triples of |(nabla_i rho)_{jk} - (nabla_j rho)_{ik}|;
/// zero together with constant tau certifies harmonic curvature.
double codazzi_defect(const CurvatureBundle& bundle);

struct PrStructureReport {
  bool v_lightlike = false;        // g(V,V) = 0 for V = d/du
  Eigen::Vector4d omega;           // recurrence 1-form values per direction
  double recurrence_residual = 0;  // off-V part of nabla_i V, max norm
  bool parallel = false;           // omega = 0 at the point
  double max_du_F = 0;             // |dF/du| at the point (pr-wave kind)
  double perp_curvature_residual = 0;  // max |R| over V-perp x V-perp slots
};

PrStructureReport check_pr_structure(const MetricField& metric, const Point& p,
                                     double tol = 1e-10);

/// Least-squares residual of fitting nabla R = sigma (x) R over the four
/// coordinate directions, normalized by |nabla R|. Returns 0 when
/// |nabla R| < 1e-10 |R| (locally symmetric); throws ZeroCurvatureError when
/// |R| itself vanishes.
double recurrent_curvature_defect(const MetricField& metric, const Point& p);

/// Christoffel values only (geodesic right-hand sides).
std::array<double, 64> christoffel_values(const MetricField& metric, const Point& p);

}  // namespace prwave
