#include "nv0/optics.hpp"

#include <cmath>

#include "nv0/errors.hpp"
#include "nv0/hamiltonian.hpp"

namespace nv0 {

using cd = std::complex<double>;

namespace {

void require_unit(const Eigen::Vector3d& pol, const char* what) {
  if (!pol.allFinite() || std::abs(pol.norm() - 1.0) > 1e-9)
    throw InvalidArgument(std::string(what) + " polarization must be a unit vector");
}

void check_shapes(const DipoleSet& ds) {
  for (const auto& m : ds.d)
    if (m.rows() != ds.d[0].rows() || m.cols() != ds.d[0].cols())
      throw InvalidArgument("dipole matrices have inconsistent dimensions");
}

}  // namespace

Eigen::MatrixXcd DipoleSet::along(const Eigen::Vector3d& pol) const {
  return pol.x() * d[0] + pol.y() * d[1] + pol.z() * d[2];
}

DipoleSet dipole_set_nv0(const PhysicalConstants& consts) {
  const double g = consts.d_ge / std::sqrt(2.0);
  DipoleSet ds;
  ds.ground_basis = Basis::NV0Ground;
  ds.excited_basis = Basis::NV0Excited;
  for (auto& m : ds.d) m = Eigen::MatrixXcd::Zero(4, 2);
  ds.d[0].topRows(2) = g * Eigen::Matrix2cd::Identity();
  ds.d[1].bottomRows(2) = g * Eigen::Matrix2cd::Identity();
  return ds;
}

DipoleSet dipole_set_nvm() {
  DipoleSet ds;
  ds.ground_basis = Basis::NVmGround;
  ds.excited_basis = Basis::NVmExcited;
  for (auto& m : ds.d) m = Eigen::MatrixXcd::Zero(3, 6);
  ds.d[0].leftCols(3) = Eigen::Matrix3cd::Identity();
  ds.d[1].rightCols(3) = Eigen::Matrix3cd::Identity();
  return ds;
}

DipoleSet transform(const DipoleSet& ds, const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
  check_shapes(ds);
  if (u.cols() != ds.d[0].rows() || v.cols() != ds.d[0].cols())
    throw InvalidArgument("basis change does not match dipole dimensions");
  DipoleSet out = ds;
  out.ground_basis = Basis::Generic;
  out.excited_basis = Basis::Generic;
  for (auto& m : out.d) m = u * m * v.adjoint();
  return out;
}

ForcReport forc_condition(const DipoleSet& ds, double rel_tol) {
  check_shapes(ds);
  ForcReport r;
  double scale = 0.0;
  for (const auto& m : ds.d) scale = std::max(scale, (m * m.adjoint()).cwiseAbs().maxCoeff());
  const Eigen::Index n = ds.d[0].rows();
  for (int beta = 0; beta < 3; ++beta) {
    for (int alpha = 0; alpha < 3; ++alpha) {
      Eigen::MatrixXcd p = ds.d[beta] * ds.d[alpha].adjoint();
      r.a[beta][alpha] = p.trace() / static_cast<double>(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          if (i == j) {
            r.diag_spread = std::max(r.diag_spread, std::abs(p(i, i) - r.a[beta][alpha]));
          } else {
            r.max_offdiag = std::max(r.max_offdiag, std::abs(p(i, j)));
          }
        }
      }
    }
  }
  r.holds = std::max(r.max_offdiag, r.diag_spread) <= rel_tol * scale;
  return r;
}

RamanResult raman_coefficient(const EigenSystem& ground, const EigenSystem& excited, const DipoleSet& ds,
                              Eigen::Index initial, Eigen::Index final, const Eigen::Vector3d& pol_signal,
                              const Eigen::Vector3d& pol_control, double detuning) {
  check_shapes(ds);
  require_unit(pol_signal, "signal");
  require_unit(pol_control, "control");
  if (detuning == 0.0 || !std::isfinite(detuning)) throw InvalidArgument("detuning must be finite and nonzero");
  if (ground.vectors.rows() != ds.d[0].rows() || excited.vectors.rows() != ds.d[0].cols())
    throw InvalidArgument("eigensystems do not match dipole dimensions");
  if (initial < 0 || initial >= ground.size() || final < 0 || final >= ground.size())
    throw InvalidArgument("ground state index out of range");

  const Eigen::MatrixXcd db = ground.vectors.adjoint() * ds.along(pol_signal) * excited.vectors;
  const Eigen::MatrixXcd da = ground.vectors.adjoint() * ds.along(pol_control) * excited.vectors;
  const double mean = excited.values.mean();

  RamanResult r;
  r.detuning = detuning;
  r.initial = initial;
  r.final = final;
  cd lead = 0.0, corr = 0.0, exact = 0.0;
  for (Eigen::Index k = 0; k < excited.size(); ++k) {
    const double sk = excited.values(k) - mean;
    const cd term = db(final, k) * std::conj(da(initial, k));
    lead += term;
    corr += term * sk;
    exact += term / (detuning + sk);
  }
  r.r_times_delta = lead;
  r.r_corrected = lead / detuning - corr / (detuning * detuning);
  r.r_exact = exact;
  return r;
}

RamanResult raman_coupling(const EigenSystem& ground, const EigenSystem& excited, const DipoleSet& ds,
                           const Eigen::Vector3d& pol_signal, const Eigen::Vector3d& pol_control,
                           double detuning) {
  if (ground.basis != Basis::NV0Ground) throw InvalidArgument("raman_coupling expects an NV0 ground eigensystem");
  auto cl = ground.clusters();
  if (cl.size() < 2) throw DegenerateManifoldError("ground doublets are degenerate");
  const Eigen::Matrix4cd sz = spin_projection();
  auto spin = [&](Eigen::Index j) { return (ground.vectors.col(j).adjoint() * sz * ground.vectors.col(j))(0).real(); };
  const Eigen::Index i = cl[0].first;
  const double si = spin(i);
  Eigen::Index f = cl[1].first;
  for (Eigen::Index j = cl[1].first; j < cl[1].second; ++j)
    if (spin(j) * si > spin(f) * si) f = j;
  return raman_coefficient(ground, excited, ds, i, f, pol_signal, pol_control, detuning);
}

double absorption_probability(const Eigen::VectorXcd& psi, const DipoleSet& ds, const Eigen::Vector3d& pol) {
  return (psi.adjoint() * ds.along(pol)).squaredNorm();
}

double polarization_degree(const Eigen::VectorXcd& psi, const EigenSystem& excited, const DipoleSet& ds,
                           const Eigen::Vector3d& axis_a, const Eigen::Vector3d& axis_b) {
  check_shapes(ds);
  if (psi.size() != ds.d[0].rows()) throw InvalidArgument("state dimension does not match dipoles");
  if (std::abs(psi.norm() - 1.0) > 1e-9) throw InvalidArgument("state must be normalized");
  require_unit(axis_a, "axis a");
  require_unit(axis_b, "axis b");
  if (std::abs(axis_a.dot(axis_b)) > 1e-9) throw InvalidArgument("polarization axes must be orthogonal");
  // summing over a complete excited basis makes the result basis independent
  const Eigen::MatrixXcd& v = excited.vectors;
  const double pa = (psi.adjoint() * ds.along(axis_a) * v).squaredNorm();
  const double pb = (psi.adjoint() * ds.along(axis_b) * v).squaredNorm();
  if (pa + pb <= 1e-300) throw UndefinedPolarizationError("state does not absorb on either axis");
  return (pa - pb) / (pa + pb);
}

namespace {

OrientationNoise doublet_probabilities(const EigenSystem& ground, const DipoleSet& ds, const Eigen::Vector3d& pol) {
  auto cl = ground.clusters();
  if (cl.size() < 2) throw DegenerateManifoldError("ground doublets are degenerate; noise factor undefined");
  OrientationNoise o;
  for (Eigen::Index j = cl[0].first; j < cl[0].second; ++j)
    o.p_low += absorption_probability(ground.vectors.col(j), ds, pol);
  for (Eigen::Index j = cl[1].first; j < cl[1].second; ++j)
    o.p_high += absorption_probability(ground.vectors.col(j), ds, pol);
  o.splitting = ground.values(cl[1].first) - ground.values(cl[0].first);
  return o;
}

}  // namespace

NoiseFactor noise_suppression(const EigenSystem& ground, const DipoleSet& ds, const Eigen::Vector3d& control_pol) {
  require_unit(control_pol, "control");
  OrientationNoise o = doublet_probabilities(ground, ds, control_pol);
  if (o.p_high + o.p_low <= 1e-300) throw UndefinedPolarizationError("control polarization couples to no state");
  return {o.p(), {o}};
}

double noise_suppression_approx(double s, const DjtParams& djt, const PhysicalConstants& consts) {
  const double den = s - 2.0 * djt.upsilon_x();
  const double uy = djt.upsilon_y();
  return (consts.lambda_par * consts.lambda_par + 4.0 * uy * uy) / (4.0 * den * den);
}

NoiseFactor ensemble_noise(const Eigen::Vector3d& field_lab, std::span<const NvOrientation> orients,
                           const DjtParams& djt, const PhysicalConstants& consts,
                           const Eigen::Vector3d& control_pol_lab) {
  require_unit(control_pol_lab, "control");
  if (orients.empty()) throw InvalidArgument("no orientations given");
  const DipoleSet ds = dipole_set_nv0(consts);
  NoiseFactor nf;
  double hi = 0.0, total = 0.0;
  for (const auto& o : orients) {
    EigenSystem g = diagonalize_ground(build_ground(djt, lab_field_to_nv(field_lab, o), {}, consts));
    OrientationNoise on = doublet_probabilities(g, ds, lab_to_nv(control_pol_lab, o));
    on.label = o.label;
    hi += on.p_high;
    total += on.p_high + on.p_low;
    nf.per_orientation.push_back(on);
  }
  if (total <= 1e-300) throw UndefinedPolarizationError("control polarization couples to no state");
  nf.p = hi / total;
  return nf;
}

}  // namespace nv0
