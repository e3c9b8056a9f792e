#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nv0/eigensystem.hpp"
#include "nv0/model.hpp"

namespace nv0 {

// rows = ground states, columns = excited states, GHz um/V
struct DipoleSet {
  std::array<Eigen::MatrixXcd, 3> d;
  Basis ground_basis = Basis::Generic;
  Basis excited_basis = Basis::Generic;

  const Eigen::MatrixXcd& dx() const { return d[0]; }
  const Eigen::MatrixXcd& dy() const { return d[1]; }
  const Eigen::MatrixXcd& dz() const { return d[2]; }
  // sum_j pol_j D^j, pol in the NV frame
  Eigen::MatrixXcd along(const Eigen::Vector3d& pol) const;
};

DipoleSet dipole_set_nv0(const PhysicalConstants& consts);
DipoleSet dipole_set_nvm();
// D -> U D V^dagger
DipoleSet transform(const DipoleSet& ds, const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v);

struct ForcReport {
  bool holds = false;
  double max_offdiag = 0.0;
  double diag_spread = 0.0;
  std::array<std::array<std::complex<double>, 3>, 3> a{};  // a_{beta alpha}
};

ForcReport forc_condition(const DipoleSet& ds, double rel_tol = 1e-10);

struct RamanResult {
  std::complex<double> r_times_delta;  // leading numerator, GHz^2 um^2/V^2
  std::complex<double> r_corrected;    // with first varsigma correction, per GHz
  std::complex<double> r_exact;        // sum over k of .../Delta_k
  double detuning = 0.0;               // GHz from the mean excited level
  Eigen::Index initial = 0;
  Eigen::Index final = 0;
};

// R^{beta alpha}_{fi}: control (alpha) couples i, signal (beta) couples f.
RamanResult raman_coefficient(const EigenSystem& ground, const EigenSystem& excited, const DipoleSet& ds,
                              Eigen::Index initial, Eigen::Index final, const Eigen::Vector3d& pol_signal,
                              const Eigen::Vector3d& pol_control, double detuning);

// Between the lowest ground state and its same-spin partner in the next doublet.
RamanResult raman_coupling(const EigenSystem& ground, const EigenSystem& excited, const DipoleSet& ds,
                           const Eigen::Vector3d& pol_signal, const Eigen::Vector3d& pol_control,
                           double detuning);

double absorption_probability(const Eigen::VectorXcd& ground_state, const DipoleSet& ds,
                              const Eigen::Vector3d& pol);

double polarization_degree(const Eigen::VectorXcd& ground_state, const EigenSystem& excited, const DipoleSet& ds,
                           const Eigen::Vector3d& axis_a, const Eigen::Vector3d& axis_b);

struct OrientationNoise {
  std::string label;
  double p_high = 0.0;
  double p_low = 0.0;
  double splitting = 0.0;

  double p() const { return p_high / (p_high + p_low); }
};

struct NoiseFactor {
  double p = 0.0;
  std::vector<OrientationNoise> per_orientation;
};

NoiseFactor noise_suppression(const EigenSystem& ground, const DipoleSet& ds, const Eigen::Vector3d& control_pol);
double noise_suppression_approx(double s, const DjtParams& djt, const PhysicalConstants& consts);

// field and control polarization in the lab frame
NoiseFactor ensemble_noise(const Eigen::Vector3d& field_lab, std::span<const NvOrientation> orients,
                           const DjtParams& djt, const PhysicalConstants& consts,
                           const Eigen::Vector3d& control_pol_lab);

}  // namespace nv0
