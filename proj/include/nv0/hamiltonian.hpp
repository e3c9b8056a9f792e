#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nv0/eigensystem.hpp"
#include "nv0/model.hpp"

namespace nv0 {

struct HamiltonianInputs {
  DjtParams djt;
  FieldNV field;
  StrainNV strain;
  PhysicalConstants consts;
};

// Basis {Ex up, Ex down, Ey up, Ey down}, mean ground energy zero.
struct GroundHamiltonian {
  Eigen::Matrix4cd matrix;
  HamiltonianInputs inputs;
};

// Basis {A1 up, A1 down}, proportional to identity.
struct ExcitedHamiltonian {
  Eigen::Matrix2cd matrix;
  HamiltonianInputs inputs;
};

struct AbcdCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  double root() const;  // sqrt(B^2 + C^2 + D^2)
};

enum class Spin { Up, Down };

GroundHamiltonian build_ground(const DjtParams& djt, const FieldNV& field, const StrainNV& strain,
                               const PhysicalConstants& consts);
ExcitedHamiltonian build_excited(const FieldNV& field, const StrainNV& strain, const PhysicalConstants& consts);
AbcdCoefficients abcd(const DjtParams& djt, const FieldNV& field, const StrainNV& strain,
                      const PhysicalConstants& consts);

// 2x2 block in basis {Ex_s, Ey_s}
Eigen::Matrix2cd spin_block(const GroundHamiltonian& h, Spin s);
Eigen::Matrix4cd spin_projection();  // Sz in ground basis, +1 for up

// Analytic per-spin diagonalization. Degenerate pairs ordered up, down.
EigenSystem diagonalize_ground(const GroundHamiltonian& h);
// Jacobi route with the same gauge, for cross-checks.
EigenSystem diagonalize_ground_jacobi(const GroundHamiltonian& h);
EigenSystem diagonalize_excited(const ExcitedHamiltonian& h);

double ground_splitting(const EigenSystem& ground);
// ground eigenvalues measured from the excited level (the A +- root form)
Eigen::Vector4d transition_frame_energies(const EigenSystem& ground, const ExcitedHamiltonian& excited);

struct FieldRange {
  double start = 0.0;
  double stop = 10.0;
  std::size_t points = 401;

  double at(std::size_t i) const;
  void validate() const;
};

struct LevelRow {
  double field;  // V/um
  double e_lower;
  double e_upper;
};

std::vector<LevelRow> level_sweep(const FieldRange& range, const Eigen::Vector3d& direction_lab,
                                  const NvOrientation& orient, const DjtParams& djt, const StrainNV& strain,
                                  const PhysicalConstants& consts);

// Field magnitude along direction_lab at which the gap reaches target_gap.
double field_for_splitting(double target_gap, const Eigen::Vector3d& direction_lab, const NvOrientation& orient,
                           const DjtParams& djt, const PhysicalConstants& consts);

}  // namespace nv0
