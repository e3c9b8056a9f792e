#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nv0 {

enum class Basis {
  Generic,
  NV0Ground,    // Ex up, Ex down, Ey up, Ey down
  NV0Excited,   // A1 up, A1 down
  NVmGround,    // A2 with ms = 0, +1, -1
  NVmExcited,   // Ex x {0,+1,-1}, Ey x {0,+1,-1}
};

std::string basis_name(Basis b);

inline constexpr double kDegeneracyTol = 1e-9;    // GHz
inline constexpr double kHermitianTol = 1e-9;     // GHz

struct EigenSystem {
  Eigen::VectorXd values;     // ascending
  Eigen::MatrixXcd vectors;   // columns
  Basis basis = Basis::Generic;
  double degeneracy_tol = kDegeneracyTol;

  Eigen::Index size() const { return values.size(); }
  // half-open index ranges of eigenvalue clusters within degeneracy_tol
  std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters() const;
};

double max_asymmetry(const Eigen::MatrixXcd& h);

// Cyclic complex Jacobi. Throws NonHermitianError.
EigenSystem diagonalize(const Eigen::MatrixXcd& h, Basis basis = Basis::Generic,
                        double hermitian_tol = kHermitianTol);

// Rotate each degenerate cluster onto eigenvectors of op (descending op
// eigenvalue), then fix phases.
void align_degenerate(EigenSystem& es, const Eigen::MatrixXcd& op);

// First component with |c| above threshold made real positive.
void fix_phases(Eigen::MatrixXcd& vectors);

}  // namespace nv0
