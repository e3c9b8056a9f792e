#include "nv0/hamiltonian.hpp"

#include <cmath>
#include <complex>

#include "nv0/errors.hpp"

namespace nv0 {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

double AbcdCoefficients::root() const { return std::sqrt(b * b + c * c + d * d); }

namespace {

double excited_level(const FieldNV& field, const StrainNV& strain, const PhysicalConstants& k) {
  return k.eps_es_ghz() - k.d_par * field.fz +
         (k.eps_A1 * strain.e_A1() + k.eps_A1_prime * strain.e_A1_prime()) * kGhzPerThz;
}

}  // namespace

AbcdCoefficients abcd(const DjtParams& djt, const FieldNV& field, const StrainNV& strain,
                      const PhysicalConstants& k) {
  AbcdCoefficients r;
  r.a = -excited_level(field, strain, k);
  r.b = djt.upsilon_x() - k.d_perp * field.fx +
        (k.eps_E * strain.e_Ex() + k.eps_E_prime * strain.e_Ex_prime()) * kGhzPerThz;
  r.c = djt.upsilon_y() + k.d_perp * field.fy +
        (k.eps_E * strain.e_Ey() - k.eps_E_prime * strain.e_Ey_prime()) * kGhzPerThz;
  r.d = k.lambda_par / 2.0;
  return r;
}

GroundHamiltonian build_ground(const DjtParams& djt, const FieldNV& field, const StrainNV& strain,
                               const PhysicalConstants& consts) {
  const AbcdCoefficients q = abcd(djt, field, strain, consts);
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  h(0, 0) = q.b;
  h(1, 1) = q.b;
  h(2, 2) = -q.b;
  h(3, 3) = -q.b;
  h(0, 2) = q.c - I * q.d;
  h(2, 0) = q.c + I * q.d;
  h(1, 3) = q.c + I * q.d;
  h(3, 1) = q.c - I * q.d;
  return {h, {djt, field, strain, consts}};
}

ExcitedHamiltonian build_excited(const FieldNV& field, const StrainNV& strain, const PhysicalConstants& consts) {
  Eigen::Matrix2cd h = excited_level(field, strain, consts) * Eigen::Matrix2cd::Identity();
  return {h, {DjtParams{}, field, strain, consts}};
}

Eigen::Matrix2cd spin_block(const GroundHamiltonian& h, Spin s) {
  const int i = (s == Spin::Up) ? 0 : 1;
  Eigen::Matrix2cd b;
  b << h.matrix(i, i), h.matrix(i, i + 2),
       h.matrix(i + 2, i), h.matrix(i + 2, i + 2);
  return b;
}

Eigen::Matrix4cd spin_projection() {
  return Eigen::Vector4cd(1.0, -1.0, 1.0, -1.0).asDiagonal();
}

namespace {

// Eigenvectors of [[b, z], [conj(z), -b]] for -e and +e.
void block_vectors(double b, cd z, double e, Eigen::Vector2cd& lower, Eigen::Vector2cd& upper) {
  if (e == 0.0) {
    lower = {1.0, 0.0};
    upper = {0.0, 1.0};
    return;
  }
  if (b >= 0.0) {
    upper = {b + e, std::conj(z)};
    lower = {-z, b + e};
  } else {
    upper = {z, e - b};
    lower = {b - e, std::conj(z)};
  }
  upper.normalize();
  lower.normalize();
}

}  // namespace

EigenSystem diagonalize_ground(const GroundHamiltonian& h) {
  double asym = max_asymmetry(h.matrix);
  if (asym > kHermitianTol) throw NonHermitianError(asym, kHermitianTol);

  EigenSystem es;
  es.basis = Basis::NV0Ground;
  es.values.resize(4);
  es.vectors = Eigen::MatrixXcd::Zero(4, 4);
  for (int s = 0; s < 2; ++s) {
    Eigen::Matrix2cd blk = spin_block(h, s == 0 ? Spin::Up : Spin::Down);
    const double b = 0.5 * (blk(0, 0).real() - blk(1, 1).real());
    const double shift = 0.5 * (blk(0, 0).real() + blk(1, 1).real());
    const cd z = blk(0, 1);
    const double e = std::sqrt(b * b + std::norm(z));
    Eigen::Vector2cd lo, up;
    block_vectors(b, z, e, lo, up);
    es.values(s) = shift - e;
    es.values(2 + s) = shift + e;
    es.vectors(s, s) = lo(0);
    es.vectors(s + 2, s) = lo(1);
    es.vectors(s, 2 + s) = up(0);
    es.vectors(s + 2, 2 + s) = up(1);
  }
  fix_phases(es.vectors);
  return es;
}

EigenSystem diagonalize_ground_jacobi(const GroundHamiltonian& h) {
  EigenSystem es = diagonalize(h.matrix, Basis::NV0Ground);
  align_degenerate(es, spin_projection());
  return es;
}

EigenSystem diagonalize_excited(const ExcitedHamiltonian& h) {
  EigenSystem es = diagonalize(h.matrix, Basis::NV0Excited);
  es.vectors = Eigen::MatrixXcd::Identity(2, 2);  // proportional to identity
  return es;
}

double ground_splitting(const EigenSystem& g) {
  const Eigen::Index n = g.values.size();
  if (n != 4) throw InvalidArgument("ground eigensystem must be 4x4");
  return 0.5 * (g.values(2) + g.values(3) - g.values(0) - g.values(1));
}

Eigen::Vector4d transition_frame_energies(const EigenSystem& ground, const ExcitedHamiltonian& excited) {
  return ground.values.head<4>().array() - excited.matrix(0, 0).real();
}

double FieldRange::at(std::size_t i) const {
  if (points == 1) return start;
  if (i + 1 == points) return stop;
  return start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
}

void FieldRange::validate() const {
  if (points < 2) throw InvalidArgument("field range needs at least 2 points");
  if (!std::isfinite(start) || !std::isfinite(stop) || !(stop > start))
    throw InvalidArgument("field range must be finite and increasing");
}

namespace {
Eigen::Vector3d unit(const Eigen::Vector3d& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("direction must be a finite nonzero vector");
  return v / n;
}
}  // namespace

std::vector<LevelRow> level_sweep(const FieldRange& range, const Eigen::Vector3d& direction_lab,
                                  const NvOrientation& orient, const DjtParams& djt, const StrainNV& strain,
                                  const PhysicalConstants& consts) {
  range.validate();
  const Eigen::Vector3d dir = unit(direction_lab);
  std::vector<LevelRow> rows;
  rows.reserve(range.points);
  for (std::size_t i = 0; i < range.points; ++i) {
    const double f = range.at(i);
    EigenSystem es = diagonalize_ground(build_ground(djt, lab_field_to_nv(f * dir, orient), strain, consts));
    rows.push_back({f, es.values(0), es.values(2)});
  }
  return rows;
}

double field_for_splitting(double target_gap, const Eigen::Vector3d& direction_lab, const NvOrientation& orient,
                           const DjtParams& djt, const PhysicalConstants& consts) {
  if (!(target_gap > 0.0)) throw InvalidArgument("target splitting must be positive");
  const Eigen::Vector3d dir = unit(direction_lab);
  const AbcdCoefficients q0 = abcd(djt, lab_field_to_nv(Eigen::Vector3d::Zero(), orient), {}, consts);
  const AbcdCoefficients q1 = abcd(djt, lab_field_to_nv(dir, orient), {}, consts);
  const double b1 = q1.b - q0.b;
  const double c1 = q1.c - q0.c;
  // (B0 + b1 F)^2 + (C0 + c1 F)^2 + D^2 = (S/2)^2, larger root
  const double qa = b1 * b1 + c1 * c1;
  const double qb = 2.0 * (q0.b * b1 + q0.c * c1);
  const double qc = q0.b * q0.b + q0.c * q0.c + q0.d * q0.d - 0.25 * target_gap * target_gap;
  if (qa == 0.0) throw InvalidArgument("field direction does not couple to the ground manifold");
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) throw InvalidArgument("splitting is never reached along this direction");
  const double root = (-qb + std::sqrt(disc)) / (2.0 * qa);
  if (root < 0.0) throw InvalidArgument("splitting is exceeded already at zero field");
  return root;
}

}  // namespace nv0
