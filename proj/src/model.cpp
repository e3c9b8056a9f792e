#include "nv0/model.hpp"

#include <cmath>

#include "nv0/errors.hpp"

namespace nv0 {

double wrap_degrees(double deg) {
  if (!std::isfinite(deg)) throw InvalidArgument("alpha must be finite");
  double w = std::fmod(deg, 360.0);
  if (w <= -180.0) w += 360.0;
  if (w > 180.0) w -= 360.0;
  return w;
}

DjtParams::DjtParams(double upsilon, double alpha_deg) : upsilon_(upsilon), alpha_(wrap_degrees(alpha_deg)) {
  if (!std::isfinite(upsilon) || upsilon < 0.0) throw InvalidArgument("upsilon must be finite and >= 0");
}

DjtParams DjtParams::from_components(double upsilon_x, double upsilon_y) {
  double u = std::hypot(upsilon_x, upsilon_y);
  double a = (u == 0.0) ? 0.0 : std::atan2(upsilon_y, upsilon_x) * 180.0 / kPi;
  return DjtParams(u, a);
}

namespace {
// exact values at the quarter angles keep upsilon_x = 0 at alpha = +-90
double cos_deg(double a) {
  if (a == 90.0 || a == -90.0) return 0.0;
  if (a == 180.0) return -1.0;
  return std::cos(a * kPi / 180.0);
}
double sin_deg(double a) {
  if (a == 180.0 || a == 0.0) return 0.0;
  if (a == 90.0) return 1.0;
  if (a == -90.0) return -1.0;
  return std::sin(a * kPi / 180.0);
}
}  // namespace

double DjtParams::upsilon_x() const { return upsilon_ * cos_deg(alpha_); }
double DjtParams::upsilon_y() const { return upsilon_ * sin_deg(alpha_); }

double FieldNV::transverse() const { return std::hypot(fx, fy); }

Eigen::Matrix3d StrainNV::tensor() const {
  Eigen::Matrix3d e;
  e << e_xx, e_xy, e_xz,
       e_xy, e_yy, e_yz,
       e_xz, e_yz, e_zz;
  return e;
}

StrainNV StrainNV::from_tensor(const Eigen::Matrix3d& e) {
  Eigen::Matrix3d s = 0.5 * (e + e.transpose());
  return {s(0, 0), s(1, 1), s(2, 2), s(0, 1), s(0, 2), s(1, 2)};
}

namespace {

NvOrientation make(Orientation id, std::string label, Eigen::Vector3i axis, const Eigen::Matrix3d& g) {
  const Eigen::Vector3d x = Eigen::Vector3d(-1, -1, 2) / std::sqrt(6.0);
  const Eigen::Vector3d z = Eigen::Vector3d(1, 1, 1) / std::sqrt(3.0);
  const Eigen::Vector3d y = z.cross(x);
  const double det = g.determinant();
  Eigen::Matrix3d r;
  r.row(0) = (g * x).transpose();
  r.row(1) = (det * (g * y)).transpose();
  r.row(2) = (g * z).transpose();
  return {id, std::move(label), axis, r, det < 0.0};
}

std::array<NvOrientation, 4> build_orientations() {
  return {
      make(Orientation::N111, "111", {1, 1, 1}, Eigen::Vector3d(1, 1, 1).asDiagonal()),
      make(Orientation::N1b1b1, "-1-11", {-1, -1, 1}, Eigen::Vector3d(1, 1, -1).asDiagonal()),
      make(Orientation::N1b11b, "-11-1", {-1, 1, -1}, Eigen::Vector3d(1, -1, 1).asDiagonal()),
      make(Orientation::N11b1b, "1-1-1", {1, -1, -1}, Eigen::Vector3d(1, -1, -1).asDiagonal()),
  };
}

}  // namespace

const std::array<NvOrientation, 4>& all_orientations() {
  static const std::array<NvOrientation, 4> table = build_orientations();
  return table;
}

const NvOrientation& orientation(Orientation id) {
  for (const auto& o : all_orientations())
    if (o.id == id) return o;
  throw InvalidArgument("unknown orientation");
}

const NvOrientation& orientation(std::string_view label) {
  for (const auto& o : all_orientations())
    if (o.label == label) return o;
  throw InvalidArgument("unknown orientation label: " + std::string(label));
}

Eigen::Vector3d lab_to_nv(const Eigen::Vector3d& v_lab, const NvOrientation& orient) {
  return orient.rotation * v_lab;
}

Eigen::Vector3d nv_to_lab(const Eigen::Vector3d& v_nv, const NvOrientation& orient) {
  return orient.rotation.transpose() * v_nv;
}

FieldNV lab_field_to_nv(const Eigen::Vector3d& field_lab, const NvOrientation& orient) {
  Eigen::Vector3d f = lab_to_nv(field_lab, orient);
  return {f.x(), f.y(), f.z()};
}

DjtParams djt_in_reference_frame(const DjtParams& djt, const NvOrientation& orient) {
  if (!orient.mirror) return djt;
  return DjtParams(djt.upsilon(), -djt.alpha_deg());
}

}  // namespace nv0
