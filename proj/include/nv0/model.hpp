#pragma once

#include <array>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace nv0 {

inline constexpr double kGhzPerThz = 1000.0;
inline constexpr double kPi = 3.14159265358979323846;

struct PhysicalConstants {
  double lambda_par = 4.3;      // GHz
  double d_perp = 5.0;          // GHz um/V
  double d_par = 0.0;           // GHz um/V
  double d_ge = 6.0;            // GHz um/V
  double eps_es = 521.4;        // THz
  double eps_A1 = 192.0;        // THz
  double eps_A1_prime = -483.0; // THz
  double eps_E = -600.0;        // THz
  double eps_E_prime = 360.0;   // THz

  static constexpr double kB = 20.836619;  // GHz/K, fixed

  double eps_es_ghz() const { return eps_es * kGhzPerThz; }

  bool operator==(const PhysicalConstants&) const = default;
};

inline constexpr double kUpsilonBoundGhz = 12.0;

class DjtParams {
public:
  DjtParams() = default;
  // alpha in degrees, wrapped into (-180, 180]
  DjtParams(double upsilon, double alpha_deg);
  static DjtParams from_components(double upsilon_x, double upsilon_y);

  double upsilon() const { return upsilon_; }
  double alpha_deg() const { return alpha_; }
  double upsilon_x() const;
  double upsilon_y() const;

  bool operator==(const DjtParams&) const = default;

private:
  double upsilon_ = 0.0;
  double alpha_ = 0.0;
};

double wrap_degrees(double deg);

struct FieldNV {
  double fx = 0.0;
  double fy = 0.0;
  double fz = 0.0;

  double transverse() const;
  Eigen::Vector3d vec() const { return {fx, fy, fz}; }
  bool operator==(const FieldNV&) const = default;
};

struct StrainNV {
  double e_xx = 0.0;
  double e_yy = 0.0;
  double e_zz = 0.0;
  double e_xy = 0.0;
  double e_xz = 0.0;
  double e_yz = 0.0;

  // deformation modes
  double e_Ex() const { return e_xx - e_yy; }
  double e_Ey() const { return 2.0 * e_xy; }
  double e_Ex_prime() const { return 2.0 * e_xz; }
  double e_Ey_prime() const { return 2.0 * e_yz; }
  double e_A1() const { return e_zz; }
  double e_A1_prime() const { return e_xx + e_yy; }

  Eigen::Matrix3d tensor() const;
  static StrainNV from_tensor(const Eigen::Matrix3d& e);
  bool operator==(const StrainNV&) const = default;
};

enum class Orientation { N111, N11b1b, N1b11b, N1b1b1 };

struct NvOrientation {
  Orientation id;
  std::string label;         // e.g. "111", "1-1-1"
  Eigen::Vector3i axis;      // labelled <111> direction
  Eigen::Matrix3d rotation;  // rows: NV x, y, z in lab coordinates
  bool mirror;               // generated by an improper cubic operation
};

const std::array<NvOrientation, 4>& all_orientations();
const NvOrientation& orientation(Orientation id);
const NvOrientation& orientation(std::string_view label);

FieldNV lab_field_to_nv(const Eigen::Vector3d& field_lab, const NvOrientation& orient);
Eigen::Vector3d nv_to_lab(const Eigen::Vector3d& v_nv, const NvOrientation& orient);
Eigen::Vector3d lab_to_nv(const Eigen::Vector3d& v_lab, const NvOrientation& orient);

// Mirror-generated frames see Upsilon_y reversed relative to [111].
DjtParams djt_in_reference_frame(const DjtParams& djt, const NvOrientation& orient);

}  // namespace nv0
