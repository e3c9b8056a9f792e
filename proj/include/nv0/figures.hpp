#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nv0/csv.hpp"
#include "nv0/hamiltonian.hpp"
#include "nv0/model.hpp"

namespace nv0 {

struct DjtCase {
  std::string label;
  DjtParams djt;
};

// U0, U12_a0, U12_a90, U12_a-90, U12_a180
std::vector<DjtCase> caption_cases();

inline constexpr double kFigureDetuning = 1e4;  // GHz, only the numerator is reported

struct Fig2Tables {
  CsvTable a{{"field_V_per_um", "e_lower_GHz", "e_upper_GHz", "case"}};
  CsvTable b{{"field_V_per_um", "degree_lower", "degree_upper", "case"}};
  CsvTable c{{"field_V_per_um", "abs_r_times_delta", "case"}};
  CsvTable d{{"field_V_per_um", "splitting_GHz", "p", "case"}};
};

struct Fig3Tables {
  CsvTable b{{"field_V_per_um", "e_lower_GHz", "e_upper_GHz", "case", "orientation"}};
  CsvTable c{{"field_V_per_um", "degree_lower", "degree_upper", "case", "orientation"}};
  CsvTable d{{"field_V_per_um", "abs_r_times_delta", "case", "orientation"}};
  CsvTable e{{"field_V_per_um", "splitting_GHz", "p", "case", "orientation"}};
};

// [111] NV, field along its x axis, x-control / y-signal
Fig2Tables make_fig2(const FieldRange& range, const PhysicalConstants& consts);
// all orientations, field along [100], [100]-control / [010]-signal;
// orientation "all" rows hold means (b-d) or the ensemble sum (e)
Fig3Tables make_fig3(const FieldRange& range, const PhysicalConstants& consts);

struct TransitionOptics {
  double degree_lower = 0.0;
  double degree_upper = 0.0;
  double abs_r_times_delta = 0.0;
  double splitting = 0.0;
  double p = 0.0;
  double e_lower = 0.0;
  double e_upper = 0.0;
};

// Everything the figures need at one field point. Vectors are lab frame.
TransitionOptics evaluate_point(const Eigen::Vector3d& field_lab, const NvOrientation& orient, const DjtParams& djt,
                                const PhysicalConstants& consts, const Eigen::Vector3d& axis_a,
                                const Eigen::Vector3d& axis_b);

// Field along [100] at which the orientation-averaged splitting equals s.
double ensemble_field_for_splitting(double s, const DjtParams& djt, const PhysicalConstants& consts);

}  // namespace nv0
