#pragma once

#include <string>

#include "nv0/model.hpp"

namespace nv0 {

inline constexpr double kPlanck = 6.62607015e-34;         // J s
inline constexpr double kEpsilon0 = 8.8541878128e-12;     // F/m
inline constexpr double kSpeedOfLight = 2.99792458e8;     // m/s
// 1 GHz^2 um^2/V^2 = 1e18 Hz^2 * 1e-12 m^2/V^2
inline constexpr double kHz2M2PerGhz2Um2 = 1e6;

enum class Geometry { Bulk, Waveguide };

struct MemoryConfig {
  double pulse_energy = 10e-9;       // J
  double nv_density = 1e22;          // m^-3
  double detuning = 100e9;           // Hz
  double r_times_delta = 0.0;        // Hz^2 m^2/V^2
  double wavelength = 0.0;           // m, control wavelength
  Geometry geometry = Geometry::Bulk;
  double width = 0.0;                // m, waveguide only
  double length = 0.0;               // m, waveguide only
};

struct MemoryResult {
  double r = 0.0;                    // coupling strength, dimensionless
  double effective_length = 0.0;     // m, lambda_C or d^2/L
  bool subwavelength = false;        // d^2/L below lambda_C
};

double r_times_delta_to_si(double ghz2_um2_per_v2);
double control_wavelength(const PhysicalConstants& consts);

MemoryResult coupling_strength(const MemoryConfig& cfg);

std::string geometry_name(Geometry g);

}  // namespace nv0
