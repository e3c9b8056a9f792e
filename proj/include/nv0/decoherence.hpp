#pragma once

#include <cstdint>
#include <string>

#include "nv0/model.hpp"

namespace nv0 {

enum class BroadeningRegime { General, LargeDjt };

std::string regime_name(BroadeningRegime r);

struct BroadeningResult {
  double kappa = 0.0;
  double delta_s = 0.0;    // GHz
  double delta_eps = 0.0;  // GHz
  BroadeningRegime regime = BroadeningRegime::General;
  std::string assumption = "isotropic random strain";
};

struct StrainedNoise {
  double p = 0.0;
  double delta_p = 0.0;
};

struct LifetimeReference {
  double tau_ref_us = 1.3;   // NV- lower bound
  double s_ref = 3.9;        // GHz
  double t_ref = 5.8;        // K
  double chi_ratio = 0.5;    // chi(NV-)/chi(NV0)
};

struct LifetimeBound {
  double tau_min_ns = 0.0;
  double temperature = 0.0;  // K
  double splitting = 0.0;    // GHz
  LifetimeReference reference;
};

double kappa(const PhysicalConstants& consts);

BroadeningResult strain_broadening(double delta_eps, const DjtParams& djt, const PhysicalConstants& consts,
                                   BroadeningRegime regime = BroadeningRegime::General);

// splitting spread from an isotropic strain spread delta_e (dimensionless)
double splitting_spread_from_strain(double delta_e, const PhysicalConstants& consts);
// optical inhomogeneous width from the same spread
double optical_width_from_strain(double delta_e, const DjtParams& djt, const PhysicalConstants& consts);

// (C^2 + D^2) / (4 B^2)
double noise_from_bcd(double b, double c, double d);
StrainedNoise strained_noise_spread(double s, double delta_s, const DjtParams& djt, const PhysicalConstants& consts);

double bose_occupation(double temperature, double splitting, const PhysicalConstants& consts = {});
LifetimeBound lifetime_bound(double splitting, double temperature, const LifetimeReference& ref = {},
                             const PhysicalConstants& consts = {});
// gamma = prefactor * S^3 (2N + 1)
double phonon_rate(double prefactor, double splitting, double temperature, const PhysicalConstants& consts = {});

struct MonteCarloSpread {
  double delta_s = 0.0;    // sampled std of the ground splitting, GHz
  double predicted = 0.0;  // isotropic closed form
  std::size_t samples = 0;
};

// Samples strain tensors at a high-field operating point and measures the
// splitting spread from the full eigenvalues.
MonteCarloSpread monte_carlo_splitting_spread(double delta_e, std::size_t samples, std::uint64_t seed,
                                              const PhysicalConstants& consts = {},
                                              double operating_field = 100.0);

}  // namespace nv0
