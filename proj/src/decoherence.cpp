#include "nv0/decoherence.hpp"

#include <cmath>
#include <vector>

#include "nv0/errors.hpp"
#include "nv0/hamiltonian.hpp"
#include "nv0/random.hpp"

namespace nv0 {

std::string regime_name(BroadeningRegime r) {
  return r == BroadeningRegime::General ? "general" : "large_djt";
}

double kappa(const PhysicalConstants& k) {
  const double num = k.eps_E * k.eps_E + k.eps_E_prime * k.eps_E_prime;
  const double den = k.eps_A1 * k.eps_A1 + k.eps_A1_prime * k.eps_A1_prime;
  if (den == 0.0) throw InvalidArgument("A1 strain energies are both zero");
  return std::sqrt(num / den);
}

namespace {
double djt_ratio(const DjtParams& djt, const PhysicalConstants& k) {
  const double u2 = djt.upsilon() * djt.upsilon();
  const double den = 4.0 * u2 + k.lambda_par * k.lambda_par;
  return den == 0.0 ? 0.0 : 8.0 * u2 / den;
}
}  // namespace

BroadeningResult strain_broadening(double delta_eps, const DjtParams& djt, const PhysicalConstants& consts,
                                   BroadeningRegime regime) {
  if (!(delta_eps >= 0.0) || !std::isfinite(delta_eps)) throw InvalidArgument("delta_eps must be >= 0");
  BroadeningResult r;
  r.kappa = kappa(consts);
  r.delta_eps = delta_eps;
  r.regime = regime;
  const double k2 = r.kappa * r.kappa;
  const double ratio = regime == BroadeningRegime::LargeDjt ? 2.0 : djt_ratio(djt, consts);
  r.delta_s = r.kappa / std::sqrt(1.0 + k2 * ratio) * delta_eps;
  return r;
}

double splitting_spread_from_strain(double delta_e, const PhysicalConstants& k) {
  return 2.0 * delta_e * std::hypot(k.eps_E, k.eps_E_prime) * kGhzPerThz;
}

double optical_width_from_strain(double delta_e, const DjtParams& djt, const PhysicalConstants& k) {
  const double a1 = k.eps_A1 * k.eps_A1 + k.eps_A1_prime * k.eps_A1_prime;
  const double e = k.eps_E * k.eps_E + k.eps_E_prime * k.eps_E_prime;
  return delta_e * std::sqrt(a1 + e * djt_ratio(djt, k)) * kGhzPerThz;
}

double noise_from_bcd(double b, double c, double d) {
  if (b == 0.0) throw InvalidArgument("B must be nonzero");
  return (c * c + d * d) / (4.0 * b * b);
}

StrainedNoise strained_noise_spread(double s, double delta_s, const DjtParams& djt, const PhysicalConstants& k) {
  if (!(s > 0.0) || !(delta_s >= 0.0)) throw InvalidArgument("need S > 0 and delta_S >= 0");
  if (!(s > delta_s)) throw InvalidArgument("strained noise spread needs S > delta_S");
  StrainedNoise r;
  r.p = noise_from_bcd(s / 2.0, djt.upsilon_y(), k.lambda_par / 2.0);
  r.delta_p = djt.upsilon_y() * delta_s / (s * s);
  return r;
}

double bose_occupation(double temperature, double splitting, const PhysicalConstants&) {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) throw InvalidArgument("temperature must be >= 0");
  if (!(splitting > 0.0) || !std::isfinite(splitting)) throw InvalidArgument("splitting must be > 0");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(splitting / (PhysicalConstants::kB * temperature));
}

LifetimeBound lifetime_bound(double splitting, double temperature, const LifetimeReference& ref,
                             const PhysicalConstants& consts) {
  if (!(ref.tau_ref_us > 0.0 && ref.s_ref > 0.0 && ref.t_ref > 0.0 && ref.chi_ratio > 0.0))
    throw InvalidArgument("lifetime reference values must be positive");
  const double n = bose_occupation(temperature, splitting, consts);
  const double n_ref = bose_occupation(ref.t_ref, ref.s_ref, consts);
  const double s3 = splitting * splitting * splitting;
  const double r3 = ref.s_ref * ref.s_ref * ref.s_ref;
  LifetimeBound b;
  b.tau_min_ns = ref.tau_ref_us * 1e3 * ref.chi_ratio * r3 * (2.0 * n_ref + 1.0) / (s3 * (2.0 * n + 1.0));
  b.temperature = temperature;
  b.splitting = splitting;
  b.reference = ref;
  return b;
}

double phonon_rate(double prefactor, double splitting, double temperature, const PhysicalConstants& consts) {
  const double n = bose_occupation(temperature, splitting, consts);
  return prefactor * splitting * splitting * splitting * (2.0 * n + 1.0);
}

MonteCarloSpread monte_carlo_splitting_spread(double delta_e, std::size_t samples, std::uint64_t seed,
                                              const PhysicalConstants& consts, double operating_field) {
  if (samples < 2) throw InvalidArgument("need at least 2 samples");
  if (!(delta_e >= 0.0)) throw InvalidArgument("delta_e must be >= 0");
  constexpr std::uint64_t kStream = 0x5742414Eu;
  const double sq = delta_e / std::sqrt(2.0);
  const double half = delta_e / 2.0;
  const FieldNV field{operating_field, 0.0, 0.0};
  std::vector<double> gaps(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    auto z = [&](int k) { return counter_normal(seed, kStream, 6 * i + k); };
    StrainNV e{sq * z(0), sq * z(1), delta_e * z(2), half * z(3), half * z(4), half * z(5)};
    gaps[i] = ground_splitting(diagonalize_ground(build_ground({}, field, e, consts)));
  }
  double mean = 0.0;
  for (double g : gaps) mean += g;
  mean /= static_cast<double>(samples);
  double var = 0.0;
  for (double g : gaps) var += (g - mean) * (g - mean);
  var /= static_cast<double>(samples - 1);
  return {std::sqrt(var), splitting_spread_from_strain(delta_e, consts), samples};
}

}  // namespace nv0
