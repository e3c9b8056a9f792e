#include "nv0/memory.hpp"

#include <cmath>

#include "nv0/errors.hpp"

namespace nv0 {

double r_times_delta_to_si(double v) { return v * kHz2M2PerGhz2Um2; }

double control_wavelength(const PhysicalConstants& consts) {
  if (!(consts.eps_es > 0.0)) throw InvalidArgument("eps_es must be positive");
  return kSpeedOfLight / (consts.eps_es * 1e12);
}

std::string geometry_name(Geometry g) { return g == Geometry::Bulk ? "bulk" : "waveguide"; }

namespace {
void positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be positive");
}
}  // namespace

MemoryResult coupling_strength(const MemoryConfig& cfg) {
  if (!(cfg.pulse_energy >= 0.0) || !std::isfinite(cfg.pulse_energy))
    throw InvalidArgument("pulse_energy must be >= 0");
  positive(cfg.nv_density, "nv_density");
  positive(cfg.detuning, "detuning");
  positive(cfg.r_times_delta, "r_times_delta");
  positive(cfg.wavelength, "wavelength");

  MemoryResult out;
  out.effective_length = cfg.wavelength;
  if (cfg.geometry == Geometry::Waveguide) {
    positive(cfg.width, "width");
    positive(cfg.length, "length");
    out.effective_length = cfg.width * cfg.width / cfg.length;
    out.subwavelength = out.effective_length < cfg.wavelength;
  }
  const double pre = std::sqrt(kPi * kPi * kPlanck / (kEpsilon0 * kEpsilon0 * kSpeedOfLight));
  out.r = pre * std::sqrt(cfg.nv_density * cfg.pulse_energy) * cfg.r_times_delta /
          (out.effective_length * cfg.detuning);
  return out;
}

}  // namespace nv0
