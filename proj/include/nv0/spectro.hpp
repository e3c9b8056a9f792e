#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nv0/model.hpp"

namespace nv0 {

inline constexpr double kFwhmToSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)
inline constexpr double kPaperResponseFwhm = 24.5;           // GHz

struct Response {
  // Gaussian of the given FWHM, or a kernel sampled on the spectrum grid
  double gaussian_fwhm = kPaperResponseFwhm;
  std::vector<double> offsets;  // GHz, empty for the Gaussian form
  std::vector<double> weights;  // normalized to sum 1

  bool sampled() const { return !offsets.empty(); }
  double sigma() const { return gaussian_fwhm / kFwhmToSigma; }

  static Response gaussian(double fwhm);
  // values at offsets (uniform spacing), normalized to unit area
  static Response from_samples(std::vector<double> offsets, std::vector<double> values);
  // Gaussian kernel sampled at k*step, |k| <= ceil(8 sigma/step)
  static Response sampled_gaussian(double fwhm, double step);
};

struct GaussianComponent {
  double area = 0.0;
  double center = 0.0;
  double sigma = 1.0;
};

struct GaussianMixture {
  std::vector<GaussianComponent> components;
  double baseline = 0.0;

  double operator()(double f) const;
};

struct Spectrum {
  std::vector<double> freq;    // GHz, strictly increasing, uniform
  std::vector<double> counts;
  Response response;

  double step() const;
  void validate() const;
};

// Response-convolved model on the given uniform grid; preserves area.
std::vector<double> convolve(const GaussianMixture& model, const Response& response,
                             const std::vector<double>& grid);

std::vector<double> uniform_grid(double start, double stop, double step);

struct SynthOptions {
  double sigma = 16.0;
  double center = 0.0;
  double splitting = 0.0;      // > 0 gives an equal-weight doublet
  double fwhm = kPaperResponseFwhm;
  double f_min = -150.0;
  double f_max = 150.0;
  double step = 2.0;
  double snr = 50.0;           // peak counts = snr^2
  double baseline_fraction = 0.02;
  bool noisy = true;
  double noise_scale = 1.0;    // multiplies the sqrt(counts) noise
  std::uint64_t seed = 1;
};

Spectrum synth(const SynthOptions& opt);

struct FitParams {
  double area = 0.0;
  double center = 0.0;
  double sigma = 0.0;
  double baseline = 0.0;
  double splitting = 0.0;  // fixed in the double model
};

struct FitResult {
  FitParams params;
  double ssr = 0.0;
  bool converged = false;
  bool sigma_at_floor = false;
  int iterations = 0;
};

inline constexpr int kMaxIterations = 500;

FitResult fit_single(const Spectrum& spec);
// equal-area doublet with common width at fixed splitting
FitResult fit_double(const Spectrum& spec, double splitting, const std::optional<FitParams>& start = {});

struct SweepResult {
  std::vector<double> splittings;
  std::vector<FitResult> fits;
  double min_ssr = 0.0;
  double best_splitting = 0.0;
  std::optional<double> bound;  // absent when a doublet is resolved
};

SweepResult fit_double_sweep(const Spectrum& spec, const std::vector<double>& splittings);

struct UpsilonBound {
  double upsilon = 0.0;
  bool clamped = false;
};

UpsilonBound upsilon_bound(double splitting_bound, const PhysicalConstants& consts);

Spectrum read_spectrum_csv(const std::filesystem::path& path, double response_fwhm = kPaperResponseFwhm);
Spectrum spectrum_from_rows(const std::vector<std::vector<std::string>>& rows, double response_fwhm);
std::string spectrum_to_csv(const Spectrum& s);

}  // namespace nv0
