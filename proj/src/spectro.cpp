#include "nv0/spectro.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "nv0/csv.hpp"
#include "nv0/errors.hpp"
#include "nv0/random.hpp"

namespace nv0 {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kUniformTol = 1e-9;
constexpr double kResampleTol = 0.01;

double gauss(double f, double area, double center, double sigma) {
  const double u = (f - center) / sigma;
  return area * kInvSqrt2Pi / sigma * std::exp(-0.5 * u * u);
}

// max relative deviation of the spacing from its mean
double spacing_jitter(const std::vector<double>& x) {
  const double mean = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  double worst = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - x[i - 1] - mean) / mean);
  return worst;
}

void require_uniform(const std::vector<double>& x, const char* what) {
  if (x.size() < 2) throw GridError(std::string(what) + " needs at least 2 points");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw GridError(std::string(what) + " must be strictly increasing");
  if (spacing_jitter(x) > kUniformTol) throw GridError(std::string(what) + " is not uniform");
}

}  // namespace

Response Response::gaussian(double fwhm) {
  if (!(fwhm > 0.0) || !std::isfinite(fwhm)) throw InvalidArgument("response FWHM must be positive");
  Response r;
  r.gaussian_fwhm = fwhm;
  return r;
}

Response Response::from_samples(std::vector<double> offsets, std::vector<double> values) {
  if (offsets.size() != values.size() || offsets.empty()) throw InvalidArgument("response samples malformed");
  if (offsets.size() > 1) require_uniform(offsets, "response grid");
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("response samples must be finite and >= 0");
    sum += v;
  }
  if (!(sum > 0.0)) throw InvalidArgument("response samples sum to zero");
  Response r;
  r.gaussian_fwhm = 0.0;
  r.offsets = std::move(offsets);
  r.weights = std::move(values);
  for (double& w : r.weights) w /= sum;
  return r;
}

Response Response::sampled_gaussian(double fwhm, double step) {
  const double s = Response::gaussian(fwhm).sigma();
  if (!(step > 0.0)) throw InvalidArgument("step must be positive");
  const int n = static_cast<int>(std::ceil(8.0 * s / step));
  std::vector<double> off, val;
  for (int k = -n; k <= n; ++k) {
    off.push_back(k * step);
    val.push_back(gauss(k * step, 1.0, 0.0, s));
  }
  Response r = from_samples(std::move(off), std::move(val));
  r.gaussian_fwhm = fwhm;
  return r;
}

double GaussianMixture::operator()(double f) const {
  double v = baseline;
  for (const auto& c : components) v += gauss(f, c.area, c.center, c.sigma);
  return v;
}

double Spectrum::step() const { return (freq.back() - freq.front()) / static_cast<double>(freq.size() - 1); }

void Spectrum::validate() const {
  if (freq.size() != counts.size()) throw InvalidArgument("frequency and counts lengths differ");
  require_uniform(freq, "spectrum grid");
  for (double c : counts)
    if (!std::isfinite(c) || c < 0.0) throw InvalidArgument("counts must be finite and >= 0");
  if (response.sampled() && response.offsets.size() > 1) {
    const double h = response.offsets[1] - response.offsets[0];
    if (std::abs(h - step()) > kUniformTol * step()) throw GridError("response kernel spacing differs from spectrum grid");
  }
}

std::vector<double> uniform_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop > start)) throw InvalidArgument("grid needs stop > start and step > 0");
  const auto n = static_cast<std::size_t>(std::llround((stop - start) / step));
  if (std::abs(start + static_cast<double>(n) * step - stop) > 1e-9 * step)
    throw InvalidArgument("grid span is not a multiple of the step");
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g[i] = start + static_cast<double>(i) * step;
  return g;
}

namespace {

// Forward model: values and Jacobian w.r.t. (area, center, sigma, baseline)
// for (area/m) sum_j G(center + off_j, sigma), m = number of offsets.
struct Forward {
  const std::vector<double>& grid;
  const Response& response;
  std::vector<double> offsets;  // component offsets

  void eval(const FitParams& p, Eigen::VectorXd& y, Eigen::MatrixXd* jac) const {
    const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
    y.setConstant(n, p.baseline);
    if (jac) {
      jac->setZero(n, 4);
      jac->col(3).setOnes();
    }
    const double share = 1.0 / static_cast<double>(offsets.size());
    auto accumulate = [&](Eigen::Index j, double f, double w, double st, double dst_dsigma) {
      for (double off : offsets) {
        const double c = p.center + off;
        const double u = (f - c) / st;
        const double shape = w * share * kInvSqrt2Pi / st * std::exp(-0.5 * u * u);
        y(j) += p.area * shape;
        if (jac) {
          (*jac)(j, 0) += shape;
          (*jac)(j, 1) += p.area * shape * u / st;
          (*jac)(j, 2) += p.area * shape * (u * u - 1.0) / st * dst_dsigma;
        }
      }
    };
    if (!response.sampled()) {
      const double sr = response.sigma();
      const double st = std::sqrt(p.sigma * p.sigma + sr * sr);
      for (Eigen::Index j = 0; j < n; ++j) accumulate(j, grid[j], 1.0, st, p.sigma / st);
    } else {
      for (Eigen::Index j = 0; j < n; ++j)
        for (std::size_t i = 0; i < response.offsets.size(); ++i)
          accumulate(j, grid[j] - response.offsets[i], response.weights[i], p.sigma, 1.0);
    }
  }
};

}  // namespace

std::vector<double> convolve(const GaussianMixture& model, const Response& response, const std::vector<double>& grid) {
  require_uniform(grid, "convolution grid");
  std::vector<double> out(grid.size(), model.baseline);
  for (const auto& c : model.components) {
    if (!(c.sigma > 0.0)) throw InvalidArgument("component sigma must be positive");
    Forward fw{grid, response, {0.0}};
    Eigen::VectorXd y;
    fw.eval({c.area, c.center, c.sigma, 0.0, 0.0}, y, nullptr);
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] += y(static_cast<Eigen::Index>(j));
  }
  return out;
}

Spectrum synth(const SynthOptions& o) {
  if (!(o.sigma > 0.0) || !(o.snr > 0.0) || !(o.noise_scale >= 0.0) || o.splitting < 0.0)
    throw InvalidArgument("synth options out of range");
  Spectrum s;
  s.freq = uniform_grid(o.f_min, o.f_max, o.step);
  s.response = Response::gaussian(o.fwhm);
  GaussianMixture unit;
  if (o.splitting > 0.0) {
    unit.components = {{0.5, o.center - o.splitting / 2, o.sigma}, {0.5, o.center + o.splitting / 2, o.sigma}};
  } else {
    unit.components = {{1.0, o.center, o.sigma}};
  }
  std::vector<double> shape = convolve(unit, s.response, s.freq);
  const double peak = o.snr * o.snr;
  const double scale = peak / *std::max_element(shape.begin(), shape.end());
  const double base = o.baseline_fraction * peak;
  constexpr std::uint64_t kStream = 0x53504543u;
  s.counts.resize(s.freq.size());
  for (std::size_t j = 0; j < s.freq.size(); ++j) {
    const double clean = base + scale * shape[j];
    double v = clean;
    if (o.noisy) v += o.noise_scale * std::sqrt(clean) * counter_normal(o.seed, kStream, j);
    s.counts[j] = std::max(v, 0.0);
  }
  return s;
}

namespace {

constexpr double kRelSsrTol = 1e-10;
constexpr double kRelStepTol = 1e-8;

FitResult levenberg_marquardt(const Spectrum& spec, const Forward& fw, FitParams p) {
  const Eigen::Index n = static_cast<Eigen::Index>(spec.freq.size());
  const Eigen::Map<const Eigen::VectorXd> data(spec.counts.data(), n);
  const double sigma_floor = spec.step() / 4.0;
  const double ymax = data.cwiseAbs().maxCoeff();
  p.sigma = std::max(p.sigma, sigma_floor);

  auto scales = [&](const FitParams& q) {
    return Eigen::Vector4d(std::max(std::abs(q.area), 1e-300), std::max(q.sigma, sigma_floor),
                           std::max(q.sigma, sigma_floor), std::max(ymax, 1e-300));
  };
  auto apply = [&](const FitParams& q, const Eigen::Vector4d& d) {
    FitParams r = q;
    r.area += d(0);
    r.center += d(1);
    r.sigma = std::max(q.sigma + d(2), sigma_floor);
    r.baseline += d(3);
    return r;
  };

  Eigen::VectorXd y(n);
  Eigen::MatrixXd jac(n, 4);
  fw.eval(p, y, &jac);
  Eigen::VectorXd res = y - data;
  double ssr = res.squaredNorm();

  FitResult out;
  double mu = -1.0;
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    if (ssr == 0.0) {
      out.converged = true;
      break;
    }
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d g = jac.transpose() * res;
    Eigen::Vector4d diag = jtj.diagonal().cwiseMax(1e-300);
    if (mu < 0.0) mu = 1e-3;
    bool accepted = false;
    while (mu < 1e20) {
      Eigen::Matrix4d a = jtj;
      a.diagonal() += mu * diag;
      const Eigen::Vector4d step = a.ldlt().solve(-g);
      FitParams trial = apply(p, step);
      Eigen::VectorXd yt(n);
      Eigen::MatrixXd jt(n, 4);
      fw.eval(trial, yt, &jt);
      Eigen::VectorXd rt = yt - data;
      const double ssr_t = rt.squaredNorm();
      if (std::isfinite(ssr_t) && ssr_t <= ssr) {
        const Eigen::Vector4d actual(trial.area - p.area, trial.center - p.center, trial.sigma - p.sigma,
                                     trial.baseline - p.baseline);
        const double rel_ssr = (ssr - ssr_t) / ssr;
        const double rel_step = (actual.array() / scales(trial).array()).abs().maxCoeff();
        p = trial;
        y = yt;
        jac = jt;
        res = rt;
        ssr = ssr_t;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        if (rel_ssr < kRelSsrTol && rel_step < kRelStepTol) out.converged = true;
        break;
      }
      mu *= 4.0;
    }
    if (out.converged) {
      ++it;
      break;
    }
    if (!accepted) {
      // no downhill step at any damping: stationary to working precision
      out.converged = true;
      break;
    }
  }
  out.params = p;
  out.ssr = ssr;
  out.iterations = it;
  out.sigma_at_floor = p.sigma <= sigma_floor * (1.0 + 1e-12);
  return out;
}

FitParams initial_guess(const Spectrum& s) {
  const auto& x = s.freq;
  const auto& c = s.counts;
  std::vector<double> sorted = c;
  std::sort(sorted.begin(), sorted.end());
  const double base = sorted[sorted.size() / 10];
  const auto imax = static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
  double area = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = std::max(c[i] - base, 0.0);
    area += w;
    m1 += w * x[i];
    m2 += w * x[i] * x[i];
  }
  FitParams p;
  p.baseline = base;
  p.center = x[imax];
  p.area = area * s.step();
  double var = area > 0.0 ? m2 / area - (m1 / area) * (m1 / area) : 0.0;
  var -= s.response.sampled() ? 0.0 : s.response.sigma() * s.response.sigma();
  p.sigma = std::sqrt(std::max(var, s.step() * s.step()));
  return p;
}

void check_fit_input(const Spectrum& s) {
  s.validate();
  if (s.freq.size() < 8) throw InvalidArgument("fit needs at least 8 points");
  auto [lo, hi] = std::minmax_element(s.counts.begin(), s.counts.end());
  if (*hi - *lo <= 1e-12 * std::max(std::abs(*hi), 1.0)) throw InvalidArgument("spectrum is flat; nothing to fit");
}

FitResult best_of(const Spectrum& s, const Forward& fw, const std::vector<FitParams>& starts) {
  FitResult best;
  bool have = false;
  for (const auto& st : starts) {
    FitResult r = levenberg_marquardt(s, fw, st);
    if (!have || r.ssr < best.ssr || (r.ssr == best.ssr && r.converged && !best.converged)) {
      best = r;
      have = true;
    }
  }
  return best;
}

std::vector<FitParams> spread_starts(FitParams p) {
  std::vector<FitParams> v;
  for (double f : {1.0, 0.5, 2.0}) {
    FitParams q = p;
    q.sigma *= f;
    v.push_back(q);
  }
  return v;
}

}  // namespace

FitResult fit_single(const Spectrum& spec) {
  check_fit_input(spec);
  Forward fw{spec.freq, spec.response, {0.0}};
  return best_of(spec, fw, spread_starts(initial_guess(spec)));
}

FitResult fit_double(const Spectrum& spec, double splitting, const std::optional<FitParams>& start) {
  check_fit_input(spec);
  if (!(splitting >= 0.0) || !std::isfinite(splitting)) throw InvalidArgument("splitting must be >= 0");
  Forward fw{spec.freq, spec.response, {-splitting / 2.0, splitting / 2.0}};
  FitParams g = initial_guess(spec);
  g.sigma = std::sqrt(std::max(g.sigma * g.sigma - splitting * splitting / 4.0, spec.step() * spec.step()));
  std::vector<FitParams> starts = spread_starts(g);
  if (start) starts.insert(starts.begin(), *start);
  FitResult r = best_of(spec, fw, starts);
  r.params.splitting = splitting;
  return r;
}

SweepResult fit_double_sweep(const Spectrum& spec, const std::vector<double>& splittings) {
  if (splittings.empty() || splittings.front() != 0.0) throw InvalidArgument("splitting sweep must start at 0");
  for (std::size_t i = 1; i < splittings.size(); ++i)
    if (!(splittings[i] > splittings[i - 1])) throw InvalidArgument("splittings must be ascending");
  SweepResult sw;
  sw.splittings = splittings;
  const FitResult single = fit_single(spec);
  std::optional<FitParams> warm = single.params;
  for (double s : splittings) {
    FitResult r = fit_double(spec, s, warm);
    FitParams from_single = single.params;
    from_single.sigma = std::sqrt(std::max(single.params.sigma * single.params.sigma - s * s / 4.0,
                                           spec.step() * spec.step()));
    FitResult alt = fit_double(spec, s, from_single);
    if (alt.ssr < r.ssr) r = alt;
    warm = r.params;
    sw.fits.push_back(r);
  }
  std::size_t imin = 0;
  for (std::size_t i = 1; i < sw.fits.size(); ++i)
    if (sw.fits[i].ssr < sw.fits[imin].ssr) imin = i;
  sw.min_ssr = sw.fits[imin].ssr;
  sw.best_splitting = splittings[imin];

  const double target = 2.0 * sw.min_ssr;
  if (sw.fits.front().ssr >= target) return sw;  // resolved doublet
  for (std::size_t i = 1; i < sw.fits.size(); ++i) {
    if (sw.fits[i].ssr >= target) {
      const double s0 = splittings[i - 1], s1 = splittings[i];
      const double y0 = sw.fits[i - 1].ssr, y1 = sw.fits[i].ssr;
      sw.bound = s0 + (target - y0) * (s1 - s0) / (y1 - y0);
      return sw;
    }
  }
  throw BracketingError("SSR never reaches twice its minimum; extend the splitting sweep");
}

UpsilonBound upsilon_bound(double s, const PhysicalConstants& consts) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("splitting bound must be >= 0");
  const double l = consts.lambda_par;
  const double d = s * s - l * l;
  return {std::sqrt(std::max(d, 0.0)) / 2.0, d < 0.0};
}

namespace {

std::vector<double> interpolate(const std::vector<double>& x, const std::vector<double>& y,
                                const std::vector<double>& xs) {
  std::vector<double> out(xs.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (k + 2 < x.size() && x[k + 1] < xs[i]) ++k;
    const double t = (xs[i] - x[k]) / (x[k + 1] - x[k]);
    out[i] = y[k] + t * (y[k + 1] - y[k]);
  }
  return out;
}

bool is_number(const std::string& s) {
  try {
    parse_double(s);
    return true;
  } catch (const InvalidArgument&) {
    return false;
  }
}

}  // namespace

Spectrum spectrum_from_rows(const std::vector<std::vector<std::string>>& rows_in, double response_fwhm) {
  std::vector<std::vector<std::string>> rows = rows_in;
  if (!rows.empty() && !rows.front().empty() && !is_number(rows.front().front())) rows.erase(rows.begin());
  if (rows.size() < 2) throw InvalidArgument("spectrum needs at least 2 rows");
  const std::size_t width = rows.front().size();
  if (width != 2 && width != 3) throw InvalidArgument("spectrum CSV needs 2 or 3 columns");
  std::vector<double> f, c, k;
  for (const auto& r : rows) {
    if (r.size() != width) throw InvalidArgument("ragged spectrum CSV");
    f.push_back(parse_double(r[0]));
    c.push_back(parse_double(r[1]));
    if (width == 3) k.push_back(parse_double(r[2]));
  }
  for (std::size_t i = 1; i < f.size(); ++i)
    if (!(f[i] > f[i - 1])) throw GridError("frequencies must be strictly increasing");
  const double jitter = spacing_jitter(f);
  if (jitter > kResampleTol) throw GridError("frequency grid too irregular to resample");
  if (jitter > kUniformTol) {
    const double h = (f.back() - f.front()) / static_cast<double>(f.size() - 1);
    std::vector<double> g(f.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = f.front() + static_cast<double>(i) * h;
    g.back() = f.back();
    c = interpolate(f, c, g);
    if (!k.empty()) k = interpolate(f, k, g);
    f = std::move(g);
  }
  Spectrum s;
  s.response = k.empty() ? Response::gaussian(response_fwhm) : Response::from_samples(f, k);
  s.freq = std::move(f);
  s.counts = std::move(c);
  s.validate();
  return s;
}

Spectrum read_spectrum_csv(const std::filesystem::path& path, double response_fwhm) {
  return spectrum_from_rows(read_csv(path), response_fwhm);
}

std::string spectrum_to_csv(const Spectrum& s) {
  CsvTable t({"frequency_GHz", "counts"});
  for (std::size_t i = 0; i < s.freq.size(); ++i) t.row({format_double(s.freq[i]), format_double(s.counts[i])});
  return t.str();
}

}  // namespace nv0
