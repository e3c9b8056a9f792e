#include "nv0/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "nv0/config.hpp"
#include "nv0/decoherence.hpp"
#include "nv0/errors.hpp"
#include "nv0/figures.hpp"
#include "nv0/memory.hpp"
#include "nv0/spectro.hpp"

namespace nv0 {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 1;
  std::size_t points = 401;
};

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Run {
public:
  Run(std::string command, const std::vector<std::string>& argv, const Globals& g, const PhysicalConstants& c)
      : command_(std::move(command)), argv_(argv), dir_(g.out), consts_(c) {
    fs::create_directories(dir_);
    flags_["config"] = g.config;
    flags_["out"] = g.out;
    flags_["seed"] = g.seed;
    flags_["points"] = g.points;
  }

  json& flags() { return flags_; }

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + (dir_ / name).string());
    f << content;
    if (!f) throw Error("write failed: " + (dir_ / name).string());
    outputs_.push_back(name);
  }

  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void finish() {
    json m;
    m["command"] = command_;
    m["argv"] = argv_;
    m["flags"] = flags_;
    m["constants"] = constants_to_json(consts_);
    m["outputs"] = outputs_;
    m["version"] = kVersion;
    m["timestamp"] = utc_timestamp();
    std::string name = command_;
    for (char& ch : name)
      if (ch == ' ') ch = '_';
    std::ofstream f(dir_ / (name + ".manifest.json"), std::ios::binary);
    f << m.dump(2) << "\n";
    if (!f) throw Error("cannot write manifest");
  }

private:
  std::string command_;
  std::vector<std::string> argv_;
  fs::path dir_;
  PhysicalConstants consts_;
  json flags_ = json::object();
  std::vector<std::string> outputs_;
};

FieldRange field_range(const Globals& g, double lo, double hi) {
  FieldRange r{lo, hi, g.points};
  r.validate();
  return r;
}

json broadening_json(const BroadeningResult& b) {
  return {{"kappa", b.kappa}, {"delta_s_GHz", b.delta_s}, {"delta_eps_GHz", b.delta_eps},
          {"regime", regime_name(b.regime)}, {"assumption", b.assumption}};
}

json fit_json(const FitResult& r) {
  return {{"area", r.params.area},         {"center_GHz", r.params.center}, {"sigma_GHz", r.params.sigma},
          {"baseline", r.params.baseline}, {"splitting_GHz", r.params.splitting},
          {"ssr", r.ssr},                  {"converged", r.converged},     {"sigma_at_floor", r.sigma_at_floor},
          {"iterations", r.iterations}};
}

std::vector<double> splitting_grid(double s_max, double s_step) {
  if (!(s_step > 0.0) || !(s_max > 0.0)) throw InvalidArgument("splitting sweep needs positive max and step");
  std::vector<double> v;
  const auto n = static_cast<std::size_t>(std::floor(s_max / s_step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) v.push_back(static_cast<double>(i) * s_step);
  return v;
}

int dispatch(const std::vector<std::string>& args);

int replay(const std::string& manifest_path, const std::string& out_override) {
  std::ifstream f(manifest_path);
  if (!f) throw Error("cannot read manifest: " + manifest_path);
  json m = json::parse(f);
  std::vector<std::string> argv = m.at("argv").get<std::vector<std::string>>();
  if (!out_override.empty()) {
    std::vector<std::string> edited;
    for (std::size_t i = 0; i < argv.size(); ++i) {
      if (argv[i] == "--out" && i + 1 < argv.size()) {
        ++i;
        continue;
      }
      if (argv[i].rfind("--out=", 0) == 0) continue;
      edited.push_back(argv[i]);
    }
    edited.insert(edited.begin() + 1, {"--out", out_override});
    argv = std::move(edited);
  }
  return dispatch(argv);
}

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"NV0 level structure, optics, decoherence and spectroscopy simulator", "nv0sim"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Globals g;
  app.add_option("--config", g.config, "constants override file (default: $NV0_CONFIG)");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--points", g.points, "samples per field sweep")->check(CLI::Range(2, 1000000));

  double f_min = 0.0, f_max = 10.0;
  auto* fig2 = app.add_subcommand("fig2", "level structure and optics of one NV vs transverse field");
  auto* fig3 = app.add_subcommand("fig3", "all four orientations vs field along [100]");
  for (auto* sc : {fig2, fig3}) {
    sc->fallthrough();
    sc->add_option("--field-min", f_min, "V/um");
    sc->add_option("--field-max", f_max, "V/um");
  }

  auto* dec = app.add_subcommand("decoherence", "strain broadening, noise spread and lifetime bound");
  dec->fallthrough();
  double delta_eps = 16.0, ups = kUpsilonBoundGhz, alpha = 90.0, split = 50.0;
  double delta_s = -1.0;
  std::string regime = "large_djt";
  std::vector<double> temps{4.2, 1.0};
  LifetimeReference ref;
  std::size_t mc_samples = 0;
  double mc_delta_e = 1e-6;
  dec->add_option("--delta-eps", delta_eps, "optical inhomogeneous width, GHz");
  dec->add_option("--upsilon", ups, "DJT energy, GHz");
  dec->add_option("--alpha", alpha, "DJT angle, degrees");
  dec->add_option("--regime", regime, "general | large_djt")->check(CLI::IsMember({"general", "large_djt"}));
  dec->add_option("--splitting", split, "ground splitting S, GHz");
  dec->add_option("--delta-s", delta_s, "splitting spread, GHz (default: from --delta-eps)");
  dec->add_option("--temperature", temps, "K, repeatable");
  dec->add_option("--tau-ref", ref.tau_ref_us, "NV- reference lifetime, us");
  dec->add_option("--s-ref", ref.s_ref, "NV- reference splitting, GHz");
  dec->add_option("--t-ref", ref.t_ref, "NV- reference temperature, K");
  dec->add_option("--chi-ratio", ref.chi_ratio, "chi(NV-)/chi(NV0)");
  dec->add_option("--mc-samples", mc_samples, "Monte-Carlo strain samples (0 = skip)");
  dec->add_option("--mc-delta-e", mc_delta_e, "strain spread for the Monte-Carlo check");

  auto* mem = app.add_subcommand("memory", "Raman memory coupling strength");
  mem->fallthrough();
  MemoryConfig mc;
  double rtd_ghz = 18.0 / std::sqrt(3.0);
  double wavelength = -1.0;
  std::string geometry = "bulk";
  mem->add_option("--pulse-energy", mc.pulse_energy, "control pulse energy, J");
  mem->add_option("--density", mc.nv_density, "NV0 density, m^-3");
  mem->add_option("--detuning", mc.detuning, "detuning, Hz");
  mem->add_option("--r-times-delta", rtd_ghz, "R*Delta, GHz^2 um^2/V^2");
  mem->add_option("--wavelength", wavelength, "control wavelength, m (default c/eps_es)");
  mem->add_option("--geometry", geometry, "bulk | waveguide")->check(CLI::IsMember({"bulk", "waveguide"}));
  mem->add_option("--width", mc.width, "waveguide width, m");
  mem->add_option("--length", mc.length, "waveguide length, m");

  auto* spec = app.add_subcommand("spectro", "line-shape synthesis and fitting");
  spec->require_subcommand(1);
  auto* s_synth = spec->add_subcommand("synth", "write a synthetic spectrum");
  auto* s_fit = spec->add_subcommand("fit", "single-Gaussian fit");
  auto* s_sweep = spec->add_subcommand("sweep", "double-Gaussian splitting sweep and bounds");
  spec->fallthrough();
  SynthOptions so;
  bool noiseless = false;
  s_synth->fallthrough();
  s_synth->add_option("--sigma", so.sigma, "GHz");
  s_synth->add_option("--center", so.center, "GHz");
  s_synth->add_option("--splitting", so.splitting, "doublet splitting, GHz (0 = single line)");
  s_synth->add_option("--fwhm", so.fwhm, "response FWHM, GHz");
  s_synth->add_option("--f-min", so.f_min, "GHz");
  s_synth->add_option("--f-max", so.f_max, "GHz");
  s_synth->add_option("--step", so.step, "GHz");
  s_synth->add_option("--snr", so.snr, "peak signal-to-noise ratio");
  s_synth->add_flag("--noiseless", noiseless, "skip noise");
  std::string input;
  double fwhm = kPaperResponseFwhm, s_max = 60.0, s_step = 1.0;
  for (auto* sc : {s_fit, s_sweep}) {
    sc->fallthrough();
    sc->add_option("--input", input, "spectrum CSV (frequency_GHz, counts[, response])")->required();
    sc->add_option("--fwhm", fwhm, "response FWHM when no response column, GHz");
  }
  s_sweep->add_option("--s-max", s_max, "largest splitting, GHz");
  s_sweep->add_option("--s-step", s_step, "splitting step, GHz");

  auto* rep = app.add_subcommand("replay", "re-run a command from its manifest");
  std::string manifest;
  rep->add_option("manifest", manifest, "manifest JSON")->required();
  rep->fallthrough();

  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (rep->parsed()) return replay(manifest, app.count("--out") ? g.out : "");

  const PhysicalConstants consts = resolve_constants(g.config);

  if (fig2->parsed()) {
    Run run("fig2", args, g, consts);
    run.flags()["field_min"] = f_min;
    run.flags()["field_max"] = f_max;
    Fig2Tables t = make_fig2(field_range(g, f_min, f_max), consts);
    run.write("fig2a.csv", t.a.str());
    run.write("fig2b.csv", t.b.str());
    run.write("fig2c.csv", t.c.str());
    run.write("fig2d.csv", t.d.str());
    run.finish();
  } else if (fig3->parsed()) {
    Run run("fig3", args, g, consts);
    run.flags()["field_min"] = f_min;
    run.flags()["field_max"] = f_max;
    Fig3Tables t = make_fig3(field_range(g, f_min, f_max), consts);
    run.write("fig3b.csv", t.b.str());
    run.write("fig3c.csv", t.c.str());
    run.write("fig3d.csv", t.d.str());
    run.write("fig3e.csv", t.e.str());
    run.finish();
  } else if (dec->parsed()) {
    Run run("decoherence", args, g, consts);
    const DjtParams djt(ups, alpha);
    const auto reg = regime == "general" ? BroadeningRegime::General : BroadeningRegime::LargeDjt;
    const BroadeningResult br = strain_broadening(delta_eps, djt, consts, reg);
    const double ds = delta_s >= 0.0 ? delta_s : br.delta_s;
    const StrainedNoise sn = strained_noise_spread(split, ds, djt, consts);
    json j;
    j["inputs"] = {{"delta_eps_GHz", delta_eps}, {"upsilon_GHz", ups}, {"alpha_deg", djt.alpha_deg()},
                   {"regime", regime},          {"splitting_GHz", split}, {"delta_s_GHz", ds}};
    j["kappa"] = br.kappa;
    j["broadening"] = broadening_json(br);
    j["strained_noise"] = {{"p", sn.p}, {"delta_p", sn.delta_p}, {"p_plus_delta_p", sn.p + sn.delta_p}};
    j["lifetime"] = json::array();
    for (double t : temps) {
      const LifetimeBound lb = lifetime_bound(split, t, ref, consts);
      j["lifetime"].push_back({{"temperature_K", t},
                               {"splitting_GHz", split},
                               {"tau_min_ns", lb.tau_min_ns},
                               {"bose_occupation", bose_occupation(t, split, consts)}});
    }
    j["reference"] = {{"tau_ref_us", ref.tau_ref_us}, {"s_ref_GHz", ref.s_ref}, {"t_ref_K", ref.t_ref},
                      {"chi_ratio", ref.chi_ratio}};
    if (mc_samples > 0) {
      const MonteCarloSpread m = monte_carlo_splitting_spread(mc_delta_e, mc_samples, g.seed, consts);
      j["monte_carlo"] = {{"delta_e", mc_delta_e}, {"samples", m.samples}, {"seed", g.seed},
                          {"delta_s_sampled_GHz", m.delta_s}, {"delta_s_isotropic_GHz", m.predicted}};
    }
    run.write_json("decoherence.json", j);
    run.finish();
  } else if (mem->parsed()) {
    Run run("memory", args, g, consts);
    mc.r_times_delta = r_times_delta_to_si(rtd_ghz);
    mc.wavelength = wavelength > 0.0 ? wavelength : control_wavelength(consts);
    mc.geometry = geometry == "waveguide" ? Geometry::Waveguide : Geometry::Bulk;
    const MemoryResult r = coupling_strength(mc);
    json j;
    j["inputs_si"] = {{"pulse_energy_J", mc.pulse_energy},
                      {"nv_density_per_m3", mc.nv_density},
                      {"detuning_Hz", mc.detuning},
                      {"r_times_delta_Hz2_m2_per_V2", mc.r_times_delta},
                      {"wavelength_m", mc.wavelength},
                      {"geometry", geometry_name(mc.geometry)},
                      {"width_m", mc.width},
                      {"length_m", mc.length}};
    j["coupling_strength"] = r.r;
    j["effective_length_m"] = r.effective_length;
    j["subwavelength"] = r.subwavelength;
    run.write_json("memory.json", j);
    run.finish();
  } else if (s_synth->parsed()) {
    Run run("spectro synth", args, g, consts);
    so.seed = g.seed;
    so.noisy = !noiseless;
    run.write("spectrum.csv", spectrum_to_csv(synth(so)));
    run.finish();
  } else if (s_fit->parsed()) {
    Run run("spectro fit", args, g, consts);
    const FitResult r = fit_single(read_spectrum_csv(input, fwhm));
    if (!r.converged) std::cerr << "nv0sim: warning: fit did not converge\n";
    run.write_json("fit_single.json", fit_json(r));
    run.finish();
  } else if (s_sweep->parsed()) {
    Run run("spectro sweep", args, g, consts);
    const Spectrum sp = read_spectrum_csv(input, fwhm);
    const SweepResult sw = fit_double_sweep(sp, splitting_grid(s_max, s_step));
    CsvTable t({"splitting_GHz", "relative_ssr", "fitted_sigma_GHz"});
    for (std::size_t i = 0; i < sw.fits.size(); ++i)
      t.row({format_double(sw.splittings[i]), format_double(sw.fits[i].ssr / sw.min_ssr),
             format_double(sw.fits[i].params.sigma)});
    json j;
    j["min_ssr"] = sw.min_ssr;
    j["best_splitting_GHz"] = sw.best_splitting;
    if (sw.bound) {
      const UpsilonBound ub = upsilon_bound(*sw.bound, consts);
      j["splitting_bound_GHz"] = *sw.bound;
      j["upsilon_bound_GHz"] = ub.upsilon;
      j["upsilon_clamped"] = ub.clamped;
    } else {
      j["splitting_bound_GHz"] = nullptr;
      j["note"] = "doublet resolved; bound not applicable";
    }
    run.write("fig5b.csv", t.str());
    run.write_json("sweep.json", j);
    run.finish();
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  try {
    return dispatch(args);
  } catch (const std::exception& e) {
    std::cerr << "nv0sim: error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, char** argv) { return run_cli(std::vector<std::string>(argv, argv + argc)); }

}  // namespace nv0
