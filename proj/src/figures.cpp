#include "nv0/figures.hpp"

#include <cmath>

#include "nv0/errors.hpp"
#include "nv0/optics.hpp"

namespace nv0 {

std::vector<DjtCase> caption_cases() {
  return {
      {"U0", DjtParams(0.0, 0.0)},
      {"U12_a0", DjtParams(kUpsilonBoundGhz, 0.0)},
      {"U12_a90", DjtParams(kUpsilonBoundGhz, 90.0)},
      {"U12_a-90", DjtParams(kUpsilonBoundGhz, -90.0)},
      {"U12_a180", DjtParams(kUpsilonBoundGhz, 180.0)},
  };
}

TransitionOptics evaluate_point(const Eigen::Vector3d& field_lab, const NvOrientation& orient, const DjtParams& djt,
                                const PhysicalConstants& consts, const Eigen::Vector3d& axis_a,
                                const Eigen::Vector3d& axis_b) {
  const FieldNV f = lab_field_to_nv(field_lab, orient);
  const EigenSystem g = diagonalize_ground(build_ground(djt, f, {}, consts));
  const EigenSystem e = diagonalize_excited(build_excited(f, {}, consts));
  const DipoleSet ds = dipole_set_nv0(consts);
  const Eigen::Vector3d a = lab_to_nv(axis_a, orient);
  const Eigen::Vector3d b = lab_to_nv(axis_b, orient);

  TransitionOptics t;
  t.e_lower = g.values(0);
  t.e_upper = g.values(2);
  t.splitting = ground_splitting(g);
  t.degree_lower = polarization_degree(g.vectors.col(0), e, ds, a, b);
  t.degree_upper = polarization_degree(g.vectors.col(2), e, ds, a, b);
  t.abs_r_times_delta = std::abs(raman_coupling(g, e, ds, b, a, kFigureDetuning).r_times_delta);
  t.p = noise_suppression(g, ds, a).p;
  return t;
}

Fig2Tables make_fig2(const FieldRange& range, const PhysicalConstants& consts) {
  range.validate();
  const NvOrientation& o = orientation(Orientation::N111);
  const Eigen::Vector3d dir = o.rotation.row(0).transpose();
  const Eigen::Vector3d ax = o.rotation.row(0).transpose();
  const Eigen::Vector3d ay = o.rotation.row(1).transpose();
  Fig2Tables t;
  for (const auto& c : caption_cases()) {
    for (std::size_t i = 0; i < range.points; ++i) {
      const double fv = range.at(i);
      const TransitionOptics p = evaluate_point(fv * dir, o, c.djt, consts, ax, ay);
      const std::string f = format_double(fv);
      t.a.row({f, format_double(p.e_lower), format_double(p.e_upper), c.label});
      t.b.row({f, format_double(p.degree_lower), format_double(p.degree_upper), c.label});
      t.c.row({f, format_double(p.abs_r_times_delta), c.label});
      t.d.row({f, format_double(p.splitting), format_double(p.p), c.label});
    }
  }
  return t;
}

Fig3Tables make_fig3(const FieldRange& range, const PhysicalConstants& consts) {
  range.validate();
  const Eigen::Vector3d dir(1, 0, 0);
  const Eigen::Vector3d ax(1, 0, 0);
  const Eigen::Vector3d ay(0, 1, 0);
  const auto& orients = all_orientations();
  Fig3Tables t;
  for (const auto& c : caption_cases()) {
    for (std::size_t i = 0; i < range.points; ++i) {
      const double fv = range.at(i);
      const std::string f = format_double(fv);
      TransitionOptics mean;
      for (const auto& o : orients) {
        const TransitionOptics p = evaluate_point(fv * dir, o, c.djt, consts, ax, ay);
        t.b.row({f, format_double(p.e_lower), format_double(p.e_upper), c.label, o.label});
        t.c.row({f, format_double(p.degree_lower), format_double(p.degree_upper), c.label, o.label});
        t.d.row({f, format_double(p.abs_r_times_delta), c.label, o.label});
        t.e.row({f, format_double(p.splitting), format_double(p.p), c.label, o.label});
        mean.e_lower += p.e_lower / 4.0;
        mean.e_upper += p.e_upper / 4.0;
        mean.degree_lower += p.degree_lower / 4.0;
        mean.degree_upper += p.degree_upper / 4.0;
        mean.abs_r_times_delta += p.abs_r_times_delta / 4.0;
        mean.splitting += p.splitting / 4.0;
      }
      const NoiseFactor nf = ensemble_noise(fv * dir, orients, c.djt, consts, ax);
      t.b.row({f, format_double(mean.e_lower), format_double(mean.e_upper), c.label, "all"});
      t.c.row({f, format_double(mean.degree_lower), format_double(mean.degree_upper), c.label, "all"});
      t.d.row({f, format_double(mean.abs_r_times_delta), c.label, "all"});
      t.e.row({f, format_double(mean.splitting), format_double(nf.p), c.label, "all"});
    }
  }
  return t;
}

double ensemble_field_for_splitting(double s, const DjtParams& djt, const PhysicalConstants& consts) {
  if (!(s > 0.0)) throw InvalidArgument("target splitting must be positive");
  const Eigen::Vector3d dir(1, 0, 0);
  auto mean_gap = [&](double f) {
    double m = 0.0;
    for (const auto& o : all_orientations())
      m += ground_splitting(diagonalize_ground(build_ground(djt, lab_field_to_nv(f * dir, o), {}, consts))) / 4.0;
    return m;
  };
  // the mean gap is eventually increasing; bracket from above then bisect
  // on the last upward crossing
  double hi = 1.0;
  while (mean_gap(hi) < s) {
    hi *= 2.0;
    if (hi > 1e9) throw BracketingError("splitting not reached");
  }
  double lo = hi;
  while (lo > 0.0 && mean_gap(lo) >= s) lo = (lo < 1e-6) ? 0.0 : lo / 2.0;
  if (mean_gap(lo) >= s) throw InvalidArgument("splitting is exceeded already at zero field");
  for (int k = 0; k < 200 && hi - lo > 1e-14 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (mean_gap(mid) >= s ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace nv0
