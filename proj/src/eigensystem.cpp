#include "nv0/eigensystem.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "nv0/errors.hpp"

namespace nv0 {

using cd = std::complex<double>;

NonHermitianError::NonHermitianError(double max_asym, double tolerance)
    : Error("matrix is not Hermitian: max |H - H^dagger| = " + std::to_string(max_asym) +
            " exceeds " + std::to_string(tolerance)),
      max_asymmetry_(max_asym) {}

std::string basis_name(Basis b) {
  switch (b) {
    case Basis::Generic: return "generic";
    case Basis::NV0Ground: return "nv0_ground{Ex_up,Ex_dn,Ey_up,Ey_dn}";
    case Basis::NV0Excited: return "nv0_excited{A1_up,A1_dn}";
    case Basis::NVmGround: return "nvm_ground{A2_0,A2_+1,A2_-1}";
    case Basis::NVmExcited: return "nvm_excited{Ex_0,Ex_+1,Ex_-1,Ey_0,Ey_+1,Ey_-1}";
  }
  return "unknown";
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> EigenSystem::clusters() const {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  Eigen::Index b = 0;
  for (Eigen::Index i = 1; i <= values.size(); ++i) {
    if (i == values.size() || values(i) - values(i - 1) > degeneracy_tol) {
      out.emplace_back(b, i);
      b = i;
    }
  }
  return out;
}

double max_asymmetry(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) throw InvalidArgument("matrix must be square");
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

void fix_phases(Eigen::MatrixXcd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      double m = std::abs(vectors(i, j));
      if (m > 1e-8) {
        vectors.col(j) *= std::conj(vectors(i, j)) / m;
        vectors(i, j) = m;
        break;
      }
    }
  }
}

EigenSystem diagonalize(const Eigen::MatrixXcd& h, Basis basis, double hermitian_tol) {
  if (h.rows() != h.cols() || h.rows() == 0) throw InvalidArgument("matrix must be square and non-empty");
  if (!h.allFinite()) throw InvalidArgument("matrix has non-finite entries");
  double asym = max_asymmetry(h);
  if (asym > hermitian_tol) throw NonHermitianError(asym, hermitian_tol);

  const Eigen::Index n = h.rows();
  Eigen::MatrixXcd a = 0.5 * (h + h.adjoint());
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  const double scale = std::max(a.norm(), 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-15 * scale) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r <= 1e-300) continue;
        const cd phase = a(p, q) / r;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * r, aqq - app);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane
        const cd jpp = c, jpq = s;
        const cd jqp = -s * std::conj(phase), jqq = c * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {
          cd akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          cd apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          cd vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });

  EigenSystem es;
  es.basis = basis;
  es.values.resize(n);
  es.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    es.values(i) = a(order[i], order[i]).real();
    es.vectors.col(i) = v.col(order[i]);
  }
  fix_phases(es.vectors);
  return es;
}

void align_degenerate(EigenSystem& es, const Eigen::MatrixXcd& op) {
  if (op.rows() != es.vectors.rows() || op.cols() != es.vectors.rows())
    throw InvalidArgument("operator dimension does not match eigensystem");
  for (auto [b, e] : es.clusters()) {
    const Eigen::Index k = e - b;
    if (k < 2) continue;
    Eigen::MatrixXcd block = es.vectors.middleCols(b, k);
    Eigen::MatrixXcd sub = block.adjoint() * op * block;
    EigenSystem inner = diagonalize(sub, Basis::Generic, 1e-6);
    // descending projection: spin up first
    Eigen::MatrixXcd w = inner.vectors.rowwise().reverse();
    es.vectors.middleCols(b, k) = block * w;
  }
  fix_phases(es.vectors);
}

}  // namespace nv0
