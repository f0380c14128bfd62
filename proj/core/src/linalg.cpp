#include "cinesim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cinesim {
namespace {

// Requires a.cols() <= a.rows().
ThinSvd jacobi_tall(const Matrix& a, double tol, int max_sweeps) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  Eigen::MatrixXd g = a;  // column-major for contiguous column access
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = g.col(p).squaredNorm();
        const double beta = g.col(q).squaredNorm();
        const double gamma = g.col(p).dot(g.col(q));
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index i = 0; i < m; ++i) {
          const double gp = g(i, p);
          const double gq = g(i, q);
          g(i, p) = c * gp - s * gq;
          g(i, q) = s * gp + c * gq;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const double vp = v(i, p);
          const double vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  Vector norms(n);
  for (Eigen::Index j = 0; j < n; ++j) norms(j) = g.col(j).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return norms(x) > norms(y); });

  ThinSvd out;
  out.u = Matrix::Zero(m, n);
  out.s = Vector::Zero(n);
  out.v = Matrix::Zero(n, n);
  const double smax = n > 0 ? norms(order[0]) : 0.0;
  const double cutoff = smax * static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    if (norms(src) > cutoff && norms(src) > 0.0) {
      out.v.col(j) = v.col(src);
      out.s(j) = norms(src);
      out.u.col(j) = g.col(src) / norms(src);
      ++out.rank;
    }
  }
  return out;
}

}  // namespace

ThinSvd jacobi_svd(const Matrix& a, double tol, int max_sweeps) {
  if (a.cols() <= a.rows()) return jacobi_tall(a, tol, max_sweeps);
  ThinSvd t = jacobi_tall(a.transpose(), tol, max_sweeps);
  ThinSvd out;
  out.u = std::move(t.v);
  out.v = std::move(t.u);
  out.s = std::move(t.s);
  out.rank = t.rank;
  return out;
}

}  // namespace cinesim
