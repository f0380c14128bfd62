#pragma once

#include "cinesim/types.hpp"

namespace cinesim {

/// Thin SVD a = u * diag(s) * v^T with r = min(rows, cols) components,
/// singular values non-increasing. Columns belonging to numerically zero
/// singular values are zero; `rank` counts the others.
struct ThinSvd {
  Matrix u;  // rows x r
  Vector s;  // r
  Matrix v;  // cols x r
  Eigen::Index rank = 0;
};

/// One-sided (Hestenes) Jacobi SVD. Orthogonalizes the columns of the
/// narrower orientation by plane rotations until every column pair satisfies
/// |<g_p, g_q>| <= tol * |g_p| |g_q|; singular values come out with high
/// relative accuracy.
ThinSvd jacobi_svd(const Matrix& a, double tol = 1e-15, int max_sweeps = 60);

}  // namespace cinesim
