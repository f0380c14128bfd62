#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace cinesim {

/// Dense row-major matrix; rows are movies (documents, frames) throughout.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// N x D per-modality movie representation.
struct FeatureMatrix {
  std::string modality;
  std::vector<std::string> doc_ids;
  Matrix values;
};

}  // namespace cinesim
