#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace npn {

/// An n x p observation matrix with optional column labels.
struct DataMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> names;  // empty, or exactly p labels

  int n() const { return static_cast<int>(values.rows()); }
  int p() const { return static_cast<int>(values.cols()); }

  /// Label used in diagnostics: the stored name, else "col<j>".
  std::string col_label(int j) const {
    if (!names.empty() && j >= 0 && j < static_cast<int>(names.size())) return names[j];
    return "col" + std::to_string(j);
  }

  /// Enforces n >= 2, p >= 1, finite entries, and name/shape agreement.
  void validate() const {
    if (n() < 2) throw std::invalid_argument("DataMatrix: need at least 2 rows");
    if (p() < 1) throw std::invalid_argument("DataMatrix: need at least 1 column");
    if (!names.empty() && static_cast<int>(names.size()) != p())
      throw std::invalid_argument("DataMatrix: name count does not match column count");
    if (!values.allFinite()) throw std::invalid_argument("DataMatrix: non-finite entry");
  }
};

}  // namespace npn
