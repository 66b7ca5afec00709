#include <vector>

#include <Eigen/Dense>

namespace webgeo {

/// Numeric rank of a small dense matrix given as rows, with the singular
/// value cutoff max(1e-8 * sigma_max, 1e-12).
int numeric_rank(const std::vector<std::vector<double>>& rows,
                 double* sigma_max) {
  if (rows.empty() || rows.front().empty()) {
    if (sigma_max) *sigma_max = 0.0;
    return 0;
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  double top = sv.size() ? sv(0) : 0.0;
  if (sigma_max) *sigma_max = top;
  double cutoff = std::max(1e-8 * top, 1e-12);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

}  // namespace webgeo
