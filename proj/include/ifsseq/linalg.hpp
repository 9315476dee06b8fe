#pragma once

#include <Eigen/Dense>

namespace ifsseq {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Largest singular value of a square matrix, i.e. the Lipschitz constant of
/// x -> Ax under the Euclidean norm. Closed form for d <= 2; for larger d the
/// largest eigenvalue of A^T A is found by a symmetric eigen-solve.
double spectral_norm(const Matrix& a);

/// Returns A with every singular value above `cap` replaced by `cap`.
Matrix clamp_singular_values(const Matrix& a, double cap);

} // namespace ifsseq
