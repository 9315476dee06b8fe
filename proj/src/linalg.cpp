#include "ifsseq/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "ifsseq/error.hpp"

namespace ifsseq {

double spectral_norm(const Matrix& a)
{
    if (a.rows() != a.cols())
        throw InputError("spectral_norm: matrix must be square");
    const auto d = a.rows();
    if (d == 0)
        return 0.0;
    if (d == 1)
        return std::abs(a(0, 0));
    if (d == 2) {
        // sigma_max^2 = (F + sqrt(F^2 - 4 det^2)) / 2 with F the squared Frobenius norm.
        const double f = a.squaredNorm();
        const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        const double disc = std::max(0.0, f * f - 4.0 * det * det);
        return std::sqrt(0.5 * (f + std::sqrt(disc)));
    }
    const Matrix gram = a.transpose() * a;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw Error("spectral_norm: eigen-solve did not converge");
    return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

Matrix clamp_singular_values(const Matrix& a, double cap)
{
    if (a.rows() == 1 && a.cols() == 1) {
        Matrix out = a;
        out(0, 0) = std::clamp(a(0, 0), -cap, cap);
        return out;
    }
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Vector s = svd.singularValues();
    if (s.size() == 0 || s.maxCoeff() <= cap)
        return a;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        s[i] = std::min(s[i], cap);
    return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

} // namespace ifsseq
