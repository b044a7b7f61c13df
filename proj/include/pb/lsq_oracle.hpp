#pragma once

// Direct minimum-norm least-squares solve via a rank-revealing complete
// orthogonal decomposition. This is the ground truth the iteration is
// checked against, deliberately computed by an unrelated route. Only the
// test binaries include this header; it is the one place Eigen is used.

#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "pb/bspline.hpp"

namespace pb {

inline persistence_vector min_norm_lsq(const basis_matrix& B, std::span<const double> Z)
{
    if (Z.size() != B.rows()) throw std::invalid_argument("min_norm_lsq: size mismatch");
    if (B.rows() > 2000 || B.cols() > 2000)
        throw std::runtime_error("min_norm_lsq: dense solve limited to 2000x2000");

    const auto dense = B.dense();
    Eigen::MatrixXd A(B.rows(), B.cols());
    for (std::size_t l = 0; l < B.rows(); ++l)
        for (int c = 0; c < B.cols(); ++c)
            A(static_cast<Eigen::Index>(l), c) = dense[l * B.cols() + c];
    Eigen::VectorXd b(Z.size());
    for (std::size_t l = 0; l < Z.size(); ++l) b(static_cast<Eigen::Index>(l)) = Z[l];

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    const Eigen::VectorXd x = cod.solve(b);

    persistence_vector v;
    v.h = B.h();
    v.values.assign(x.data(), x.data() + x.size());
    return v;
}

} // namespace pb
