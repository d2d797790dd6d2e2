/// @file sparse_direct.hpp
/// @brief Shared sparse LU front end (UMFPACK when available, Eigen
///        SparseLU otherwise). Internal to the library sources.

#pragma once

#include "poros/errors.hpp"

#include <Eigen/SparseCore>
#ifdef POROS_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#else
#include <Eigen/SparseLU>
#endif

namespace poros::detail {

inline Eigen::VectorXd sparse_lu_solve(const Eigen::SparseMatrix<double>& A,
                                       const Eigen::VectorXd& b) {
#ifdef POROS_HAVE_UMFPACK
    Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw SolverError("sparse LU factorization failed");
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success)
        throw SolverError("sparse LU solve failed");
#else
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw SolverError("sparse LU factorization failed: " +
                          std::string(lu.lastErrorMessage()));
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success)
        throw SolverError("sparse LU solve failed");
#endif
    return x;
}

} // namespace poros::detail
