// Copyright 2026 The densecode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace densecode {

template <typename Scalar = double>
using Complex = std::complex<Scalar>;

/// Ket in a finite-dimensional Hilbert space.
template <typename Scalar = double>
using StateVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

/// Dense complex matrix. Specializations (unitary, Hermitian, positive) are
/// properties checked by the helpers below, not separate types.
template <typename Scalar = double>
using Operator = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar = double>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

template <typename Scalar>
Operator<Scalar> identity(Eigen::Index n) {
    return Operator<Scalar>::Identity(n, n);
}

/// Computational basis ket |index> of dimension dim.
template <typename Scalar = double>
StateVector<Scalar> basis_ket(Eigen::Index dim, Eigen::Index index) {
    if (index < 0 || index >= dim) {
        throw std::out_of_range("basis_ket: index out of range");
    }
    StateVector<Scalar> v = StateVector<Scalar>::Zero(dim);
    v(index) = Complex<Scalar>(1);
    return v;
}

/// Kronecker product. Entry (i*b.rows()+k, j*b.cols()+l) is a(i,j)*b(k,l).
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    using Result = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index br = b.rows();
    const Eigen::Index bc = b.cols();
    Result out(a.rows() * br, a.cols() * bc);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * br, j * bc, br, bc) = a(i, j) * b;
        }
    }
    return out;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kHermitianTol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m, double tol = 1e-10) {
    if (m.rows() != m.cols()) return false;
    const auto eye = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(
        m.rows(), m.cols());
    return (m * m.adjoint() - eye).cwiseAbs().maxCoeff() <= tol;
}

namespace detail {

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& m, const char* who) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << who << ": matrix is " << m.rows() << "x" << m.cols() << ", expected square";
        throw std::invalid_argument(os.str());
    }
    if (m.size() == 0) return;
    const double asym = static_cast<double>((m - m.adjoint()).cwiseAbs().maxCoeff());
    if (!(asym <= kHermitianTol)) {
        std::ostringstream os;
        os << who << ": matrix is not Hermitian (max |m - m^dagger| = " << asym << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace detail

/// Eigenvalues of a Hermitian matrix in ascending order.
template <typename Derived>
Eigen::Matrix<typename Eigen::NumTraits<typename Derived::Scalar>::Real, Eigen::Dynamic, 1>
hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
    using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    detail::require_hermitian(m, "hermitian_eigenvalues");
    Plain h = (m + m.adjoint()) / 2;
    Eigen::SelfAdjointEigenSolver<Plain> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eigenvalues: eigensolver did not converge");
    }
    return solver.eigenvalues();
}

/// Full eigensystem (ascending eigenvalues, orthonormal eigenvector columns).
template <typename Derived>
auto hermitian_eigensystem(const Eigen::MatrixBase<Derived>& m) {
    using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    detail::require_hermitian(m, "hermitian_eigensystem");
    Plain h = (m + m.adjoint()) / 2;
    Eigen::SelfAdjointEigenSolver<Plain> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eigensystem: eigensolver did not converge");
    }
    return solver;
}

template <typename Derived>
auto min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
    return hermitian_eigenvalues(m).minCoeff();
}

/// Positive semidefiniteness: lambda_min >= -tol * max(1, ||m||_2).
template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& m, double tol = kPsdTol) {
    if (m.size() == 0) {
        detail::require_hermitian(m, "is_psd");
        return true;
    }
    const auto evals = hermitian_eigenvalues(m);
    const double lo = static_cast<double>(evals.minCoeff());
    const double norm = std::max(std::abs(lo), std::abs(static_cast<double>(evals.maxCoeff())));
    return lo >= -tol * std::max(1.0, norm);
}

/// op * v with a dimension check.
template <typename Scalar>
StateVector<Scalar> apply(const Operator<Scalar>& op, const StateVector<Scalar>& v) {
    if (op.cols() != v.size()) {
        std::ostringstream os;
        os << "apply: operator has " << op.cols() << " columns, state has dimension " << v.size();
        throw std::invalid_argument(os.str());
    }
    return op * v;
}

template <typename Scalar>
bool is_normalized(const StateVector<Scalar>& v, double tol = 1e-10) {
    return std::abs(static_cast<double>(v.squaredNorm()) - 1.0) <= tol;
}

/// |<a|b>| == 1, i.e. equal up to a global phase.
template <typename Scalar>
bool equal_up_to_phase(const StateVector<Scalar>& a, const StateVector<Scalar>& b, double tol = 1e-10) {
    if (a.size() != b.size()) return false;
    return std::abs(static_cast<double>(std::abs(a.dot(b))) - 1.0) <= tol &&
           std::abs(static_cast<double>(a.squaredNorm()) - 1.0) <= tol &&
           std::abs(static_cast<double>(b.squaredNorm()) - 1.0) <= tol;
}

}  // namespace densecode
