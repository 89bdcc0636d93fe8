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

// Shared bipartite resources: the two-qubit NME basis, Schmidt-form states and
// their decomposition, and entanglement entropy.

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "densecode/qmath.hpp"

namespace densecode {

inline constexpr double kSpectrumTol = 1e-9;

/// Throws unless `spectrum` is a probability vector (entries >= 0, sum 1
/// within tol). Entries in [-tol, 0) are treated as rounding and accepted.
template <typename Scalar>
void validate_spectrum(const RealVector<Scalar>& spectrum, double tol = kSpectrumTol) {
    if (spectrum.size() == 0) {
        throw std::invalid_argument("spectrum is empty");
    }
    for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
        const double pk = static_cast<double>(spectrum(k));
        if (!std::isfinite(pk) || pk < -tol) {
            std::ostringstream os;
            os << "spectrum entry " << k << " = " << pk << " is not a probability";
            throw std::invalid_argument(os.str());
        }
    }
    const double total = static_cast<double>(spectrum.sum());
    if (std::abs(total - 1.0) > tol) {
        std::ostringstream os;
        os << "spectrum sums to " << total << ", expected 1";
        throw std::invalid_argument(os.str());
    }
}

/// Bipartite pure state sum_k sqrt(p_k)|k>|k> stored by its Schmidt
/// probabilities. Index order is preserved as given, never sorted.
template <typename Scalar = double>
class SchmidtState {
public:
    static SchmidtState from_spectrum(RealVector<Scalar> spectrum, double tol = kSpectrumTol) {
        validate_spectrum(spectrum, tol);
        spectrum = spectrum.cwiseMax(Scalar(0));
        spectrum /= spectrum.sum();
        return SchmidtState(std::move(spectrum));
    }

    /// Maximally entangled state of local dimension dim.
    static SchmidtState uniform(Eigen::Index dim) {
        if (dim < 1) throw std::invalid_argument("SchmidtState::uniform: dim must be positive");
        return SchmidtState(RealVector<Scalar>::Constant(dim, Scalar(1) / Scalar(dim)));
    }

    /// Normalized qubit channel L(|00> + ell|11>): spectrum (L^2, L^2 |ell|^2).
    static SchmidtState qubit(Scalar ell) {
        const Scalar norm2 = Scalar(1) + ell * ell;
        RealVector<Scalar> s(2);
        s << Scalar(1) / norm2, ell * ell / norm2;
        return SchmidtState(std::move(s));
    }

    Eigen::Index dim() const { return spectrum_.size(); }
    const RealVector<Scalar>& spectrum() const { return spectrum_; }
    Scalar operator[](Eigen::Index k) const { return spectrum_(k); }

    bool is_maximally_entangled(double tol = 1e-12) const {
        return (spectrum_.array() - Scalar(1) / Scalar(dim())).abs().maxCoeff() <= tol;
    }

private:
    explicit SchmidtState(RealVector<Scalar> spectrum) : spectrum_(std::move(spectrum)) {}

    RealVector<Scalar> spectrum_;
};

/// Four mutually orthonormal two-qubit vectors, interpolating between the
/// computational basis (ell = p = 0) and the Bell basis (ell = p = 1):
///   psi1 = L (|00> + ell |11>),   psi2 = L (ell* |00> - |11>),
///   psi3 = P (|01> + p |10>),     psi4 = P (p* |01> - |10>),
/// with L = 1/sqrt(1+|ell|^2), P = 1/sqrt(1+|p|^2). Index of |ab> is 2a+b.
template <typename Scalar = double>
struct NmeBasis {
    Complex<Scalar> ell;
    Complex<Scalar> p;
    std::array<StateVector<Scalar>, 4> vectors;

    /// Sum_i |psi_i><psi_i|; equals I_4 for every (ell, p).
    Operator<Scalar> completeness() const {
        Operator<Scalar> acc = Operator<Scalar>::Zero(4, 4);
        for (const auto& v : vectors) acc += v * v.adjoint();
        return acc;
    }
};

template <typename Scalar = double>
NmeBasis<Scalar> nme_basis(Complex<Scalar> ell, Complex<Scalar> p) {
    const Scalar L = Scalar(1) / std::sqrt(Scalar(1) + std::norm(ell));
    const Scalar P = Scalar(1) / std::sqrt(Scalar(1) + std::norm(p));
    NmeBasis<Scalar> basis{ell, p, {}};
    for (auto& v : basis.vectors) v = StateVector<Scalar>::Zero(4);
    basis.vectors[0](0) = L;
    basis.vectors[0](3) = L * ell;
    basis.vectors[1](0) = L * std::conj(ell);
    basis.vectors[1](3) = -L;
    basis.vectors[2](1) = P;
    basis.vectors[2](2) = P * p;
    basis.vectors[3](1) = P * std::conj(p);
    basis.vectors[3](2) = -P;
    return basis;
}

/// Schmidt form sum_k sqrt(p_k)|k>|k> in H^d (x) H^d; amplitude at k*d+k.
template <typename Scalar = double>
StateVector<Scalar> schmidt_form(const RealVector<Scalar>& spectrum) {
    validate_spectrum(spectrum);
    const Eigen::Index d = spectrum.size();
    StateVector<Scalar> v = StateVector<Scalar>::Zero(d * d);
    for (Eigen::Index k = 0; k < d; ++k) {
        v(k * d + k) = std::sqrt(std::max(spectrum(k), Scalar(0)));
    }
    return v;
}

template <typename Scalar = double>
StateVector<Scalar> schmidt_form(const SchmidtState<Scalar>& state) {
    return schmidt_form(state.spectrum());
}

/// v = sum_k coefficients(k) * basis_a.col(k) (x) basis_b.col(k), with
/// coefficients in descending order (SVD convention).
template <typename Scalar = double>
struct SchmidtDecomposition {
    RealVector<Scalar> coefficients;
    Operator<Scalar> basis_a;
    Operator<Scalar> basis_b;

    RealVector<Scalar> spectrum() const { return coefficients.array().square().matrix(); }

    SchmidtState<Scalar> schmidt_state() const { return SchmidtState<Scalar>::from_spectrum(spectrum()); }

    StateVector<Scalar> reconstruct() const {
        const Eigen::Index da = basis_a.rows();
        const Eigen::Index db = basis_b.rows();
        StateVector<Scalar> v = StateVector<Scalar>::Zero(da * db);
        for (Eigen::Index k = 0; k < coefficients.size(); ++k) {
            v += coefficients(k) * kron(basis_a.col(k), basis_b.col(k));
        }
        return v;
    }
};

/// SVD of the dim_a x dim_b coefficient matrix C(i, j) = v(i*dim_b + j).
template <typename Scalar>
SchmidtDecomposition<Scalar> schmidt_decompose(const StateVector<Scalar>& v, Eigen::Index dim_a,
                                               Eigen::Index dim_b) {
    if (dim_a < 1 || dim_b < 1 || dim_a * dim_b != v.size()) {
        std::ostringstream os;
        os << "schmidt_decompose: " << dim_a << " x " << dim_b << " does not match state dimension "
           << v.size();
        throw std::invalid_argument(os.str());
    }
    Operator<Scalar> coeff(dim_a, dim_b);
    for (Eigen::Index i = 0; i < dim_a; ++i) {
        for (Eigen::Index j = 0; j < dim_b; ++j) coeff(i, j) = v(i * dim_b + j);
    }
    Eigen::JacobiSVD<Operator<Scalar>> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
    // C = U S V^dagger  =>  v = sum_k s_k u_k (x) conj(v_k)
    return {svd.singularValues(), svd.matrixU(), svd.matrixV().conjugate()};
}

/// -sum_k p_k log2 p_k, with 0 log 0 = 0.
template <typename Scalar>
Scalar entanglement_entropy(const SchmidtState<Scalar>& state) {
    Scalar h = 0;
    for (Eigen::Index k = 0; k < state.dim(); ++k) {
        const Scalar pk = state[k];
        if (pk > Scalar(0)) h -= pk * std::log2(pk);
    }
    return std::max(h, Scalar(0));
}

/// Entropy of entanglement of a pure bipartite state given as a vector.
template <typename Scalar>
Scalar entanglement_entropy(const StateVector<Scalar>& v, Eigen::Index dim_a, Eigen::Index dim_b) {
    return entanglement_entropy(schmidt_decompose(v, dim_a, dim_b).schmidt_state());
}

/// Closed forms for the NME basis: -L^2 log2 L^2 - L^2|ell|^2 log2 (L^2|ell|^2)
/// for psi1, psi2 and the same in p for psi3, psi4.
template <typename Scalar>
std::array<Scalar, 4> nme_entropies(Complex<Scalar> ell, Complex<Scalar> p) {
    auto binary = [](Complex<Scalar> x) {
        return entanglement_entropy(SchmidtState<Scalar>::qubit(std::abs(x)));
    };
    const Scalar el = binary(ell);
    const Scalar ep = binary(p);
    return {el, el, ep, ep};
}

}  // namespace densecode
