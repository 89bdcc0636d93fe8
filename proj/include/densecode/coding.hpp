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

// Sender-side encodings: Pauli set for qubits, Weyl shift/clock family for
// qudits, identity-padded embeddings into a larger local space.

#include <array>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "densecode/qmath.hpp"
#include "densecode/states.hpp"

namespace densecode {

/// Message (m, n) with 0 <= m, n < d; flattened as m*d + n everywhere.
struct MessageIndex {
    int m = 0;
    int n = 0;

    int flat(int d) const { return m * d + n; }
    static MessageIndex from_flat(int index, int d) { return {index / d, index % d}; }

    friend bool operator==(const MessageIndex&, const MessageIndex&) = default;
};

template <typename Scalar = double>
struct EncodingOperator {
    MessageIndex label;
    Operator<Scalar> matrix;

    Eigen::Index dim() const { return matrix.rows(); }
};

namespace detail {

/// exp(2 pi i k / d) with k reduced mod d first.
template <typename Scalar>
Complex<Scalar> root_of_unity(long long k, int d) {
    k %= d;
    if (k < 0) k += d;
    if (k == 0) return Complex<Scalar>(1);
    if (2 * k == d) return Complex<Scalar>(-1);
    const Scalar angle = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(k) / Scalar(d);
    return std::polar(Scalar(1), angle);
}

inline void require_dimension(int d, const char* who) {
    if (d < 2) {
        std::ostringstream os;
        os << who << ": dimension " << d << " < 2";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace detail

/// {I, sigma_x, i sigma_y, sigma_z}, labelled (0,0), (1,0), (1,1), (0,1).
template <typename Scalar = double>
std::array<EncodingOperator<Scalar>, 4> pauli_encodings() {
    using C = Complex<Scalar>;
    Operator<Scalar> id = identity<Scalar>(2);
    Operator<Scalar> x(2, 2), iy(2, 2), z(2, 2);
    x << C(0), C(1), C(1), C(0);
    iy << C(0), C(1), C(-1), C(0);
    z << C(1), C(0), C(0), C(-1);
    return {{{{0, 0}, id}, {{1, 0}, x}, {{1, 1}, iy}, {{0, 1}, z}}};
}

/// Cyclic shift U|k> = |k+1 mod d>.
template <typename Scalar = double>
Operator<Scalar> shift_op(int d) {
    detail::require_dimension(d, "shift_op");
    Operator<Scalar> u = Operator<Scalar>::Zero(d, d);
    for (int k = 0; k < d; ++k) u((k + 1) % d, k) = Complex<Scalar>(1);
    return u;
}

/// Clock V|k> = exp(2 pi i k/d)|k>.
template <typename Scalar = double>
Operator<Scalar> clock_op(int d) {
    detail::require_dimension(d, "clock_op");
    Operator<Scalar> v = Operator<Scalar>::Zero(d, d);
    for (int k = 0; k < d; ++k) v(k, k) = detail::root_of_unity<Scalar>(k, d);
    return v;
}

/// U^m V^n, which maps |k> to exp(2 pi i n k/d)|k+m mod d>.
template <typename Scalar = double>
EncodingOperator<Scalar> weyl(int m, int n, int d) {
    detail::require_dimension(d, "weyl");
    if (m < 0 || m >= d || n < 0 || n >= d) {
        std::ostringstream os;
        os << "weyl: indices (" << m << ", " << n << ") out of range for d = " << d;
        throw std::out_of_range(os.str());
    }
    Operator<Scalar> w = Operator<Scalar>::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        w((k + m) % d, k) = detail::root_of_unity<Scalar>(static_cast<long long>(n) * k, d);
    }
    return {{m, n}, std::move(w)};
}

/// All d^2 Weyl operators in flat order m*d + n.
template <typename Scalar = double>
std::vector<EncodingOperator<Scalar>> weyl_family(int d) {
    std::vector<EncodingOperator<Scalar>> ops;
    ops.reserve(static_cast<std::size_t>(d) * d);
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) ops.push_back(weyl<Scalar>(m, n, d));
    }
    return ops;
}

/// Acts as `op` on span{|0>..|d-1>} and as the identity on the remaining
/// D - d basis states.
template <typename Scalar>
EncodingOperator<Scalar> embed_encoding(const EncodingOperator<Scalar>& op, Eigen::Index D) {
    const Eigen::Index d = op.dim();
    if (D < d) {
        std::ostringstream os;
        os << "embed_encoding: target dimension " << D << " < operator dimension " << d;
        throw std::invalid_argument(os.str());
    }
    Operator<Scalar> big = identity<Scalar>(D);
    big.topLeftCorner(d, d) = op.matrix;
    return {op.label, std::move(big)};
}

/// (E (x) I)|v> for an encoding E on the first factor of H^D (x) H^D.
template <typename Scalar>
StateVector<Scalar> encode(const EncodingOperator<Scalar>& op, const StateVector<Scalar>& shared) {
    const Eigen::Index D = op.dim();
    if (shared.size() != D * D) {
        std::ostringstream os;
        os << "encode: operator of size " << D << " does not act on a state of dimension "
           << shared.size();
        throw std::invalid_argument(os.str());
    }
    return apply<Scalar>(kron(op.matrix, identity<Scalar>(D)), shared);
}

/// The d^2 states (U_mn (x) I)|Psi>, with U_mn embedded when D > d.
template <typename Scalar = double>
struct EncodedFamily {
    int d = 0;
    int D = 0;
    std::vector<StateVector<Scalar>> states;

    const StateVector<Scalar>& operator()(int m, int n) const { return states[MessageIndex{m, n}.flat(d)]; }
    std::size_t size() const { return states.size(); }

    /// States as columns, in flat message order.
    Operator<Scalar> as_matrix() const {
        Operator<Scalar> s(static_cast<Eigen::Index>(D) * D, static_cast<Eigen::Index>(states.size()));
        for (std::size_t i = 0; i < states.size(); ++i) s.col(static_cast<Eigen::Index>(i)) = states[i];
        return s;
    }
};

template <typename Scalar>
EncodedFamily<Scalar> encode_family(const SchmidtState<Scalar>& shared, int d) {
    detail::require_dimension(d, "encode_family");
    const int D = static_cast<int>(shared.dim());
    if (D < d) {
        std::ostringstream os;
        os << "encode_family: resource dimension " << D << " < message dimension " << d;
        throw std::invalid_argument(os.str());
    }
    const StateVector<Scalar> psi = schmidt_form(shared);
    EncodedFamily<Scalar> family{d, D, {}};
    family.states.reserve(static_cast<std::size_t>(d) * d);
    for (const auto& op : weyl_family<Scalar>(d)) {
        family.states.push_back(encode(embed_encoding(op, D), psi));
    }
    return family;
}

}  // namespace densecode
