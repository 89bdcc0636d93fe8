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

// Receiver-side mathematics: Gram matrices, the feasibility condition for
// unambiguous discrimination, closed-form average-success bounds, and the
// measurements that realize them.

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "densecode/coding.hpp"
#include "densecode/qmath.hpp"
#include "densecode/states.hpp"

namespace densecode {

/// Matrix of pairwise inner products G(i, j) = <psi_i|psi_j>.
template <typename Scalar = double>
class GramMatrix {
public:
    explicit GramMatrix(Operator<Scalar> entries) : entries_(std::move(entries)) {
        detail::require_hermitian(entries_, "GramMatrix");
    }

    Eigen::Index size() const { return entries_.rows(); }
    const Operator<Scalar>& matrix() const { return entries_; }
    Complex<Scalar> operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

    RealVector<Scalar> eigenvalues() const { return hermitian_eigenvalues(entries_); }
    Scalar min_eigenvalue() const { return eigenvalues().minCoeff(); }

    /// Principal block [first, first + count).
    GramMatrix block(Eigen::Index first, Eigen::Index count) const {
        return GramMatrix(entries_.block(first, first, count, count));
    }

private:
    Operator<Scalar> entries_;
};

template <typename Scalar>
GramMatrix<Scalar> gram(const std::vector<StateVector<Scalar>>& states) {
    if (states.empty()) return GramMatrix<Scalar>(Operator<Scalar>(0, 0));
    Operator<Scalar> s(states.front().size(), static_cast<Eigen::Index>(states.size()));
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].size() != s.rows()) throw std::invalid_argument("gram: states differ in dimension");
        s.col(static_cast<Eigen::Index>(i)) = states[i];
    }
    Operator<Scalar> g = s.adjoint() * s;
    return GramMatrix<Scalar>((g + g.adjoint()) / 2);
}

template <typename Scalar>
GramMatrix<Scalar> gram(const EncodedFamily<Scalar>& family) {
    return gram(family.states);
}

/// Gram matrix of the d-state family sharing stage-1 subspace m.
template <typename Scalar>
GramMatrix<Scalar> subspace_gram(const EncodedFamily<Scalar>& family, int m) {
    if (m < 0 || m >= family.d) throw std::out_of_range("subspace_gram: subspace index out of range");
    return gram(family).block(static_cast<Eigen::Index>(m) * family.d, family.d);
}

/// Closed-form overlaps of the encoded family:
///   <Phi_mn|Phi_m'n'> = delta_mm' sum_{k<d} p_k exp(-2 pi i k (n-n')/d) + sum_{mu>=d} p_mu.
/// The tail sum vanishes when D = d.
template <typename Scalar>
GramMatrix<Scalar> closed_form_gram(const RealVector<Scalar>& spectrum, int d) {
    detail::require_dimension(d, "closed_form_gram");
    const Eigen::Index D = spectrum.size();
    if (D < d) throw std::invalid_argument("closed_form_gram: spectrum shorter than d");
    const Scalar tail = spectrum.tail(D - d).sum();
    std::vector<Complex<Scalar>> kernel(d);
    for (int delta = 0; delta < d; ++delta) {
        Complex<Scalar> acc(0);
        for (int k = 0; k < d; ++k) acc += spectrum(k) * detail::root_of_unity<Scalar>(-static_cast<long long>(k) * delta, d);
        kernel[delta] = acc;
    }
    const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
    Operator<Scalar> g = Operator<Scalar>::Constant(n, n, Complex<Scalar>(tail));
    for (int m = 0; m < d; ++m) {
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                g(m * d + a, m * d + b) += kernel[((a - b) % d + d) % d];
            }
        }
    }
    return GramMatrix<Scalar>(std::move(g));
}

/// lambda_min(G) > tol.
template <typename Scalar>
bool is_linearly_independent(const GramMatrix<Scalar>& g, double tol = 1e-10) {
    if (g.size() == 0) return true;
    return g.min_eigenvalue() > tol;
}

/// Labelled positive operators summing to the identity. At most one element
/// may be marked inconclusive.
template <typename Scalar = double>
struct Povm {
    std::vector<Operator<Scalar>> elements;
    std::vector<std::string> labels;
    std::optional<std::size_t> inconclusive;

    std::size_t size() const { return elements.size(); }
    Eigen::Index dim() const { return elements.empty() ? 0 : elements.front().rows(); }

    double completeness_residual() const {
        Operator<Scalar> acc = Operator<Scalar>::Zero(dim(), dim());
        for (const auto& e : elements) acc += e;
        return static_cast<double>((acc - identity<Scalar>(dim())).cwiseAbs().maxCoeff());
    }

    bool is_valid(double tol = kPsdTol) const {
        for (const auto& e : elements) {
            if (e.rows() != dim() || !is_hermitian(e, tol) || !is_psd(e, tol)) return false;
        }
        return completeness_residual() <= tol;
    }
};

/// P_m = sum_{k<d} |k+m mod d><k+m mod d| (x) |k><k| on H^D (x) H^D, plus the
/// residual I - sum_m P_m (labelled "rest") when D > d.
template <typename Scalar = double>
Povm<Scalar> subspace_projectors(int d, int D) {
    detail::require_dimension(d, "subspace_projectors");
    if (D < d) throw std::invalid_argument("subspace_projectors: D < d");
    const Eigen::Index dim = static_cast<Eigen::Index>(D) * D;
    Povm<Scalar> povm;
    Operator<Scalar> rest = identity<Scalar>(dim);
    for (int m = 0; m < d; ++m) {
        Operator<Scalar> p = Operator<Scalar>::Zero(dim, dim);
        for (int k = 0; k < d; ++k) {
            const Eigen::Index idx = static_cast<Eigen::Index>((k + m) % d) * D + k;
            p(idx, idx) = Complex<Scalar>(1);
        }
        rest -= p;
        povm.elements.push_back(std::move(p));
        povm.labels.push_back("P" + std::to_string(m));
    }
    if (D > d) {
        povm.elements.push_back(std::move(rest));
        povm.labels.push_back("rest");
        povm.inconclusive = povm.elements.size() - 1;
    }
    return povm;
}

/// Three-outcome measurement on span{|00>, |11>} for the pair
/// L(|00> + ell|11>), L(|00> - ell|11>):
///   A1 = 1/2 [[ell^2, ell], [ell, 1]], A2 = 1/2 [[ell^2, -ell], [-ell, 1]],
///   A3 = [[1 - ell^2, 0], [0, 0]] (inconclusive).
template <typename Scalar = double>
Povm<Scalar> qubit_povm(Scalar ell) {
    if (!(ell >= Scalar(0) && ell <= Scalar(1))) {
        std::ostringstream os;
        os << "qubit_povm: ell = " << static_cast<double>(ell) << " outside [0, 1]";
        throw std::invalid_argument(os.str());
    }
    using C = Complex<Scalar>;
    Operator<Scalar> a1(2, 2), a2(2, 2), a3(2, 2);
    a1 << C(ell * ell / 2), C(ell / 2), C(ell / 2), C(Scalar(0.5));
    a2 << C(ell * ell / 2), C(-ell / 2), C(-ell / 2), C(Scalar(0.5));
    a3 << C(1 - ell * ell), C(0), C(0), C(0);
    return {{a1, a2, a3}, {"A1", "A2", "inconclusive"}, 2};
}

/// Outcome probabilities <psi|A_mu|psi>; rounding negatives are clipped to 0.
template <typename Scalar>
std::vector<Scalar> born_probabilities(const Povm<Scalar>& povm, const StateVector<Scalar>& state) {
    if (state.size() != povm.dim()) {
        std::ostringstream os;
        os << "born_probabilities: state dimension " << state.size() << " != POVM dimension " << povm.dim();
        throw std::invalid_argument(os.str());
    }
    std::vector<Scalar> probs;
    probs.reserve(povm.size());
    for (const auto& e : povm.elements) {
        probs.push_back(std::max(Scalar(0), state.dot(e * state).real()));
    }
    return probs;
}

/// Per-state conclusive probabilities gamma_i and their mean.
template <typename Scalar = double>
struct SuccessProfile {
    std::vector<Scalar> gammas;

    Scalar average() const {
        if (gammas.empty()) return Scalar(0);
        Scalar s = 0;
        for (Scalar g : gammas) s += g;
        return s / Scalar(gammas.size());
    }

    static SuccessProfile uniform(std::size_t n, Scalar gamma) { return {std::vector<Scalar>(n, gamma)}; }
};

/// The profile gamma can be realized unambiguously iff G - diag(gamma) is
/// positive semidefinite. Boundary cases (zero eigenvalue) are accepted.
template <typename Scalar>
bool duan_guo_feasible(const GramMatrix<Scalar>& g, const std::vector<Scalar>& gammas, double tol = kPsdTol) {
    if (static_cast<Eigen::Index>(gammas.size()) != g.size()) {
        std::ostringstream os;
        os << "duan_guo_feasible: " << gammas.size() << " efficiencies for " << g.size() << " states";
        throw std::invalid_argument(os.str());
    }
    Operator<Scalar> m = g.matrix();
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        if (!(gammas[i] >= Scalar(0) && gammas[i] <= Scalar(1))) {
            throw std::invalid_argument("duan_guo_feasible: efficiency outside [0, 1]");
        }
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -= gammas[i];
    }
    return is_psd(m, tol);
}

/// Largest uniform gamma with G - gamma I >= 0, i.e. lambda_min(G), clipped to [0, 1].
template <typename Scalar>
Scalar max_uniform_gamma(const GramMatrix<Scalar>& g) {
    if (g.size() == 0) return Scalar(1);
    return std::clamp(g.min_eigenvalue(), Scalar(0), Scalar(1));
}

/// Checks 1/2 (gamma_i + gamma_j) <= 1 - |<psi_i|psi_j>| for every i != j.
template <typename Scalar>
bool pairwise_bound_check(const SuccessProfile<Scalar>& profile, const GramMatrix<Scalar>& g,
                          double slack = 1e-12) {
    if (static_cast<Eigen::Index>(profile.gammas.size()) != g.size()) {
        throw std::invalid_argument("pairwise_bound_check: profile and Gram sizes differ");
    }
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        for (Eigen::Index j = 0; j < g.size(); ++j) {
            if (i == j) continue;
            const Scalar lhs = (profile.gammas[i] + profile.gammas[j]) / 2;
            if (lhs > Scalar(1) - std::abs(g(i, j)) + Scalar(slack)) return false;
        }
    }
    return true;
}

namespace detail {

template <typename Scalar>
Scalar off_diagonal_abs_sum(const GramMatrix<Scalar>& g) {
    Scalar s = 0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        for (Eigen::Index j = 0; j < g.size(); ++j) {
            if (i != j) s += std::abs(g(i, j));
        }
    }
    return s;
}

inline void require_at_least_two(Eigen::Index n, const char* who) {
    if (n < 2) {
        std::ostringstream os;
        os << who << ": need at least two states, got " << n;
        throw std::invalid_argument(os.str());
    }
}

}  // namespace detail

/// Upper bound on the average conclusive probability:
///   1 - 1/(N(N-1)) sum_{i != j} |<psi_i|psi_j>|.
template <typename Scalar>
Scalar average_bound(const GramMatrix<Scalar>& g) {
    const Eigen::Index n = g.size();
    detail::require_at_least_two(n, "average_bound");
    return Scalar(1) - detail::off_diagonal_abs_sum(g) / Scalar(n * (n - 1));
}

/// The same bound written over the full double sum:
///   N/(N-1) - 1/(N(N-1)) sum_{i,j} |<psi_i|psi_j>|.
/// Agrees with average_bound for normalized families.
template <typename Scalar>
Scalar average_bound_full_sum(const GramMatrix<Scalar>& g) {
    const Eigen::Index n = g.size();
    detail::require_at_least_two(n, "average_bound_full_sum");
    Scalar total = detail::off_diagonal_abs_sum(g);
    for (Eigen::Index i = 0; i < n; ++i) total += std::abs(g(i, i));
    return Scalar(n) / Scalar(n - 1) - total / Scalar(n * (n - 1));
}

/// 1 - 1/(d(d-1)) sum_{n != n'} |sum_{k<d} p_k exp(-2 pi i k (n-n')/d) + sum_{mu>=d} p_mu|
/// for a spectrum of length D >= d. With D = d the tail term is empty.
template <typename Scalar>
Scalar embedded_bound(const RealVector<Scalar>& spectrum, int d) {
    detail::require_dimension(d, "embedded_bound");
    const Eigen::Index D = spectrum.size();
    if (D < d) {
        std::ostringstream os;
        os << "embedded_bound: spectrum length " << D << " < d = " << d;
        throw std::invalid_argument(os.str());
    }
    validate_spectrum(spectrum);
    const Scalar tail = spectrum.tail(D - d).sum();
    // The magnitude depends only on n - n' mod d, which takes each nonzero
    // value d times among the d(d-1) ordered pairs.
    Scalar acc = 0;
    for (int delta = 1; delta < d; ++delta) {
        Complex<Scalar> s(tail);
        for (int k = 0; k < d; ++k) s += spectrum(k) * detail::root_of_unity<Scalar>(-static_cast<long long>(k) * delta, d);
        acc += Scalar(d) * std::abs(s);
    }
    return Scalar(1) - acc / Scalar(d * (d - 1));
}

/// Average bound within one subspace of the d x d encoded family.
template <typename Scalar>
Scalar qudit_average_bound(const RealVector<Scalar>& spectrum, int d) {
    if (spectrum.size() != d) {
        std::ostringstream os;
        os << "qudit_average_bound: spectrum length " << spectrum.size() << " != d = " << d;
        throw std::invalid_argument(os.str());
    }
    return embedded_bound(spectrum, d);
}

/// d = 3 closed form: 1 - sqrt((3/2 p0 - 1/2)^2 + 3/4 (p1 - p2)^2).
template <typename Scalar>
Scalar qutrit_closed_form(const RealVector<Scalar>& spectrum) {
    if (spectrum.size() != 3) throw std::invalid_argument("qutrit_closed_form: spectrum must have length 3");
    validate_spectrum(spectrum);
    const Scalar a = Scalar(1.5) * spectrum(0) - Scalar(0.5);
    const Scalar b = spectrum(1) - spectrum(2);
    return Scalar(1) - std::sqrt(a * a + Scalar(0.75) * b * b);
}

/// Raised by usd_povm when G - diag(gamma) has a negative eigenvalue.
class InfeasibleProfile : public std::domain_error {
public:
    explicit InfeasibleProfile(double min_eig)
        : std::domain_error(message(min_eig)), min_eigenvalue_(min_eig) {}

    double min_eigenvalue() const { return min_eigenvalue_; }

private:
    static std::string message(double e) {
        std::ostringstream os;
        os << "efficiency profile infeasible: lambda_min(G - diag(gamma)) = " << e;
        return os.str();
    }

    double min_eigenvalue_;
};

/// Unambiguous discrimination measurement for linearly independent states.
///
/// With reciprocal states d_i (columns of S G^-1, so <d_i|s_j> = delta_ij),
/// A_i = gamma_i |d_i><d_i| / |<d_i|s_i>|^2 and the inconclusive element is
/// I - sum_i A_i. Outcome i then fires on state j with probability
/// gamma_i delta_ij. Elements act on the ambient space of the states.
template <typename Scalar>
Povm<Scalar> usd_povm(const std::vector<StateVector<Scalar>>& states, const std::vector<Scalar>& gammas) {
    if (states.empty()) throw std::invalid_argument("usd_povm: no states");
    if (states.size() != gammas.size()) throw std::invalid_argument("usd_povm: one efficiency per state required");
    const Eigen::Index dim = states.front().size();
    const Eigen::Index n = static_cast<Eigen::Index>(states.size());
    if (n > dim) throw std::invalid_argument("usd_povm: more states than dimensions");

    Operator<Scalar> s(dim, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (states[i].size() != dim) throw std::invalid_argument("usd_povm: states differ in dimension");
        s.col(i) = states[i];
    }
    const GramMatrix<Scalar> g = gram(states);
    if (!is_linearly_independent(g)) {
        std::ostringstream os;
        os << "usd_povm: states are linearly dependent (lambda_min(G) = "
           << static_cast<double>(g.min_eigenvalue()) << ")";
        throw std::invalid_argument(os.str());
    }
    if (!duan_guo_feasible(g, gammas)) {
        Operator<Scalar> m = g.matrix();
        for (Eigen::Index i = 0; i < n; ++i) m(i, i) -= gammas[i];
        throw InfeasibleProfile(static_cast<double>(min_eigenvalue(m)));
    }

    // S G^-1 = (G^-1 S^dagger)^dagger, solved without forming the inverse.
    const Operator<Scalar> duals = g.matrix().ldlt().solve(s.adjoint()).adjoint();

    Povm<Scalar> povm;
    Operator<Scalar> rest = identity<Scalar>(dim);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto di = duals.col(i);
        const Scalar overlap = std::norm(di.dot(s.col(i)));
        Operator<Scalar> a = (gammas[i] / overlap) * (di * di.adjoint());
        a = (a + a.adjoint()) / 2;
        rest -= a;
        povm.elements.push_back(std::move(a));
        povm.labels.push_back(std::to_string(i));
    }
    povm.elements.push_back((rest + rest.adjoint()) / 2);
    povm.labels.push_back("inconclusive");
    povm.inconclusive = static_cast<std::size_t>(n);
    return povm;
}

/// Best-effort non-uniform profile: starting from the uniform optimum, raise
/// each gamma_i in turn as far as feasibility allows (bisection), for a fixed
/// number of sweeps. Not guaranteed to reach the semidefinite optimum.
template <typename Scalar>
SuccessProfile<Scalar> optimize_profile(const GramMatrix<Scalar>& g, int sweeps = 8, int bisection_steps = 50) {
    const std::size_t n = static_cast<std::size_t>(g.size());
    SuccessProfile<Scalar> profile = SuccessProfile<Scalar>::uniform(n, max_uniform_gamma(g));
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        Scalar gained = 0;
        for (std::size_t i = 0; i < n; ++i) {
            Scalar lo = profile.gammas[i];
            Scalar hi = Scalar(1);
            auto trial = profile.gammas;
            trial[i] = hi;
            if (duan_guo_feasible(g, trial)) {
                lo = hi;
            } else {
                for (int step = 0; step < bisection_steps; ++step) {
                    trial[i] = (lo + hi) / 2;
                    if (duan_guo_feasible(g, trial)) lo = trial[i]; else hi = trial[i];
                }
            }
            gained += lo - profile.gammas[i];
            profile.gammas[i] = lo;
        }
        if (gained <= Scalar(1e-12)) break;
    }
    return profile;
}

}  // namespace densecode
