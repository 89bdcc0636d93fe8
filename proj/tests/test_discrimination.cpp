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

#include "densecode/discrimination.hpp"

#include <gtest/gtest.h>

#include <numbers>

#include "test_util.hpp"

using namespace densecode;
using densecode::testing::max_abs_diff;
using C = Complex<double>;

namespace {

SchmidtState<double> spectrum_state(std::initializer_list<double> p) {
    RealVector<double> v(static_cast<Eigen::Index>(p.size()));
    Eigen::Index i = 0;
    for (double x : p) v(i++) = x;
    return SchmidtState<double>::from_spectrum(v);
}

/// The two states of subspace 0 for the qubit channel, in {|00>, |11>} coordinates.
std::vector<StateVector<double>> qubit_pair(double ell) {
    const double L = 1 / std::sqrt(1 + ell * ell);
    StateVector<double> a(2), b(2);
    a << C(L), C(L * ell);
    b << C(L), C(-L * ell);
    return {a, b};
}

/// Largest uniform gamma accepted by the feasibility test, by bisection.
double bisect_uniform_gamma(const GramMatrix<double>& g) {
    double lo = 0, hi = 1;
    const auto n = static_cast<std::size_t>(g.size());
    if (duan_guo_feasible(g, std::vector<double>(n, 1.0), 0.0)) return 1.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = (lo + hi) / 2;
        if (duan_guo_feasible(g, std::vector<double>(n, mid), 0.0)) lo = mid; else hi = mid;
    }
    return lo;
}

/// Eigenvalues of a circulant matrix from the DFT of its first row.
std::vector<double> circulant_eigenvalues(const GramMatrix<double>& g) {
    const auto n = g.size();
    std::vector<double> out;
    for (Eigen::Index s = 0; s < n; ++s) {
        C acc(0);
        for (Eigen::Index j = 0; j < n; ++j) acc += g(0, j) * std::polar(1.0, 2 * std::numbers::pi * double(j * s) / double(n));
        out.push_back(acc.real());
    }
    return out;
}

}  // namespace

TEST(Gram, MaximallyEntangledIsIdentity) {
    for (int d = 2; d <= 5; ++d) {
        const auto g = gram(encode_family(SchmidtState<double>::uniform(d), d));
        EXPECT_LT(max_abs_diff(g.matrix(), identity<double>(d * d)), 1e-12);
    }
}

TEST(Gram, QubitWithinSubspaceOverlap) {
    const auto g = gram(encode_family(spectrum_state({0.8, 0.2}), 2));
    EXPECT_NEAR(std::abs(g(0, 1) - C(0.6)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(g(2, 3) - C(0.6)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(g(0, 2)), 0.0, 1e-15);
}

TEST(Gram, EmbeddedMaximallyEntangledCrossEntries) {
    const auto g = gram(encode_family(SchmidtState<double>::uniform(4), 2));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i / 2 != j / 2) {
                EXPECT_NEAR(std::abs(g(i, j) - C(0.5)), 0.0, 1e-15);
            }
        }
    }
}

TEST(Gram, AgreesWithClosedFormProperty) {
    std::mt19937_64 rng(41);
    for (int d = 2; d <= 8; ++d) {
        for (int D = d; D <= 12; D += (d > 4 ? 2 : 1)) {
            const auto p = densecode::testing::random_spectrum(rng, D, 0.0);
            const auto direct = gram(encode_family(SchmidtState<double>::from_spectrum(p), d));
            const auto closed = closed_form_gram(p, d);
            EXPECT_LT(max_abs_diff(direct.matrix(), closed.matrix()), 1e-12) << d << " " << D;
            for (Eigen::Index i = 0; i < direct.size(); ++i) EXPECT_NEAR(direct(i, i).real(), 1.0, 1e-12);
        }
    }
}

TEST(Gram, UniformEmbeddedClosedForm) {
    for (auto [d, D] : {std::pair{2, 3}, {2, 4}, {3, 4}, {3, 6}}) {
        const auto g = closed_form_gram<double>(RealVector<double>::Constant(D, 1.0 / D), d);
        for (Eigen::Index i = 0; i < g.size(); ++i)
            for (Eigen::Index j = 0; j < g.size(); ++j) {
                const double expected = (i == j ? double(d) / D : 0.0) + double(D - d) / D;
                EXPECT_NEAR(std::abs(g(i, j) - C(expected)), 0.0, 1e-14);
            }
    }
}

TEST(LinearIndependence, Examples) {
    EXPECT_TRUE(is_linearly_independent(gram(encode_family(SchmidtState<double>::qubit(0.5), 2))));
    EXPECT_FALSE(is_linearly_independent(gram(encode_family(SchmidtState<double>::qubit(0.0), 2))));
    const auto me = gram(encode_family(SchmidtState<double>::uniform(3), 3));
    EXPECT_TRUE(is_linearly_independent(me));
    EXPECT_NEAR(me.min_eigenvalue(), 1.0, 1e-12);
}

TEST(SubspaceProjectors, QubitCase) {
    const auto p = subspace_projectors<double>(2, 2);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_FALSE(p.inconclusive);
    Operator<double> p0 = Operator<double>::Zero(4, 4), p1 = Operator<double>::Zero(4, 4);
    p0(0, 0) = p0(3, 3) = 1;
    p1(1, 1) = p1(2, 2) = 1;
    EXPECT_EQ(max_abs_diff(p.elements[0], p0), 0.0);
    EXPECT_EQ(max_abs_diff(p.elements[1], p1), 0.0);
}

TEST(SubspaceProjectors, CompleteOrthogonalProjectors) {
    for (int d = 2; d <= 5; ++d) {
        for (int D = d; D <= d + 2; ++D) {
            const auto p = subspace_projectors<double>(d, D);
            EXPECT_EQ(p.size(), static_cast<std::size_t>(d + (D > d ? 1 : 0)));
            EXPECT_TRUE(p.is_valid());
            EXPECT_EQ(p.completeness_residual(), 0.0);
            for (std::size_t a = 0; a < p.size(); ++a) {
                EXPECT_LT(max_abs_diff(p.elements[a] * p.elements[a], p.elements[a]), 1e-15);
                for (std::size_t b = a + 1; b < p.size(); ++b) {
                    EXPECT_EQ(p.elements[a].cwiseProduct(p.elements[b]).cwiseAbs().sum(), 0.0);
                }
            }
        }
    }
}

TEST(SubspaceProjectors, ResidualHoldsTail) {
    const auto p = subspace_projectors<double>(2, 3);
    ASSERT_EQ(p.size(), 3u);
    ASSERT_TRUE(p.inconclusive);
    const auto& rest = p.elements[*p.inconclusive];
    EXPECT_EQ(rest(8, 8), C(1));  // |22>
    EXPECT_EQ(rest(0, 0), C(0));
    EXPECT_EQ(rest.trace(), C(5));
    EXPECT_THROW(subspace_projectors<double>(3, 2), std::invalid_argument);
}

TEST(QubitPovm, CompleteAndPositive) {
    for (double ell : {0.0, 0.1, 0.5, 0.9, 1.0}) {
        const auto povm = qubit_povm(ell);
        EXPECT_TRUE(povm.is_valid());
        EXPECT_LT(povm.completeness_residual(), 1e-15);
    }
    EXPECT_EQ(qubit_povm(1.0).elements[2].cwiseAbs().maxCoeff(), 0.0);
    EXPECT_THROW(qubit_povm(-0.1), std::invalid_argument);
    EXPECT_THROW(qubit_povm(1.5), std::invalid_argument);
}

TEST(QubitPovm, SuccessProbability) {
    for (double ell : {0.1, 0.3, 0.5, 0.8, 1.0}) {
        const auto povm = qubit_povm(ell);
        for (const auto& s : qubit_pair(ell)) {
            const double fail = s.dot(povm.elements[2] * s).real();
            EXPECT_NEAR(1 - fail, 2 * ell * ell / (1 + ell * ell), 1e-14);
        }
    }
    const auto probs = born_probabilities(qubit_povm(0.5), qubit_pair(0.5)[0]);
    ASSERT_EQ(probs.size(), 3u);
    EXPECT_NEAR(probs[0], 0.4, 1e-15);
    EXPECT_NEAR(probs[1], 0.0, 1e-15);
    EXPECT_NEAR(probs[2], 0.6, 1e-15);
}

TEST(DuanGuo, Examples) {
    const auto ortho = gram(encode_family(SchmidtState<double>::uniform(2), 2));
    EXPECT_TRUE(duan_guo_feasible(ortho, std::vector<double>(4, 0.0)));
    EXPECT_TRUE(duan_guo_feasible(ortho, std::vector<double>(4, 1.0)));

    const auto pair = gram(qubit_pair(0.5));
    EXPECT_TRUE(duan_guo_feasible(pair, {0.0, 0.0}));
    EXPECT_TRUE(duan_guo_feasible(pair, {0.4, 0.4}));
    EXPECT_FALSE(duan_guo_feasible(pair, {0.41, 0.41}));
    EXPECT_TRUE(duan_guo_feasible(pair, {0.2, 0.55}));
    EXPECT_THROW(duan_guo_feasible(pair, {0.1}), std::invalid_argument);
    EXPECT_THROW(duan_guo_feasible(pair, {0.1, 1.5}), std::invalid_argument);
}

TEST(MaxUniformGamma, Examples) {
    EXPECT_NEAR(max_uniform_gamma(gram(encode_family(SchmidtState<double>::uniform(3), 3))), 1.0, 1e-12);
    const auto g = subspace_gram(encode_family(spectrum_state({0.8, 0.2}), 2), 0);
    EXPECT_NEAR(max_uniform_gamma(g), 0.4, 1e-14);
    EXPECT_NEAR(max_uniform_gamma(g), 2 * 0.25 / 1.25, 1e-14);
}

TEST(MaxUniformGamma, CirculantSubspaceGram) {
    std::mt19937_64 rng(42);
    for (int d = 2; d <= 8; ++d) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto p = densecode::testing::random_spectrum(rng, d, 0.0);
            const auto family = encode_family(SchmidtState<double>::from_spectrum(p), d);
            for (int m = 0; m < d; ++m) {
                const auto g = subspace_gram(family, m);
                const auto dft = circulant_eigenvalues(g);
                EXPECT_NEAR(*std::min_element(dft.begin(), dft.end()), d * p.minCoeff(), 1e-10);
                EXPECT_NEAR(max_uniform_gamma(g), d * p.minCoeff(), 1e-10);
            }
        }
    }
}

TEST(MaxUniformGamma, AgreesWithBisectionOracle) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 2 + trial % 4;
        const int D = d + trial % 3;
        const auto p = densecode::testing::random_spectrum(rng, D);
        const auto g = gram(encode_family(SchmidtState<double>::from_spectrum(p), d));
        EXPECT_NEAR(max_uniform_gamma(g), bisect_uniform_gamma(g), 1e-9);
        // random normalized states
        std::vector<StateVector<double>> states;
        for (int i = 0; i < 4; ++i) states.push_back(densecode::testing::random_state(rng, 6));
        const auto gr = gram(states);
        EXPECT_NEAR(max_uniform_gamma(gr), bisect_uniform_gamma(gr), 1e-9);
    }
}

TEST(PairwiseBound, Examples) {
    const auto pair = gram(qubit_pair(0.5));
    EXPECT_TRUE(pairwise_bound_check(SuccessProfile<double>::uniform(2, 0.0), pair));
    const auto ortho = gram(encode_family(SchmidtState<double>::uniform(3), 3));
    EXPECT_TRUE(pairwise_bound_check(SuccessProfile<double>::uniform(9, 1.0), ortho));
    // Equality at the uniform optimum: |<.|.>| = p0 - p1 = 0.6, gamma = 2 p1 = 0.4.
    EXPECT_TRUE(pairwise_bound_check(SuccessProfile<double>::uniform(2, 0.4), pair));
    EXPECT_FALSE(pairwise_bound_check(SuccessProfile<double>::uniform(2, 0.4 + 1e-9), pair));
    EXPECT_THROW(pairwise_bound_check(SuccessProfile<double>::uniform(3, 0.1), pair), std::invalid_argument);
}

TEST(PairwiseBound, UniformOptimumAlwaysPasses) {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 2 + trial % 5;
        const int D = d + trial % 4;
        const auto p = densecode::testing::random_spectrum(rng, D, 0.0);
        const auto family = encode_family(SchmidtState<double>::from_spectrum(p), d);
        for (const auto& g : {gram(family), subspace_gram(family, trial % d)}) {
            const auto profile = SuccessProfile<double>::uniform(static_cast<std::size_t>(g.size()), max_uniform_gamma(g));
            EXPECT_TRUE(pairwise_bound_check(profile, g));
        }
    }
}

TEST(AverageBound, Examples) {
    EXPECT_NEAR(average_bound(gram(encode_family(SchmidtState<double>::uniform(4), 4))), 1.0, 1e-12);
    for (double ell : {0.2, 0.5, 0.9}) {
        EXPECT_NEAR(average_bound(gram(qubit_pair(ell))), 2 * ell * ell / (1 + ell * ell), 1e-14);
    }
    const auto p = RealVector<double>{{0.5, 0.3, 0.2}};
    const auto g = subspace_gram(encode_family(SchmidtState<double>::from_spectrum(p), 3), 0);
    EXPECT_NEAR(average_bound(g), qutrit_closed_form(p), 1e-14);
    EXPECT_THROW(average_bound(gram(qubit_pair(0.5)).block(0, 1)), std::invalid_argument);
}

TEST(AverageBound, BothSumFormsAgree) {
    std::mt19937_64 rng(45);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<StateVector<double>> states;
        const int n = 2 + trial % 6;
        for (int i = 0; i < n; ++i) states.push_back(densecode::testing::random_state(rng, 8));
        const auto g = gram(states);
        EXPECT_NEAR(average_bound(g), average_bound_full_sum(g), 1e-12);
    }
}

TEST(QuditAverageBound, Examples) {
    for (int d = 2; d <= 8; ++d) {
        EXPECT_NEAR(qudit_average_bound<double>(RealVector<double>::Constant(d, 1.0 / d), d), 1.0, 1e-12);
    }
    EXPECT_NEAR(qudit_average_bound<double>(RealVector<double>{{0.8, 0.2}}, 2), 0.4, 1e-15);
    EXPECT_NEAR(qudit_average_bound<double>(RealVector<double>{{0.5, 0.3, 0.2}}, 3), 1 - std::sqrt(0.07), 1e-14);
    EXPECT_NEAR(1 - std::sqrt(0.07), 0.735425, 1e-6);
    EXPECT_THROW(qudit_average_bound<double>(RealVector<double>{{0.5, 0.5}}, 3), std::invalid_argument);
    EXPECT_THROW(qudit_average_bound<double>(RealVector<double>{{0.5, 0.6}}, 2), std::invalid_argument);
}

TEST(QuditAverageBound, EqualsAverageBoundOfSubspaceGram) {
    std::mt19937_64 rng(46);
    for (int d = 2; d <= 8; ++d) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto p = densecode::testing::random_spectrum(rng, d, 0.0);
            const auto g = subspace_gram(encode_family(SchmidtState<double>::from_spectrum(p), d), trial % d);
            EXPECT_NEAR(qudit_average_bound(p, d), average_bound(g), 1e-12);
        }
    }
}

TEST(QutritClosedForm, Examples) {
    EXPECT_NEAR(qutrit_closed_form<double>(RealVector<double>::Constant(3, 1.0 / 3)), 1.0, 1e-15);
    EXPECT_NEAR(qutrit_closed_form<double>(RealVector<double>{{1.0, 0.0, 0.0}}), 0.0, 1e-15);
    EXPECT_NEAR(qutrit_closed_form<double>(RealVector<double>{{0.5, 0.3, 0.2}}), 0.735425, 1e-6);
    EXPECT_THROW(qutrit_closed_form<double>(RealVector<double>{{0.5, 0.5}}), std::invalid_argument);
}

TEST(EmbeddedBound, Examples) {
    std::mt19937_64 rng(47);
    for (int d = 2; d <= 6; ++d) {
        const auto p = densecode::testing::random_spectrum(rng, d);
        EXPECT_NEAR(embedded_bound(p, d), qudit_average_bound(p, d), 1e-15);
    }
    EXPECT_NEAR(embedded_bound<double>(RealVector<double>::Constant(4, 0.25), 2), 0.5, 1e-15);
    EXPECT_NEAR(embedded_bound<double>(RealVector<double>{{0.5, 0.3, 0.2}}, 2), 0.6, 1e-15);
    EXPECT_THROW(embedded_bound<double>(RealVector<double>{{0.5, 0.5}}, 3), std::invalid_argument);
}

TEST(EmbeddedBound, UniformSpectrumGivesRatio) {
    for (int d = 2; d <= 6; ++d)
        for (int D = d; D <= 12; ++D) {
            EXPECT_NEAR(embedded_bound<double>(RealVector<double>::Constant(D, 1.0 / D), d), double(d) / D, 1e-12);
        }
}

TEST(EmbeddedBound, EqualsAverageBoundOfWithinSubspaceOverlaps) {
    std::mt19937_64 rng(48);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 2 + trial % 4;
        const int D = d + 1 + trial % 3;
        const auto p = densecode::testing::random_spectrum(rng, D);
        const auto g = subspace_gram(encode_family(SchmidtState<double>::from_spectrum(p), d), 0);
        EXPECT_NEAR(embedded_bound(p, d), average_bound(g), 1e-12);
    }
}

TEST(UsdPovm, OrthonormalStates) {
    std::vector<StateVector<double>> states;
    for (int i = 0; i < 3; ++i) states.push_back(basis_ket<double>(3, i));
    const auto povm = usd_povm(states, {1.0, 1.0, 1.0});
    ASSERT_EQ(povm.size(), 4u);
    for (int i = 0; i < 3; ++i) {
        EXPECT_LT(max_abs_diff(povm.elements[i], states[i] * states[i].adjoint()), 1e-14);
    }
    EXPECT_LT(povm.elements[3].cwiseAbs().maxCoeff(), 1e-14);
}

TEST(UsdPovm, ReproducesQubitPovm) {
    for (double ell : {0.1, 0.3, 0.5, 0.77, 0.95}) {
        const double gamma = 2 * ell * ell / (1 + ell * ell);
        const auto usd = usd_povm(qubit_pair(ell), {gamma, gamma});
        const auto ref = qubit_povm(ell);
        for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(max_abs_diff(usd.elements[i], ref.elements[i]), 1e-12) << ell;
    }
}

TEST(UsdPovm, UnambiguousOnRandomFeasibleInstances) {
    std::mt19937_64 rng(49);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + trial % 4;
        const int dim = n + trial % 3;
        std::vector<StateVector<double>> states;
        for (int i = 0; i < n; ++i) states.push_back(densecode::testing::random_state(rng, dim));
        const auto g = gram(states);
        const double top = trial % 2 ? max_uniform_gamma(g) : 0.9999 * max_uniform_gamma(g);
        std::vector<double> gammas(static_cast<std::size_t>(n));
        for (auto& gm : gammas) gm = top * (trial % 3 ? 1.0 : u(rng));
        const auto povm = usd_povm(states, gammas);
        EXPECT_TRUE(povm.is_valid());
        for (int j = 0; j < n; ++j) {
            const auto probs = born_probabilities(povm, states[static_cast<std::size_t>(j)]);
            double total = 0;
            for (double x : probs) total += x;
            EXPECT_NEAR(total, 1.0, 1e-10);
            for (int i = 0; i < n; ++i) {
                const double expected = i == j ? gammas[static_cast<std::size_t>(i)] : 0.0;
                EXPECT_NEAR(probs[static_cast<std::size_t>(i)], expected, 1e-10);
            }
        }
    }
}

TEST(UsdPovm, RejectsInfeasibleAndDependent) {
    try {
        usd_povm(qubit_pair(0.5), {0.5, 0.5});
        FAIL() << "expected InfeasibleProfile";
    } catch (const InfeasibleProfile& e) {
        EXPECT_NEAR(e.min_eigenvalue(), -0.1, 1e-12);
    }
    EXPECT_THROW(usd_povm(qubit_pair(0.0), {0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(usd_povm(qubit_pair(0.5), {0.1}), std::invalid_argument);
}

TEST(BornProbabilities, Examples) {
    const auto proj = subspace_projectors<double>(2, 2);
    const auto one_hot = born_probabilities(proj, basis_ket<double>(4, 1));
    EXPECT_EQ(one_hot, (std::vector<double>{0.0, 1.0}));

    // Bell-basis measurement on the four maximally entangled encodings.
    const auto bell = nme_basis<double>(1.0, 1.0);
    Povm<double> povm;
    for (const auto& v : bell.vectors) {
        povm.elements.push_back(v * v.adjoint());
        povm.labels.push_back("bell");
    }
    ASSERT_TRUE(povm.is_valid());
    std::vector<double> avg(4, 0.0);
    for (const auto& s : encode_family(SchmidtState<double>::uniform(2), 2).states) {
        const auto probs = born_probabilities(povm, s);
        for (std::size_t i = 0; i < 4; ++i) avg[i] += probs[i] / 4;
    }
    for (double x : avg) EXPECT_NEAR(x, 0.25, 1e-14);

    EXPECT_THROW(born_probabilities(proj, basis_ket<double>(2, 0)), std::invalid_argument);
}

TEST(OptimizeProfile, FeasibleAndNoWorseThanUniform) {
    std::mt19937_64 rng(50);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 2 + trial % 3;
        const auto p = densecode::testing::random_spectrum(rng, d);
        const auto g = subspace_gram(encode_family(SchmidtState<double>::from_spectrum(p), d), 0);
        const auto profile = optimize_profile(g);
        EXPECT_TRUE(duan_guo_feasible(g, profile.gammas));
        EXPECT_TRUE(pairwise_bound_check(profile, g, 1e-9));
        EXPECT_GE(profile.average(), max_uniform_gamma(g) - 1e-12);
        EXPECT_LE(profile.average(), average_bound(g) + 1e-9);
    }
}
