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

// End-to-end dense-coding runs: Alice encodes one of d^2 messages, Bob
// projects onto the d message subspaces (plus a residual when D > d) and then
// applies an unambiguous discrimination measurement inside the subspace.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "densecode/coding.hpp"
#include "densecode/discrimination.hpp"
#include "densecode/states.hpp"

namespace densecode {

struct ProtocolConfig {
    int d = 2;                       ///< message alphabet dimension
    int D = 2;                       ///< local dimension of the shared resource
    std::vector<double> spectrum;    ///< Schmidt probabilities, length D
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument unless 2 <= d <= D and spectrum is a
    /// probability vector of length D.
    void validate() const;

    SchmidtState<double> shared_state() const;

    static ProtocolConfig maximally_entangled(int d, int D);
    static ProtocolConfig qubit(double ell);
};

struct AnalysisReport {
    ProtocolConfig config;
    double entropy_ebits = 0;
    std::vector<double> gram_spectrum;     ///< eigenvalues of the d^2 x d^2 family Gram, ascending
    bool linearly_independent = false;     ///< verdict on the whole encoded family
    double paper_bound = 0;                ///< closed-form average bound
    double achievable_gamma = 0;           ///< end-to-end rate of the two-stage decoder
    std::vector<double> subspace_gammas;   ///< conditional uniform gamma per stage-1 subspace
    double residual_probability = 0;       ///< stage-1 weight outside every P_m
    double optimized_average = 0;          ///< coordinate-ascent profile, end-to-end
};

AnalysisReport analyze(const ProtocolConfig& config);

struct TrialRecord {
    MessageIndex sent;
    std::optional<int> stage1;             ///< subspace label; empty means residual
    std::optional<MessageIndex> outcome;   ///< empty means inconclusive

    bool conclusive() const { return outcome.has_value(); }
    bool correct() const { return outcome.has_value() && *outcome == sent; }
};

/// Uniform random source for trials. Draws are taken from the top 53 bits of
/// a mt19937_64 word so sequences are identical across standard libraries.
class TrialRng {
public:
    explicit TrialRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

/// Seed of trial block `block`: splitmix64(seed + (block + 1) * 0x9E3779B97F4A7C15).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t block);

/// Trials are grouped in blocks of this many; block b always uses
/// derive_seed(seed, b), so results do not depend on the worker count.
inline constexpr std::uint64_t kTrialBlockSize = 8192;

/// Precomputed encoder/decoder for one configuration. Construction performs
/// every Born-rule evaluation; trials only sample from the cached
/// distributions. Immutable after construction and safe to share.
class DenseCodingProtocol {
public:
    explicit DenseCodingProtocol(ProtocolConfig config);

    const ProtocolConfig& config() const { return config_; }
    const EncodedFamily<double>& family() const { return family_; }
    const Povm<double>& stage1() const { return stage1_; }
    const Povm<double>& stage2(int subspace) const { return stage2_.at(static_cast<std::size_t>(subspace)); }
    double subspace_gamma(int subspace) const { return gammas_.at(static_cast<std::size_t>(subspace)); }
    const std::vector<double>& subspace_gammas() const { return gammas_; }

    /// Stage-1 outcome distribution for a message: P_0..P_{d-1}, then residual if D > d.
    const std::vector<double>& stage1_distribution(MessageIndex msg) const;

    TrialRecord run_trial(MessageIndex msg, TrialRng& rng) const;

private:
    ProtocolConfig config_;
    EncodedFamily<double> family_;
    Povm<double> stage1_;
    std::vector<Povm<double>> stage2_;
    std::vector<double> gammas_;
    std::vector<std::vector<double>> stage1_probs_;                 // [message][outcome]
    std::vector<std::vector<std::vector<double>>> stage2_probs_;    // [message][subspace][outcome]
};

/// Stand-alone trial; builds the protocol for `config` first.
TrialRecord run_trial(const ProtocolConfig& config, MessageIndex msg, TrialRng& rng);

struct MessageTally {
    std::uint64_t conclusive = 0;
    std::uint64_t trials = 0;
};

struct SimulationStats {
    std::uint64_t trials = 0;
    std::uint64_t conclusive = 0;
    std::uint64_t misdecoded = 0;            ///< conclusive outcomes differing from the sent message
    double success_rate = 0;                 ///< conclusive / trials
    double std_error = 0;                    ///< sqrt(r (1 - r) / trials)
    std::vector<MessageTally> per_message;   ///< flat order m*d + n
    std::vector<std::uint64_t> stage1_counts;  ///< per subspace, residual last when D > d
};

/// Messages drawn uniformly from the d^2 choices. Deterministic in
/// (config, seed, trials); `workers` only changes wall time.
SimulationStats simulate(const ProtocolConfig& config, unsigned workers = 1);
SimulationStats simulate(const DenseCodingProtocol& protocol, unsigned workers = 1);

}  // namespace densecode
