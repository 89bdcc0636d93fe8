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

#include "densecode/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace densecode {

namespace {

RealVector<double> to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const RealVector<double>>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const RealVector<double>& v) { return {v.data(), v.data() + v.size()}; }

/// Index of the sampled outcome by inverse CDF. Falls back to the last
/// outcome with nonzero weight when u lands past the rounded total.
std::size_t sample(const std::vector<double>& probs, double u) {
    double acc = 0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0) continue;
        acc += probs[i];
        last = i;
        if (u < acc) return i;
    }
    return last;
}

/// Coordinates of P_j|v> in the basis {|(k+j) mod d>|k>}_{k<d} of subspace j.
StateVector<double> subspace_coordinates(const StateVector<double>& v, int j, int d, int D) {
    StateVector<double> c(d);
    for (int k = 0; k < d; ++k) c(k) = v(static_cast<Eigen::Index>((k + j) % d) * D + k);
    return c;
}

Povm<double> trivial_povm(int dim) {
    Povm<double> p;
    p.elements.push_back(identity<double>(dim));
    p.labels.push_back("inconclusive");
    p.inconclusive = 0;
    return p;
}

}  // namespace

void ProtocolConfig::validate() const {
    if (d < 2) throw std::invalid_argument("message dimension d must be at least 2");
    if (D < d) {
        std::ostringstream os;
        os << "resource dimension D = " << D << " is smaller than d = " << d;
        throw std::invalid_argument(os.str());
    }
    if (static_cast<int>(spectrum.size()) != D) {
        std::ostringstream os;
        os << "spectrum has " << spectrum.size() << " entries, expected D = " << D;
        throw std::invalid_argument(os.str());
    }
    validate_spectrum(to_eigen(spectrum));
}

SchmidtState<double> ProtocolConfig::shared_state() const {
    return SchmidtState<double>::from_spectrum(to_eigen(spectrum));
}

ProtocolConfig ProtocolConfig::maximally_entangled(int d, int D) {
    if (D < 1) throw std::invalid_argument("resource dimension must be positive");
    return {d, D, std::vector<double>(static_cast<std::size_t>(D), 1.0 / D), 0, 0};
}

ProtocolConfig ProtocolConfig::qubit(double ell) {
    return {2, 2, to_std(SchmidtState<double>::qubit(ell).spectrum()), 0, 0};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t block) {
    std::uint64_t z = seed + (block + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t TrialRng::below(std::uint64_t n) {
    const auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    return std::min(k, n - 1);
}

DenseCodingProtocol::DenseCodingProtocol(ProtocolConfig config) : config_(std::move(config)) {
    config_.validate();
    const int d = config_.d;
    const int D = config_.D;
    const auto shared = config_.shared_state();
    family_ = encode_family(shared, d);
    stage1_ = subspace_projectors<double>(d, D);

    const double in_weight = shared.spectrum().head(d).sum();

    // Conditional USD inside each subspace, at the uniform optimum lambda_min.
    for (int j = 0; j < d; ++j) {
        if (in_weight <= 0) {
            stage2_.push_back(trivial_povm(d));
            gammas_.push_back(0);
            continue;
        }
        std::vector<StateVector<double>> cond;
        for (int n = 0; n < d; ++n) {
            cond.push_back(subspace_coordinates(family_(j, n), j, d, D) / std::sqrt(in_weight));
        }
        const auto g = gram(cond);
        if (!is_linearly_independent(g)) {
            stage2_.push_back(trivial_povm(d));
            gammas_.push_back(0);
            continue;
        }
        const double gamma = max_uniform_gamma(g);
        stage2_.push_back(usd_povm(cond, std::vector<double>(static_cast<std::size_t>(d), gamma)));
        gammas_.push_back(gamma);
    }

    const std::size_t messages = family_.size();
    stage1_probs_.resize(messages);
    stage2_probs_.resize(messages);
    for (std::size_t i = 0; i < messages; ++i) {
        const auto& state = family_.states[i];
        stage1_probs_[i] = born_probabilities(stage1_, state);
        stage2_probs_[i].resize(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
            const double pj = stage1_probs_[i][static_cast<std::size_t>(j)];
            if (pj <= 0) continue;
            const StateVector<double> post = subspace_coordinates(state, j, d, D) / std::sqrt(pj);
            stage2_probs_[i][static_cast<std::size_t>(j)] = born_probabilities(stage2_[static_cast<std::size_t>(j)], post);
        }
    }
}

const std::vector<double>& DenseCodingProtocol::stage1_distribution(MessageIndex msg) const {
    return stage1_probs_.at(static_cast<std::size_t>(msg.flat(config_.d)));
}

TrialRecord DenseCodingProtocol::run_trial(MessageIndex msg, TrialRng& rng) const {
    const int d = config_.d;
    if (msg.m < 0 || msg.m >= d || msg.n < 0 || msg.n >= d) {
        throw std::out_of_range("run_trial: message index out of range");
    }
    const auto flat = static_cast<std::size_t>(msg.flat(d));
    TrialRecord rec{msg, std::nullopt, std::nullopt};

    const std::size_t j = sample(stage1_probs_[flat], rng.uniform());
    if (j >= static_cast<std::size_t>(d)) return rec;  // residual
    rec.stage1 = static_cast<int>(j);

    const auto& povm = stage2_[j];
    const std::size_t k = sample(stage2_probs_[flat][j], rng.uniform());
    if (povm.inconclusive && k == *povm.inconclusive) return rec;
    rec.outcome = MessageIndex{static_cast<int>(j), static_cast<int>(k)};
    return rec;
}

TrialRecord run_trial(const ProtocolConfig& config, MessageIndex msg, TrialRng& rng) {
    return DenseCodingProtocol(config).run_trial(msg, rng);
}

namespace {

SimulationStats empty_stats(const ProtocolConfig& c) {
    SimulationStats s;
    s.per_message.resize(static_cast<std::size_t>(c.d) * c.d);
    s.stage1_counts.resize(static_cast<std::size_t>(c.d) + (c.D > c.d ? 1 : 0));
    return s;
}

void run_block(const DenseCodingProtocol& protocol, std::uint64_t block, std::uint64_t count,
               SimulationStats& stats) {
    const int d = protocol.config().d;
    const auto messages = static_cast<std::uint64_t>(d) * d;
    TrialRng rng(derive_seed(protocol.config().seed, block));
    for (std::uint64_t t = 0; t < count; ++t) {
        const auto flat = static_cast<int>(rng.below(messages));
        const auto rec = protocol.run_trial(MessageIndex::from_flat(flat, d), rng);
        auto& tally = stats.per_message[static_cast<std::size_t>(flat)];
        ++tally.trials;
        ++stats.trials;
        ++stats.stage1_counts[rec.stage1 ? static_cast<std::size_t>(*rec.stage1) : stats.stage1_counts.size() - 1];
        if (rec.conclusive()) {
            ++tally.conclusive;
            ++stats.conclusive;
            if (!rec.correct()) ++stats.misdecoded;
        }
    }
}

void merge_into(SimulationStats& into, const SimulationStats& from) {
    into.trials += from.trials;
    into.conclusive += from.conclusive;
    into.misdecoded += from.misdecoded;
    for (std::size_t i = 0; i < into.per_message.size(); ++i) {
        into.per_message[i].conclusive += from.per_message[i].conclusive;
        into.per_message[i].trials += from.per_message[i].trials;
    }
    for (std::size_t i = 0; i < into.stage1_counts.size(); ++i) into.stage1_counts[i] += from.stage1_counts[i];
}

}  // namespace

SimulationStats simulate(const DenseCodingProtocol& protocol, unsigned workers) {
    const auto& config = protocol.config();
    if (config.trials < 1) throw std::invalid_argument("simulate: trials must be at least 1");
    const std::uint64_t blocks = (config.trials + kTrialBlockSize - 1) / kTrialBlockSize;
    auto block_size = [&](std::uint64_t b) {
        return std::min(kTrialBlockSize, config.trials - b * kTrialBlockSize);
    };

    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(blocks)));
    std::vector<SimulationStats> partial(workers, empty_stats(config));
    if (workers == 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run_block(protocol, b, block_size(b), partial[0]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t b = w; b < blocks; b += workers) run_block(protocol, b, block_size(b), partial[w]);
            });
        }
        for (auto& t : pool) t.join();
    }

    SimulationStats stats = empty_stats(config);
    for (const auto& p : partial) merge_into(stats, p);
    stats.success_rate = static_cast<double>(stats.conclusive) / static_cast<double>(stats.trials);
    stats.std_error = std::sqrt(stats.success_rate * (1 - stats.success_rate) / static_cast<double>(stats.trials));
    return stats;
}

SimulationStats simulate(const ProtocolConfig& config, unsigned workers) {
    return simulate(DenseCodingProtocol(config), workers);
}

AnalysisReport analyze(const ProtocolConfig& config) {
    config.validate();
    const DenseCodingProtocol protocol(config);
    const auto shared = config.shared_state();
    const auto g = gram(protocol.family());

    AnalysisReport r;
    r.config = config;
    r.entropy_ebits = entanglement_entropy(shared);
    r.gram_spectrum = to_std(g.eigenvalues());
    r.linearly_independent = is_linearly_independent(g);
    r.paper_bound = embedded_bound(shared.spectrum(), config.d);
    r.subspace_gammas = protocol.subspace_gammas();
    r.residual_probability = shared.spectrum().tail(config.D - config.d).sum();

    const double in_weight = 1 - r.residual_probability;
    double mean_gamma = 0;
    for (double gm : r.subspace_gammas) mean_gamma += gm;
    mean_gamma /= static_cast<double>(r.subspace_gammas.size());
    r.achievable_gamma = in_weight * mean_gamma;

    // Non-uniform profile on subspace 0; all subspaces share the same Gram.
    if (in_weight > 0 && r.subspace_gammas.front() > 0) {
        std::vector<StateVector<double>> cond;
        for (int n = 0; n < config.d; ++n) {
            StateVector<double> c(config.d);
            for (int k = 0; k < config.d; ++k) {
                c(k) = protocol.family()(0, n)(static_cast<Eigen::Index>(k) * config.D + k);
            }
            cond.push_back(c / std::sqrt(in_weight));
        }
        r.optimized_average = in_weight * optimize_profile(gram(cond)).average();
    }
    return r;
}

}  // namespace densecode
