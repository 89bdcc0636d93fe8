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

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "densecode/protocol.hpp"

namespace densecode::cli {

/// Bad flag values; mapped to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Format { csv, json, text };

/// Parses "re", "imi", "re+imi" or "re-imi" (e.g. "0.5", "0.3i", "1-2i", "-i").
std::complex<double> parse_complex(std::string_view text);

/// Comma-separated probabilities. A sum within 1e-6 of one is renormalized;
/// anything else, or a negative entry, is a UsageError.
std::vector<double> parse_spectrum(std::string_view text);

/// "start:stop:steps", inclusive of both ends.
std::vector<double> parse_range(std::string_view text);

std::vector<int> parse_int_list(std::string_view text);

/// 12 significant digits.
std::string format_number(double x);

/// CSV header of the sweep output.
inline constexpr std::string_view kSweepHeader =
    "axis_value,entropy_ebits,paper_bound,achievable_gamma,mc_rate,mc_stderr,trials,seed";

struct SweepRow {
    double axis_value = 0;
    AnalysisReport analysis;
    std::optional<SimulationStats> simulation;
};

std::string sweep_csv_row(const SweepRow& row);

/// JSON report with keys config, entropy_ebits, gram_spectrum, paper_bound,
/// achievable_gamma, simulation (null when absent), then the extra analysis keys.
std::string report_json(const AnalysisReport& report, const std::optional<SimulationStats>& sim);

/// Runs the command line `args` (args[0] is the program name).
/// Returns 0 on success, 2 on usage errors, 1 on computational errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace densecode::cli
