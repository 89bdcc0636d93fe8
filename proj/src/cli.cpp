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

#include "densecode/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "densecode/states.hpp"

namespace densecode::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::string format_complex(std::complex<double> z) {
    std::string s = format_number(z.real());
    s += (z.imag() < 0 ? "-" : "+");
    s += format_number(std::abs(z.imag()));
    s += "i";
    return s;
}

std::string join(const std::vector<double>& v, const char* sep = ",") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += format_number(v[i]);
    }
    return s;
}

ordered_json config_json(const ProtocolConfig& c) {
    return ordered_json{{"d", c.d}, {"D", c.D}, {"spectrum", c.spectrum}, {"trials", c.trials}, {"seed", c.seed}};
}

ordered_json simulation_json(const ProtocolConfig& c, const SimulationStats& s) {
    ordered_json per = ordered_json::array();
    for (std::size_t i = 0; i < s.per_message.size(); ++i) {
        const auto msg = MessageIndex::from_flat(static_cast<int>(i), c.d);
        per.push_back({{"m", msg.m}, {"n", msg.n}, {"conclusive", s.per_message[i].conclusive},
                       {"trials", s.per_message[i].trials}});
    }
    return ordered_json{{"trials", s.trials},           {"conclusive", s.conclusive},
                        {"misdecoded", s.misdecoded},   {"success_rate", s.success_rate},
                        {"stderr", s.std_error},        {"stage1_counts", s.stage1_counts},
                        {"per_message", std::move(per)}};
}

// Flags shared by analyze and simulate.
struct PointFlags {
    int d = 0;
    int D = 0;
    std::string spectrum;
    double ell = 0;
    bool me = false;
    CLI::Option* d_opt = nullptr;
    CLI::Option* D_opt = nullptr;
    CLI::Option* spectrum_opt = nullptr;
    CLI::Option* ell_opt = nullptr;

    void attach(CLI::App* app) {
        d_opt = app->add_option("--d", d, "Message alphabet dimension (default: D)");
        D_opt = app->add_option("--D", D, "Resource local dimension (default: spectrum length)");
        spectrum_opt = app->add_option("--spectrum", spectrum, "Comma-separated Schmidt probabilities");
        ell_opt = app->add_option("--ell", ell, "Qubit channel L(|00> + ell|11>); implies d = D = 2");
        app->add_flag("--me", me, "Maximally entangled resource of dimension D");
    }

    ProtocolConfig resolve() const {
        const int sources = (spectrum_opt->count() ? 1 : 0) + (ell_opt->count() ? 1 : 0) + (me ? 1 : 0);
        if (sources != 1) throw UsageError("exactly one of --spectrum, --ell or --me is required");
        ProtocolConfig c;
        if (ell_opt->count()) {
            c = ProtocolConfig::qubit(ell);
            if ((d_opt->count() && d != 2) || (D_opt->count() && D != 2)) {
                throw UsageError("--ell describes a qubit resource; d and D must be 2");
            }
        } else if (me) {
            if (!D_opt->count() && !d_opt->count()) throw UsageError("--me needs --D or --d");
            const int dd = d_opt->count() ? d : D;
            c = ProtocolConfig::maximally_entangled(dd, D_opt->count() ? D : dd);
        } else {
            c.spectrum = parse_spectrum(spectrum);
            c.D = static_cast<int>(c.spectrum.size());
            if (D_opt->count() && D != c.D) {
                throw UsageError("--D " + std::to_string(D) + " does not match spectrum length " + std::to_string(c.D));
            }
            c.d = d_opt->count() ? d : c.D;
        }
        if (c.d < 2) throw UsageError("d must be at least 2");
        if (c.D < c.d) throw UsageError("D must be at least d");
        return c;
    }
};

struct OutputFlags {
    std::string format;
    std::string output;

    void attach(CLI::App* app, const std::string& default_format, std::vector<std::string> allowed) {
        format = default_format;
        app->add_option("--format", format, "Output format")->check(CLI::IsMember(std::move(allowed)));
        app->add_option("--output", output, "Write to PATH instead of standard output");
    }

    Format parsed() const {
        if (format == "csv") return Format::csv;
        if (format == "json") return Format::json;
        return Format::text;
    }
};

void emit(const OutputFlags& o, const std::string& payload, std::ostream& out) {
    if (o.output.empty()) {
        out << payload;
        return;
    }
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + o.output);
    f << payload;
    if (!f) throw std::runtime_error("failed writing " + o.output);
}

std::string render_basis(std::complex<double> ell, std::complex<double> p, Format fmt) {
    const auto basis = nme_basis<double>(ell, p);
    const auto closed = nme_entropies<double>(ell, p);
    std::array<double, 4> entropy{};
    for (std::size_t i = 0; i < 4; ++i) entropy[i] = entanglement_entropy(basis.vectors[i], 2, 2);
    Operator<double> overlaps(4, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) overlaps(i, j) = basis.vectors[static_cast<std::size_t>(i)].dot(basis.vectors[static_cast<std::size_t>(j)]);
    }
    const double residual = (basis.completeness() - identity<double>(4)).cwiseAbs().maxCoeff();
    static const char* kets[] = {"00", "01", "10", "11"};

    std::ostringstream os;
    if (fmt == Format::json) {
        ordered_json vectors = ordered_json::array();
        for (const auto& v : basis.vectors) {
            ordered_json amps = ordered_json::array();
            for (int k = 0; k < 4; ++k) amps.push_back({v(k).real(), v(k).imag()});
            vectors.push_back(std::move(amps));
        }
        ordered_json ov = ordered_json::array();
        for (int i = 0; i < 4; ++i) {
            ordered_json row = ordered_json::array();
            for (int j = 0; j < 4; ++j) row.push_back({overlaps(i, j).real(), overlaps(i, j).imag()});
            ov.push_back(std::move(row));
        }
        ordered_json j{{"ell", {ell.real(), ell.imag()}},
                       {"p", {p.real(), p.imag()}},
                       {"vectors", std::move(vectors)},
                       {"overlaps", std::move(ov)},
                       {"completeness_residual", residual},
                       {"entropy_ebits", entropy},
                       {"entropy_closed_form", closed}};
        os << j.dump(2) << "\n";
    } else if (fmt == Format::csv) {
        os << "vector,re00,im00,re01,im01,re10,im10,re11,im11,entropy_ebits\n";
        for (std::size_t i = 0; i < 4; ++i) {
            os << "psi" << i + 1;
            for (int k = 0; k < 4; ++k) {
                os << "," << format_number(basis.vectors[i](k).real()) << "," << format_number(basis.vectors[i](k).imag());
            }
            os << "," << format_number(entropy[i]) << "\n";
        }
    } else {
        os << "ell: " << format_complex(ell) << "\n";
        os << "p: " << format_complex(p) << "\n";
        for (std::size_t i = 0; i < 4; ++i) {
            os << "psi" << i + 1 << ":";
            for (int k = 0; k < 4; ++k) os << " (" << format_complex(basis.vectors[i](k)) << ")|" << kets[k] << ">";
            os << "\n";
        }
        os << "overlaps |<psi_i|psi_j>|:\n";
        for (int i = 0; i < 4; ++i) {
            os << " ";
            for (int j = 0; j < 4; ++j) os << " " << format_number(std::abs(overlaps(i, j)));
            os << "\n";
        }
        os << "completeness_residual: " << format_number(residual) << "\n";
        os << "entropy_ebits: " << join({entropy.begin(), entropy.end()}, " ") << "\n";
        os << "entropy_closed_form: " << join({closed.begin(), closed.end()}, " ") << "\n";
    }
    return os.str();
}

std::string render_point(const AnalysisReport& r, const std::optional<SimulationStats>& sim, Format fmt) {
    std::ostringstream os;
    if (fmt == Format::json) return report_json(r, sim) + "\n";
    if (fmt == Format::csv) {
        os << "d,D,entropy_ebits,paper_bound,achievable_gamma,residual_probability,linearly_independent,"
              "trials,seed,conclusive,misdecoded,mc_rate,mc_stderr\n";
        os << r.config.d << "," << r.config.D << "," << format_number(r.entropy_ebits) << ","
           << format_number(r.paper_bound) << "," << format_number(r.achievable_gamma) << ","
           << format_number(r.residual_probability) << "," << (r.linearly_independent ? "true" : "false") << ",";
        if (sim) {
            os << sim->trials << "," << r.config.seed << "," << sim->conclusive << "," << sim->misdecoded << ","
               << format_number(sim->success_rate) << "," << format_number(sim->std_error) << "\n";
        } else {
            os << "0,,,,,\n";
        }
        return os.str();
    }
    os << "d: " << r.config.d << "\n";
    os << "D: " << r.config.D << "\n";
    os << "spectrum: " << join(r.config.spectrum) << "\n";
    os << "entropy_ebits: " << format_number(r.entropy_ebits) << "\n";
    os << "gram_spectrum: " << join(r.gram_spectrum) << "\n";
    os << "linearly_independent: " << (r.linearly_independent ? "true" : "false") << "\n";
    os << "paper_bound: " << format_number(r.paper_bound) << "\n";
    os << "achievable_gamma: " << format_number(r.achievable_gamma) << "\n";
    os << "subspace_gammas: " << join(r.subspace_gammas) << "\n";
    os << "residual_probability: " << format_number(r.residual_probability) << "\n";
    os << "optimized_average: " << format_number(r.optimized_average) << "\n";
    if (sim) {
        os << "trials: " << sim->trials << "\n";
        os << "seed: " << r.config.seed << "\n";
        os << "conclusive: " << sim->conclusive << "\n";
        os << "misdecoded: " << sim->misdecoded << "\n";
        os << "mc_rate: " << format_number(sim->success_rate) << "\n";
        os << "mc_stderr: " << format_number(sim->std_error) << "\n";
    }
    return os.str();
}

}  // namespace

std::complex<double> parse_complex(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (c != ' ' && c != '\t') s += c;
    }
    auto fail = [&]() { return UsageError("cannot parse complex number '" + std::string(text) + "'"); };
    if (s.empty()) throw fail();
    if (s.back() != 'i') {
        double re = 0;
        if (!parse_double(s, re)) throw fail();
        return {re, 0};
    }
    s.pop_back();
    // Split at the last sign that is not a leading sign or an exponent sign.
    std::size_t split_at = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split_at = i;
            break;
        }
    }
    std::string re_part = split_at == std::string::npos ? "" : s.substr(0, split_at);
    std::string im_part = split_at == std::string::npos ? s : s.substr(split_at);
    if (im_part.empty() || im_part == "+") im_part = "1";
    if (im_part == "-") im_part = "-1";
    double re = 0, im = 0;
    if (!re_part.empty() && !parse_double(re_part, re)) throw fail();
    if (!parse_double(im_part, im)) throw fail();
    return {re, im};
}

std::vector<double> parse_spectrum(std::string_view text) {
    std::vector<double> p;
    for (const auto& part : split(text, ',')) {
        double x = 0;
        if (!parse_double(part, x)) throw UsageError("cannot parse spectrum entry '" + part + "'");
        if (x < 0) throw UsageError("spectrum entry " + part + " is negative");
        p.push_back(x);
    }
    double total = 0;
    for (double x : p) total += x;
    if (std::abs(total - 1) > 1e-6) {
        throw UsageError("spectrum sums to " + format_number(total) + ", expected 1 within 1e-6");
    }
    for (double& x : p) x /= total;
    return p;
}

std::vector<double> parse_range(std::string_view text) {
    const auto parts = split(text, ':');
    double start = 0, stop = 0, steps_d = 0;
    if (parts.size() != 3 || !parse_double(parts[0], start) || !parse_double(parts[1], stop) ||
        !parse_double(parts[2], steps_d)) {
        throw UsageError("range must be start:stop:steps, got '" + std::string(text) + "'");
    }
    if (steps_d < 1 || steps_d != std::floor(steps_d)) throw UsageError("range needs a positive integer step count");
    const auto steps = static_cast<long>(steps_d);
    if (steps == 1) return {start};
    std::vector<double> v;
    for (long i = 0; i < steps; ++i) {
        v.push_back(i == steps - 1 ? stop : start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1));
    }
    return v;
}

std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> v;
    for (const auto& part : split(text, ',')) {
        char* end = nullptr;
        errno = 0;
        const long x = std::strtol(part.c_str(), &end, 10);
        if (part.empty() || errno != 0 || end != part.c_str() + part.size()) {
            throw UsageError("cannot parse integer '" + part + "'");
        }
        v.push_back(static_cast<int>(x));
    }
    return v;
}

std::string format_number(double x) {
    if (x == 0) x = 0;  // no "-0"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string sweep_csv_row(const SweepRow& row) {
    std::string s = format_number(row.axis_value) + "," + format_number(row.analysis.entropy_ebits) + "," +
                    format_number(row.analysis.paper_bound) + "," + format_number(row.analysis.achievable_gamma) + ",";
    if (row.simulation) {
        s += format_number(row.simulation->success_rate) + "," + format_number(row.simulation->std_error);
    } else {
        s += ",";
    }
    s += "," + std::to_string(row.analysis.config.trials) + "," + std::to_string(row.analysis.config.seed) + "\n";
    return s;
}

std::string report_json(const AnalysisReport& r, const std::optional<SimulationStats>& sim) {
    ordered_json j;
    j["config"] = config_json(r.config);
    j["entropy_ebits"] = r.entropy_ebits;
    j["gram_spectrum"] = r.gram_spectrum;
    j["paper_bound"] = r.paper_bound;
    j["achievable_gamma"] = r.achievable_gamma;
    j["simulation"] = sim ? simulation_json(r.config, *sim) : ordered_json(nullptr);
    j["linearly_independent"] = r.linearly_independent;
    j["subspace_gammas"] = r.subspace_gammas;
    j["residual_probability"] = r.residual_probability;
    j["optimized_average"] = r.optimized_average;
    return j.dump(2);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Probabilistic dense coding with non-maximally entangled resources", "densecode"};
    app.require_subcommand(1);

    std::string ell_text = "1", p_text = "1";
    OutputFlags basis_out;
    auto* basis = app.add_subcommand("basis", "Print the two-qubit NME basis for (ell, p)");
    basis->add_option("--ell", ell_text, "Complex ell as re[+imi]");
    basis->add_option("--p", p_text, "Complex p as re[+imi]");
    basis_out.attach(basis, "text", {"csv", "json", "text"});

    PointFlags analyze_flags;
    OutputFlags analyze_out;
    auto* analyze_cmd = app.add_subcommand("analyze", "Closed-form bounds and achievable rate for one resource");
    analyze_flags.attach(analyze_cmd);
    analyze_out.attach(analyze_cmd, "text", {"csv", "json", "text"});

    PointFlags sim_flags;
    OutputFlags sim_out;
    std::uint64_t sim_trials = 100000, sim_seed = 1;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo run of the two-stage decoder");
    sim_flags.attach(simulate_cmd);
    simulate_cmd->add_option("--trials", sim_trials, "Number of trials")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", sim_seed, "64-bit seed");
    sim_out.attach(simulate_cmd, "text", {"csv", "json", "text"});

    std::string axis, range_text, list_text;
    int sweep_d = 2;
    bool sweep_me = false;
    std::uint64_t sweep_trials = 0, sweep_seed = 1;
    OutputFlags sweep_out;
    auto* sweep = app.add_subcommand("sweep", "Tabulate bounds (and optionally Monte Carlo) along one axis");
    sweep->add_option("--axis", axis, "Sweep axis")->required()->check(CLI::IsMember({"ell", "D"}));
    auto* range_opt = sweep->add_option("--range", range_text, "start:stop:steps for --axis ell");
    auto* list_opt = sweep->add_option("--list", list_text, "Comma-separated D values for --axis D");
    auto* sweep_d_opt = sweep->add_option("--d", sweep_d, "Message dimension for --axis D");
    sweep->add_flag("--me", sweep_me, "Maximally entangled resources (required for --axis D)");
    sweep->add_option("--trials", sweep_trials, "Monte Carlo trials per point (0 disables)");
    sweep->add_option("--seed", sweep_seed, "64-bit seed, used for every point");
    sweep_out.attach(sweep, "csv", {"csv", "json"});

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return 2;
    }

    try {
        if (*basis) {
            const auto ell = parse_complex(ell_text);
            const auto p = parse_complex(p_text);
            emit(basis_out, render_basis(ell, p, basis_out.parsed()), out);
        } else if (*analyze_cmd) {
            const auto config = analyze_flags.resolve();
            emit(analyze_out, render_point(analyze(config), std::nullopt, analyze_out.parsed()), out);
        } else if (*simulate_cmd) {
            auto config = sim_flags.resolve();
            config.trials = sim_trials;
            config.seed = sim_seed;
            const DenseCodingProtocol protocol(config);
            const auto stats = simulate(protocol);
            emit(sim_out, render_point(analyze(config), stats, sim_out.parsed()), out);
        } else if (*sweep) {
            std::vector<ProtocolConfig> points;
            std::vector<double> axis_values;
            if (axis == "ell") {
                if (!range_opt->count()) throw UsageError("--axis ell needs --range start:stop:steps");
                if (list_opt->count() || sweep_me || sweep_d_opt->count()) {
                    throw UsageError("--axis ell takes only --range (qubit resource)");
                }
                for (double ell : parse_range(range_text)) {
                    points.push_back(ProtocolConfig::qubit(ell));
                    axis_values.push_back(ell);
                }
            } else {
                if (!list_opt->count()) throw UsageError("--axis D needs --list");
                if (range_opt->count()) throw UsageError("--axis D does not take --range");
                if (!sweep_me) throw UsageError("--axis D requires --me");
                if (sweep_d < 2) throw UsageError("d must be at least 2");
                for (int D : parse_int_list(list_text)) {
                    if (D < sweep_d) throw UsageError("D = " + std::to_string(D) + " is smaller than d");
                    points.push_back(ProtocolConfig::maximally_entangled(sweep_d, D));
                    axis_values.push_back(D);
                }
            }
            if (points.empty()) throw UsageError("empty sweep");

            std::vector<SweepRow> rows;
            for (std::size_t i = 0; i < points.size(); ++i) {
                auto& c = points[i];
                c.trials = sweep_trials;
                c.seed = sweep_seed;
                SweepRow row{axis_values[i], analyze(c), std::nullopt};
                if (c.trials > 0) row.simulation = simulate(c);
                rows.push_back(std::move(row));
            }
            std::string payload;
            if (sweep_out.parsed() == Format::json) {
                ordered_json arr = ordered_json::array();
                for (const auto& row : rows) {
                    ordered_json j = ordered_json::parse(report_json(row.analysis, row.simulation));
                    ordered_json wrapped{{"axis_value", row.axis_value}};
                    wrapped.update(j);
                    arr.push_back(std::move(wrapped));
                }
                payload = arr.dump(2) + "\n";
            } else {
                payload = std::string(kSweepHeader) + "\n";
                for (const auto& row : rows) payload += sweep_csv_row(row);
            }
            emit(sweep_out, payload, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace densecode::cli
