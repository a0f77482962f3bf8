// Copyright 2026 The cfcsim Authors
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

#ifndef CFC_HARNESS_HPP
#define CFC_HARNESS_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cfc/detection_noise.hpp"
#include "cfc/messaging.hpp"
#include "cfc/pbm.hpp"
#include "cfc/trial_rng.hpp"

namespace cfc {

/// Bad flags or an invalid parameter grid. Exit code 2.
class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input files. Exit code 3.
class InputError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInput = 3;

enum class Command { Theory, Sweep, Transmit, Image };

inline Command parse_command(std::string_view name) {
    if (name == "theory") return Command::Theory;
    if (name == "sweep") return Command::Sweep;
    if (name == "transmit") return Command::Transmit;
    if (name == "image") return Command::Image;
    throw UsageError("unknown command '" + std::string(name) + "' (expected theory, sweep, transmit or image)");
}

struct RunConfig {
    Command command = Command::Theory;
    std::vector<int> n_list{6};
    std::vector<int> m_list{320};
    NoiseParams noise;
    /// When set, the bit-0 click probability per heralded photon is pinned to
    /// this value and the bit-1 optics run at unit visibility.
    std::optional<double> p0_click;
    int trials = 1000;
    std::uint64_t seed = 1;
    std::string input_path;
    std::string output_path;
    std::string report_path;

    void validate() const {
        if (n_list.empty() || m_list.empty()) {
            throw UsageError("N and M lists must be non-empty");
        }
        for (int n : n_list) {
            if (n < 2) throw UsageError("N must be >= 2, got " + std::to_string(n));
        }
        for (int m : m_list) {
            if (m < 1) throw UsageError("M must be >= 1, got " + std::to_string(m));
        }
        if (trials < 1) {
            throw UsageError("trials must be >= 1");
        }
        try {
            noise.validate();
        } catch (const std::domain_error &e) {
            throw UsageError(e.what());
        }
        if (noise.detector_efficiency <= 0.0) {
            throw UsageError("detector efficiency must be > 0");
        }
        if (p0_click && !(*p0_click >= noise.dark_prob && *p0_click < 1.0)) {
            throw UsageError("p0-click must lie in [dark-prob, 1)");
        }
        if (command == Command::Image) {
            if (n_list.size() != 1 || m_list.size() != 1) {
                throw UsageError("image takes exactly one N and one M");
            }
            if (input_path.empty() || output_path.empty()) {
                throw UsageError("image needs --in and --out");
            }
        }
    }
};

/// Parses "2,3,5..8" or "1:1000" / "1:1000:10" into a list of integers.
inline std::vector<int> parse_int_list(std::string_view text) {
    auto to_int = [&](std::string_view s) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
            throw UsageError("bad integer '" + std::string(s) + "' in list '" + std::string(text) + "'");
        }
        return v;
    };
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string_view item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        int lo = 0;
        int hi = 0;
        int step = 1;
        if (auto dots = item.find(".."); dots != std::string_view::npos) {
            lo = to_int(item.substr(0, dots));
            hi = to_int(item.substr(dots + 2));
        } else if (auto colon = item.find(':'); colon != std::string_view::npos) {
            lo = to_int(item.substr(0, colon));
            std::string_view rest = item.substr(colon + 1);
            if (auto colon2 = rest.find(':'); colon2 != std::string_view::npos) {
                hi = to_int(rest.substr(0, colon2));
                step = to_int(rest.substr(colon2 + 1));
            } else {
                hi = to_int(rest);
            }
        } else {
            lo = hi = to_int(item);
        }
        if (step < 1 || hi < lo) {
            throw UsageError("bad range '" + std::string(item) + "'");
        }
        for (long long v = lo; v <= hi; v += step) {
            out.push_back(static_cast<int>(v));
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

/// Nine significant digits, locale independent.
inline std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

/// Click probabilities for N under the run's noise, honoring p0_click.
inline ClickProbabilities channel_for(int num_beamsplitters, const RunConfig &cfg) {
    if (cfg.p0_click) {
        return pinned_click_probabilities(num_beamsplitters, *cfg.p0_click, cfg.noise);
    }
    return click_probabilities(num_beamsplitters, cfg.noise);
}

/// Wilson score interval at 95% confidence.
inline std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials) {
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1.0 + z * z / n;
    const double center = (p + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    return {successes == 0 ? 0.0 : std::max(0.0, center - half), successes == trials ? 1.0 : std::min(1.0, center + half)};
}

inline double exact_bit_error(int bit, int photons_per_bit, const ClickProbabilities &p) {
    const double m = photons_per_bit;
    return bit == 1 ? std::exp(m * std::log1p(-p.p_click_bit1)) : -std::expm1(m * std::log1p(-p.p_click_bit0));
}

/// Theory curves: one row per (N, M).
inline void cmd_theory(const RunConfig &cfg, std::ostream &out) {
    cfg.validate();
    out << "n,m,p1_err,p0_err,avg_err_exact,avg_err_approx,violation,violation_physical\n";
    for (int n : cfg.n_list) {
        const ClickProbabilities p = channel_for(n, cfg);
        const double p1 = 1.0 - p.p_click_bit1;
        const double p0 = p.p_click_bit0;
        for (int m : cfg.m_list) {
            out << n << ',' << m << ',' << format_g9(p1) << ',' << format_g9(p0) << ','
                << format_g9(avg_bit_error(m, p1, p0, ErrorForm::Exact)) << ','
                << format_g9(avg_bit_error(m, p1, p0, ErrorForm::Approximate)) << ','
                << format_g9(violation_probability(m, p0, cfg.noise.detector_efficiency)) << ','
                << format_g9(m * p.p_violation_bit0 / 2.0) << '\n';
        }
    }
}

/// Monte Carlo bit errors: one row per (N, M, bit). Cell c uses stream c of
/// the seed and trial t its substream t.
inline void cmd_sweep(const RunConfig &cfg, std::ostream &out) {
    cfg.validate();
    out << "n,m,bit,trials,errors,error_rate,wilson_lo,wilson_hi,expected,seed\n";
    std::uint64_t cell = 0;
    for (int n : cfg.n_list) {
        const ClickProbabilities p = channel_for(n, cfg);
        for (int m : cfg.m_list) {
            for (int bit = 0; bit <= 1; ++bit, ++cell) {
                const TrialRng cell_rng(cfg.seed, cell);
                std::size_t errors = 0;
                for (int t = 0; t < cfg.trials; ++t) {
                    errors += sample_bit_transmission(bit, m, p, cell_rng.substream(static_cast<std::uint64_t>(t))) != bit;
                }
                const auto trials = static_cast<std::size_t>(cfg.trials);
                auto [lo, hi] = wilson_interval(errors, trials);
                out << n << ',' << m << ',' << bit << ',' << trials << ',' << errors << ','
                    << format_g9(static_cast<double>(errors) / static_cast<double>(trials)) << ',' << format_g9(lo)
                    << ',' << format_g9(hi) << ',' << format_g9(exact_bit_error(bit, m, p)) << ',' << cfg.seed
                    << '\n';
            }
        }
    }
}

/// Random equal-prior message of `trials` bits per (N, M).
inline void cmd_transmit(const RunConfig &cfg, std::ostream &out) {
    cfg.validate();
    out << "n,m,bits,errors,avg_bit_error,fidelity,violation_bit0,violation_total,expected_avg_error,seed\n";
    std::uint64_t cell = 0;
    for (int n : cfg.n_list) {
        const ClickProbabilities p = channel_for(n, cfg);
        for (int m : cfg.m_list) {
            const TrialRng cell_rng(cfg.seed, cell++);
            TrialRng bit_rng = cell_rng.substream(0);
            std::vector<std::uint8_t> bits(static_cast<std::size_t>(cfg.trials));
            for (auto &b : bits) {
                b = bit_rng.bernoulli(0.5) ? 1 : 0;
            }
            const std::size_t length = bits.size();
            const BitmapMessage msg(length, 1, std::move(bits));
            const TransmissionReport r = transmit_message(msg, m, p, cell_rng.substream(1));
            out << n << ',' << m << ',' << msg.size() << ',' << r.mismatches << ',' << format_g9(r.avg_bit_error)
                << ',' << format_g9(r.fidelity) << ',' << format_g9(r.violation_prob_bit0) << ','
                << format_g9(r.violation_prob_total) << ','
                << format_g9(avg_bit_error(m, 1.0 - p.p_click_bit1, p.p_click_bit0, ErrorForm::Exact)) << ','
                << cfg.seed << '\n';
        }
    }
}

struct ImageRunResult {
    double mean_fidelity = 0.0;
    double mean_violation_bit0 = 0.0;
    double mean_violation_total = 0.0;
    double expected_fidelity = 0.0;
    BitmapMessage first_received{1, 1};
};

/// Repeats the image transmission `trials` times (repetition r uses stream r)
/// and averages the report quantities.
inline ImageRunResult run_image(const BitmapMessage &msg, int n, int m, const RunConfig &cfg) {
    const ClickProbabilities p = channel_for(n, cfg);
    ImageRunResult res;
    for (int r = 0; r < cfg.trials; ++r) {
        TransmissionReport rep = transmit_message(msg, m, p, TrialRng(cfg.seed, static_cast<std::uint64_t>(r)));
        res.mean_fidelity += rep.fidelity;
        res.mean_violation_bit0 += rep.violation_prob_bit0;
        res.mean_violation_total += rep.violation_prob_total;
        if (r == 0) {
            res.first_received = std::move(rep.received);
        }
    }
    res.mean_fidelity /= cfg.trials;
    res.mean_violation_bit0 /= cfg.trials;
    res.mean_violation_total /= cfg.trials;
    res.expected_fidelity = expected_fidelity(msg, m, p);
    return res;
}

/// Reads the P1 image at cfg.input_path, writes the first received copy to
/// cfg.output_path and a one-row report to `report`.
inline ImageRunResult cmd_image(const RunConfig &cfg, std::ostream &report) {
    cfg.validate();
    BitmapMessage msg{1, 1};
    try {
        msg = read_pbm_file(cfg.input_path);
    } catch (const std::exception &e) {
        throw InputError(cfg.input_path + ": " + e.what());
    }
    const int n = cfg.n_list.front();
    const int m = cfg.m_list.front();
    ImageRunResult res = run_image(msg, n, m, cfg);
    try {
        write_pbm_file(cfg.output_path, res.first_received);
    } catch (const std::exception &e) {
        throw InputError(e.what());
    }
    report << "n,m,trials,fidelity,violation_bit0,violation_total,expected_fidelity,seed\n";
    report << n << ',' << m << ',' << cfg.trials << ',' << format_g9(res.mean_fidelity) << ','
           << format_g9(res.mean_violation_bit0) << ',' << format_g9(res.mean_violation_total) << ','
           << format_g9(res.expected_fidelity) << ',' << cfg.seed << '\n';
    return res;
}

}  // namespace cfc

#endif
