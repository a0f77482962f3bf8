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

#ifndef CFC_TOOLS_CLI_OPTIONS_HPP
#define CFC_TOOLS_CLI_OPTIONS_HPP

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfc/harness.hpp"

namespace cfc::cli {

/// Flag values as strings so the list syntax stays ours; numeric noise
/// parameters are bound directly. Precedence: flags, then --config file,
/// then the defaults in RunConfig.
struct CliState {
    RunConfig config;
    std::string command = "theory";
    std::vector<std::string> n{"6"};
    std::vector<std::string> m{"320"};
    std::vector<std::string> m_range;
    double p0_click = -1.0;
};

inline void add_options(CLI::App &app, CliState &s) {
    app.set_config("--config", "", "Flat key=value file; '#' starts a comment");
    app.add_option("--command", s.command, "theory | sweep | transmit | image")->capture_default_str();
    // Config files hand comma lists over as arrays, so lists are split here
    // and joined again before parsing.
    app.add_option("--n", s.n, "Beamsplitter counts, e.g. 6 or 2..6 or 2,4,6")->delimiter(',')->capture_default_str();
    auto *m = app.add_option("--m", s.m, "Photons per bit, e.g. 10,50,320,500")->delimiter(',')->capture_default_str();
    auto *mr = app.add_option("--m-range", s.m_range, "Photons-per-bit range lo..hi or lo:hi[:step]")->delimiter(',');
    m->excludes(mr);
    app.add_option("--trials", s.config.trials, "Monte Carlo trials (image: repetitions)")->capture_default_str();
    app.add_option("--seed", s.config.seed, "RNG seed")->capture_default_str();
    app.add_option("--heralding", s.config.noise.heralding_efficiency, "Heralding efficiency h")->capture_default_str();
    app.add_option("--det-eff", s.config.noise.detector_efficiency, "Detector efficiency eta")->capture_default_str();
    app.add_option("--visibility", s.config.noise.visibility, "Per-MZI visibility V")->capture_default_str();
    app.add_option("--backscatter", s.config.noise.swap_backscatter, "SWAP reflection probability")->capture_default_str();
    app.add_option("--dark-prob", s.config.noise.dark_prob, "Dark-click probability per window")->capture_default_str();
    app.add_option("--window-ns", s.config.noise.coincidence_window_ns, "Coincidence window (ns)")->capture_default_str();
    app.add_option("--p0-click", s.p0_click, "Pin the bit-0 click probability per heralded photon (overrides --visibility)");
    app.add_option("--in", s.config.input_path, "Input P1 image (image command)");
    app.add_option("--out", s.config.output_path, "Output CSV, or received P1 image for the image command");
    app.add_option("--report", s.config.report_path, "Report CSV path for the image command (default stdout)");
}

inline std::string join_list(const std::vector<std::string> &items) {
    std::string out;
    for (const auto &item : items) {
        out += (out.empty() ? "" : ",") + item;
    }
    return out;
}

/// Turns parsed strings into a validated RunConfig. Throws UsageError.
inline RunConfig finish(CliState &s) {
    RunConfig cfg = s.config;
    cfg.command = parse_command(s.command);
    cfg.n_list = parse_int_list(join_list(s.n));
    cfg.m_list = parse_int_list(join_list(s.m_range.empty() ? s.m : s.m_range));
    if (s.p0_click >= 0.0) {
        cfg.p0_click = s.p0_click;
    }
    cfg.validate();
    return cfg;
}

/// Parses argv and runs the command. Returns the process exit code.
inline int main(int argc, char **argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Chained-MZI counterfactual communication simulator"};
    CliState state;
    add_options(app, state);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::FileError &e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }
    try {
        RunConfig cfg = finish(state);
        if (cfg.command == Command::Image) {
            if (cfg.report_path.empty()) {
                cmd_image(cfg, out);
            } else {
                std::ofstream report(cfg.report_path, std::ios::binary);
                if (!report) {
                    throw InputError("cannot write " + cfg.report_path);
                }
                cmd_image(cfg, report);
            }
            return kExitOk;
        }
        std::ostringstream csv;
        switch (cfg.command) {
            case Command::Theory:
                cmd_theory(cfg, csv);
                break;
            case Command::Sweep:
                cmd_sweep(cfg, csv);
                break;
            case Command::Transmit:
                cmd_transmit(cfg, csv);
                break;
            case Command::Image:
                break;
        }
        if (cfg.output_path.empty()) {
            out << csv.str();
        } else {
            std::ofstream file(cfg.output_path, std::ios::binary);
            if (!file || !(file << csv.str())) {
                throw InputError("cannot write " + cfg.output_path);
            }
        }
        return kExitOk;
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InputError &e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::domain_error &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace cfc::cli

#endif
