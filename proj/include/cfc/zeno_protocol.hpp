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

#ifndef CFC_ZENO_PROTOCOL_HPP
#define CFC_ZENO_PROTOCOL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfc/optics_mesh.hpp"
#include "cfc/trial_rng.hpp"

namespace cfc {

/// Waveguide assignment of the chained-MZI mesh.
///
///   mode 0  Bob's out-route (open path when he sends a 1)
///   mode 1  Bob's arm of the chained interferometers, ends at D_B
///   mode 2  transmission line, Alice's input and D_A output
///   mode 3  outer port of the transmission-line mirrors
///
/// Stage k of N occupies two columns: column 2k holds the beamsplitter on
/// modes (1, 2); column 2k+1 holds Bob's node on (0, 1) and the line mirror
/// on (2, 3).
namespace layout {
inline constexpr std::size_t kBobOutRoute = 0;
inline constexpr std::size_t kBobArm = 1;
inline constexpr std::size_t kTransmissionLine = 2;
inline constexpr std::size_t kLineMirrorPort = 3;
inline constexpr std::size_t kNumModes = 4;

inline constexpr std::size_t beamsplitter_column(int stage) {
    return 2 * static_cast<std::size_t>(stage);
}
inline constexpr std::size_t bob_column(int stage) {
    return 2 * static_cast<std::size_t>(stage) + 1;
}
}  // namespace layout

enum class Perturbation {
    /// Every node's mixing angle is pushed by the same offset in the
    /// direction that spoils the interference. Deterministic.
    WorstCase,
    /// Offset signs and a small external phase error are drawn per node from
    /// a seeded stream.
    RandomPhase,
};

struct ProtocolSpec {
    int num_beamsplitters = 2;
    int bob_bit = 0;
    double visibility = 1.0;
    double swap_backscatter = 0.0;
    bool ideal = true;
    Perturbation perturbation = Perturbation::WorstCase;
    std::uint64_t perturbation_seed = 0;

    static ProtocolSpec ideal_spec(int num_beamsplitters, int bob_bit) {
        return {num_beamsplitters, bob_bit, 1.0, 0.0, true};
    }

    static ProtocolSpec noisy(int num_beamsplitters, int bob_bit, double visibility, double swap_backscatter) {
        return {num_beamsplitters, bob_bit, visibility, swap_backscatter, false};
    }

    void validate() const {
        if (num_beamsplitters < 2) {
            throw std::domain_error("protocol needs N >= 2, got " + std::to_string(num_beamsplitters));
        }
        if (bob_bit != 0 && bob_bit != 1) {
            throw std::invalid_argument("bob_bit must be 0 or 1");
        }
        if (!(visibility > 0.5 && visibility <= 1.0)) {
            throw std::domain_error("visibility must lie in (0.5, 1], got " + std::to_string(visibility));
        }
        if (!(swap_backscatter >= 0.0 && swap_backscatter <= 1.0)) {
            throw std::domain_error("swap backscatter must lie in [0, 1]");
        }
        if (ideal && (visibility != 1.0 || swap_backscatter != 0.0)) {
            throw std::invalid_argument("an ideal spec requires visibility 1 and no backscatter");
        }
    }
};

struct PhotonOutcome {
    double p_alice = 0.0;
    double p_bob = 0.0;
    double p_lost = 0.0;
    /// Squared amplitude that crossed from Bob's side into the transmission
    /// line (bit 1) or reached D_A (bit 0).
    double p_violation_amp = 0.0;
};

struct ProtocolCircuit {
    MeshCircuit circuit{layout::kNumModes};
    /// Columns after which Bob's out-route is projected out of the state.
    std::vector<std::size_t> collapse_after;
};

inline double chain_reflectivity(int num_beamsplitters) {
    if (num_beamsplitters < 2) {
        throw std::domain_error("chain reflectivity needs N >= 2, got " + std::to_string(num_beamsplitters));
    }
    double c = std::cos(kHalfPi / num_beamsplitters);
    return c * c;
}

inline double ideal_p1_error(int num_beamsplitters) {
    return 1.0 - std::pow(chain_reflectivity(num_beamsplitters), num_beamsplitters);
}

/// Mixing-angle offset that reduces an MZI's visibility to V:
/// sin^2(offset) = (1 - V) / 2.
inline double visibility_offset(double visibility) {
    if (!(visibility > 0.5 && visibility <= 1.0)) {
        throw std::domain_error("visibility must lie in (0.5, 1], got " + std::to_string(visibility));
    }
    return std::asin(std::sqrt((1.0 - visibility) / 2.0));
}

namespace detail {

inline double clamp_angle(double angle) {
    return std::clamp(angle, 0.0, kHalfPi);
}

class NodePerturber {
   public:
    explicit NodePerturber(const ProtocolSpec &spec)
        : offset_(spec.ideal ? 0.0 : visibility_offset(spec.visibility)),
          mode_(spec.perturbation),
          rng_(spec.perturbation_seed, 0x5a3e) {
    }

    /// `direction` is the sign that moves the node away from its target
    /// setting when the range allows only one (mirrors +1, swaps -1); 0 means
    /// either sign is possible.
    MziNode apply(MziNode node, int direction) {
        if (offset_ == 0.0) {
            return node;
        }
        double sign = direction != 0 ? direction : 1.0;
        double phase = node.phase;
        if (mode_ == Perturbation::RandomPhase) {
            if (direction == 0) {
                sign = rng_.bernoulli(0.5) ? 1.0 : -1.0;
            }
            phase += (2.0 * rng_.uniform() - 1.0) * 2.0 * offset_;
        }
        return MziNode::custom(node.column, node.upper_mode, clamp_angle(node.mixing_angle + sign * offset_), phase);
    }

   private:
    double offset_;
    Perturbation mode_;
    TrialRng rng_;
};

}  // namespace detail

/// Builds the N-stage mesh for Bob's bit. Bit 0 places Mirror nodes in Bob's
/// arm, closing N-1 chained interferometers that steer the photon to D_B.
/// Bit 1 places Swap nodes that route his arm into the out-route, which is
/// collapsed after every stage. A Swap with backscatter eps has bar
/// probability eps, so amplitude sqrt(eps) re-enters the next beamsplitter.
inline ProtocolCircuit build_circuit(const ProtocolSpec &spec) {
    spec.validate();
    const int n = spec.num_beamsplitters;
    detail::NodePerturber perturb(spec);
    ProtocolCircuit out;
    for (int stage = 0; stage < n; ++stage) {
        const auto bs_col = layout::beamsplitter_column(stage);
        const auto bob_col = layout::bob_column(stage);
        out.circuit.add_node(perturb.apply(MziNode::beamsplitter(bs_col, layout::kBobArm, n), 0));
        if (spec.bob_bit == 0) {
            out.circuit.add_node(perturb.apply(MziNode::mirror(bob_col, layout::kBobOutRoute), +1));
        } else {
            MziNode swap = MziNode::swap(bob_col, layout::kBobOutRoute);
            if (spec.swap_backscatter > 0.0) {
                swap = MziNode::custom(bob_col, layout::kBobOutRoute, std::acos(std::sqrt(spec.swap_backscatter)));
                swap.role = NodeRole::Swap;
            }
            out.circuit.add_node(perturb.apply(swap, -1));
            out.collapse_after.push_back(bob_col);
        }
        out.circuit.add_node(perturb.apply(MziNode::mirror(bob_col, layout::kTransmissionLine), +1));
    }
    return out;
}

/// Propagates one photon injected into the transmission line.
inline PhotonOutcome run_photon(const ProtocolSpec &spec) {
    const ProtocolCircuit pc = build_circuit(spec);
    const auto &circuit = pc.circuit;
    const int n = spec.num_beamsplitters;

    ModeState state = ModeState::basis(layout::kNumModes, layout::kTransmissionLine);
    PhotonOutcome outcome;
    double collapsed = 0.0;
    for (std::size_t c = 0; c < circuit.num_columns(); ++c) {
        apply_column(circuit, c, state);
        if (std::find(pc.collapse_after.begin(), pc.collapse_after.end(), c) != pc.collapse_after.end()) {
            collapsed += state.collapse(layout::kBobOutRoute);
        }
        // Bob's arm after his node: for bit 1 anything left there was
        // reflected back toward the line. The last stage feeds D_B instead.
        if (spec.bob_bit == 1 && c % 2 == 1 && c < layout::bob_column(n - 1)) {
            outcome.p_violation_amp += state.probability(layout::kBobArm);
        }
    }

    outcome.p_alice = state.probability(layout::kTransmissionLine);
    outcome.p_bob = state.probability(layout::kBobArm);
    outcome.p_lost =
        collapsed + state.probability(layout::kBobOutRoute) + state.probability(layout::kLineMirrorPort);
    if (spec.bob_bit == 0) {
        outcome.p_violation_amp = outcome.p_alice;
    }
    return outcome;
}

/// Per-photon D_A probability for bit 0 with every node offset by the
/// worst-case aligned visibility perturbation.
inline double p0_error_from_visibility(int num_beamsplitters, double visibility) {
    if (!(visibility > 0.5 && visibility <= 1.0)) {
        throw std::domain_error("visibility model needs V in (0.5, 1], got " + std::to_string(visibility));
    }
    auto spec = visibility == 1.0 ? ProtocolSpec::ideal_spec(num_beamsplitters, 0)
                                  : ProtocolSpec::noisy(num_beamsplitters, 0, visibility, 0.0);
    return run_photon(spec).p_alice;
}

}  // namespace cfc

#endif
