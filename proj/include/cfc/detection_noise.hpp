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

#ifndef CFC_DETECTION_NOISE_HPP
#define CFC_DETECTION_NOISE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cfc/trial_rng.hpp"
#include "cfc/zeno_protocol.hpp"

namespace cfc {

/// Source, chip and detector imperfections. Defaults are the device figures:
/// ~3% heralding through the processor, ~90% detector efficiency, 99.94% MZI
/// visibility, at most 1% SWAP reflection. The dark-count probability per
/// 2.5 ns coincidence window is not a device figure; 1e-6 is a placeholder.
struct NoiseParams {
    double heralding_efficiency = 0.03;
    double detector_efficiency = 0.90;
    double dark_prob = 1e-6;
    double coincidence_window_ns = 2.5;
    double visibility = 0.9994;
    double swap_backscatter = 0.01;

    static NoiseParams ideal() {
        NoiseParams p;
        p.heralding_efficiency = 1.0;
        p.detector_efficiency = 1.0;
        p.dark_prob = 0.0;
        p.visibility = 1.0;
        p.swap_backscatter = 0.0;
        return p;
    }

    void validate() const {
        auto check = [](double v, const char *name) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::domain_error(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
            }
        };
        check(heralding_efficiency, "heralding efficiency");
        check(detector_efficiency, "detector efficiency");
        check(dark_prob, "dark-count probability");
        check(swap_backscatter, "swap backscatter");
        if (!(visibility > 0.5 && visibility <= 1.0)) {
            throw std::domain_error("visibility must lie in (0.5, 1], got " + std::to_string(visibility));
        }
        if (!(coincidence_window_ns > 0.0)) {
            throw std::domain_error("coincidence window must be positive");
        }
    }
};

/// Per-heralded-photon probabilities seen by Alice.
struct ClickProbabilities {
    double p_click_bit1 = 0.0;
    double p_click_bit0 = 0.0;
    /// Photon physically reaching Alice's lab during a 0 (no darks).
    double p_violation_bit0 = 0.0;
    /// Photon amplitude reflected back into the line by Bob's swaps during a 1.
    double p_violation_bit1 = 0.0;
    /// Bit-0 click probability referred back through the detector, the
    /// per-photon term of the violation formula; includes darks.
    double p_violation_bit0_with_dark = 0.0;
};

/// Optical spec for one bit value taking visibility and backscatter from `noise`.
inline ProtocolSpec optical_spec(int num_beamsplitters, int bob_bit, const NoiseParams &noise) {
    if (noise.visibility == 1.0 && noise.swap_backscatter == 0.0) {
        return ProtocolSpec::ideal_spec(num_beamsplitters, bob_bit);
    }
    return ProtocolSpec::noisy(num_beamsplitters, bob_bit, noise.visibility, noise.swap_backscatter);
}

/// Optics come from `spec` (its bob_bit is ignored, both bits are evaluated);
/// heralding, detector efficiency and darks come from `noise`.
inline ClickProbabilities click_probabilities(const ProtocolSpec &spec, const NoiseParams &noise) {
    noise.validate();
    ProtocolSpec one = spec;
    one.bob_bit = 1;
    ProtocolSpec zero = spec;
    zero.bob_bit = 0;
    const PhotonOutcome out1 = run_photon(one);
    const PhotonOutcome out0 = run_photon(zero);

    const double h = noise.heralding_efficiency;
    const double eta = noise.detector_efficiency;
    const double d = noise.dark_prob;
    ClickProbabilities p;
    // 1 - (1 - x)(1 - d), expanded so that x = 0 gives exactly d.
    auto with_dark = [d](double x) { return x + d - x * d; };
    p.p_click_bit1 = with_dark(h * eta * out1.p_alice);
    p.p_click_bit0 = with_dark(h * eta * out0.p_alice);
    p.p_violation_bit0 = h * out0.p_violation_amp;
    p.p_violation_bit1 = h * out1.p_violation_amp;
    p.p_violation_bit0_with_dark = eta > 0.0 ? std::min(1.0, p.p_click_bit0 / eta) : 1.0;
    return p;
}

inline ClickProbabilities click_probabilities(int num_beamsplitters, const NoiseParams &noise) {
    return click_probabilities(optical_spec(num_beamsplitters, 0, noise), noise);
}

/// Finds the visibility at which the worst-case perturbation model gives a
/// bit-0 click probability of `target_click_bit0` per heralded photon.
/// Bisection on the mixing-angle offset over [0, pi/(4N)], where the D_A
/// leakage grows monotonically.
inline double calibrate_visibility(int num_beamsplitters, double target_click_bit0, const NoiseParams &noise) {
    noise.validate();
    const double h_eta = noise.heralding_efficiency * noise.detector_efficiency;
    const double d = noise.dark_prob;
    if (!(target_click_bit0 >= d && target_click_bit0 < 1.0)) {
        throw std::domain_error("bit-0 click target must lie in [dark_prob, 1)");
    }
    const double optical_target = (1.0 - (1.0 - target_click_bit0) / (1.0 - d));
    if (optical_target <= 0.0) {
        return 1.0;
    }
    if (h_eta <= 0.0) {
        throw std::domain_error("cannot reach a bit-0 click target with zero heralding or detection efficiency");
    }
    const double p_alice_target = optical_target / h_eta;

    auto leak = [&](double offset) {
        double s = std::sin(offset);
        double v = 1.0 - 2.0 * s * s;
        if (v >= 1.0) {
            return 0.0;
        }
        ProtocolSpec spec = ProtocolSpec::noisy(num_beamsplitters, 0, v, 0.0);
        return run_photon(spec).p_alice;
    };
    double lo = 0.0;
    double hi = kHalfPi / (2.0 * num_beamsplitters);
    if (leak(hi) < p_alice_target) {
        throw std::domain_error("bit-0 click target unreachable within the visibility model");
    }
    for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
        double mid = 0.5 * (lo + hi);
        if (leak(mid) < p_alice_target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double s = std::sin(0.5 * (lo + hi));
    return 1.0 - 2.0 * s * s;
}

/// Channel with the bit-0 click probability pinned to `p0_click` per heralded
/// photon. Interferometer imperfection is absorbed into that number, so the
/// bit-1 optics run at unit visibility with the configured swap backscatter.
inline ClickProbabilities pinned_click_probabilities(int num_beamsplitters, double p0_click, const NoiseParams &noise) {
    noise.validate();
    const double d = noise.dark_prob;
    if (!(p0_click >= d && p0_click < 1.0)) {
        throw std::domain_error("bit-0 click probability must lie in [dark_prob, 1)");
    }
    NoiseParams optics = noise;
    optics.visibility = 1.0;
    ClickProbabilities p = click_probabilities(num_beamsplitters, optics);
    p.p_click_bit0 = p0_click;
    // Optical part of the click, referred back through the detector.
    const double optical = (p0_click - d) / (1.0 - d);
    p.p_violation_bit0 = noise.detector_efficiency > 0.0 ? std::min(1.0, optical / noise.detector_efficiency) : 0.0;
    p.p_violation_bit0_with_dark = noise.detector_efficiency > 0.0 ? std::min(1.0, p0_click / noise.detector_efficiency) : 1.0;
    return p;
}

/// Records 1 iff at least one of M heralded slots produces a click at D_A.
inline int sample_bit_transmission(int bit, int photons_per_bit, const ClickProbabilities &probs, TrialRng rng) {
    if (photons_per_bit < 1) {
        throw std::domain_error("photons per bit must be >= 1, got " + std::to_string(photons_per_bit));
    }
    if (bit != 0 && bit != 1) {
        throw std::invalid_argument("bit must be 0 or 1");
    }
    const double p = bit == 1 ? probs.p_click_bit1 : probs.p_click_bit0;
    for (int k = 0; k < photons_per_bit; ++k) {
        if (rng.bernoulli(p)) {
            return 1;
        }
    }
    return 0;
}

}  // namespace cfc

#endif
