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

#ifndef CFC_MESSAGING_HPP
#define CFC_MESSAGING_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cfc/detection_noise.hpp"
#include "cfc/trial_rng.hpp"

namespace cfc {

struct EncodingConfig {
    int photons_per_bit = 1;
    int num_beamsplitters = 2;

    void validate() const {
        if (photons_per_bit < 1) {
            throw std::domain_error("photons per bit must be >= 1");
        }
        if (num_beamsplitters < 2) {
            throw std::domain_error("number of beamsplitters must be >= 2");
        }
    }
};

/// Binary image, row-major. White pixels are logic 1, black pixels logic 0.
class BitmapMessage {
   public:
    BitmapMessage(std::size_t width, std::size_t height) : BitmapMessage(width, height, std::vector<std::uint8_t>(width * height, 0)) {
    }

    BitmapMessage(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits)
        : width_(width), height_(height), bits_(std::move(bits)) {
        if (width == 0 || height == 0) {
            throw std::invalid_argument("bitmap dimensions must be >= 1");
        }
        if (bits_.size() != width * height) {
            throw std::invalid_argument(
                "bitmap has " + std::to_string(bits_.size()) + " bits, expected " + std::to_string(width * height));
        }
        for (auto &b : bits_) {
            if (b > 1) {
                throw std::invalid_argument("bitmap bits must be 0 or 1");
            }
        }
    }

    std::size_t width() const {
        return width_;
    }
    std::size_t height() const {
        return height_;
    }
    std::size_t size() const {
        return bits_.size();
    }
    const std::vector<std::uint8_t> &bits() const {
        return bits_;
    }

    std::uint8_t at(std::size_t x, std::size_t y) const {
        return bits_.at(y * width_ + x);
    }
    void set(std::size_t x, std::size_t y, std::uint8_t bit) {
        if (bit > 1) {
            throw std::invalid_argument("bitmap bits must be 0 or 1");
        }
        bits_.at(y * width_ + x) = bit;
    }

    std::size_t count_white() const {
        std::size_t n = 0;
        for (auto b : bits_) {
            n += b;
        }
        return n;
    }
    std::size_t count_black() const {
        return size() - count_white();
    }

    BitmapMessage complement() const {
        std::vector<std::uint8_t> flipped(bits_.size());
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            flipped[i] = static_cast<std::uint8_t>(1 - bits_[i]);
        }
        return {width_, height_, std::move(flipped)};
    }

    bool operator==(const BitmapMessage &) const = default;

   private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint8_t> bits_;
};

enum class ErrorForm {
    /// Linear bit-0 term M * p0, valid while M * p0 is small.
    Approximate,
    /// Bit-0 term 1 - (1 - p0)^M.
    Exact,
};

/// Average bit error for equal priors on 0 and 1 when each bit is encoded in
/// M photons and Alice records 1 on any click.
inline double avg_bit_error(int photons_per_bit, double p1_err, double p0_err, ErrorForm form) {
    if (photons_per_bit < 1) {
        throw std::domain_error("photons per bit must be >= 1");
    }
    if (!(p1_err >= 0.0 && p1_err <= 1.0 && p0_err >= 0.0 && p0_err <= 1.0)) {
        throw std::domain_error("error probabilities must lie in [0, 1]");
    }
    const double m = photons_per_bit;
    const double one_term = std::pow(p1_err, m);
    const double zero_term =
        form == ErrorForm::Exact ? -std::expm1(m * std::log1p(-p0_err)) : m * p0_err;
    return 0.5 * (one_term + zero_term);
}

/// Counterfactual-violation probability for a random bit: M * p0 / (2 eta).
inline double violation_probability(int photons_per_bit, double p0_err, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::domain_error("detector efficiency must lie in (0, 1]");
    }
    if (photons_per_bit < 1) {
        throw std::domain_error("photons per bit must be >= 1");
    }
    return photons_per_bit * p0_err / (2.0 * eta);
}

struct OptimalEncoding {
    int photons_per_bit = 1;
    double error = 0.0;
};

/// Exhaustive scan of the exact average error over M in [1, m_max]. Ties go
/// to the smaller M, which has the lower violation.
inline OptimalEncoding optimal_m(double p1_err, double p0_err, int m_max) {
    if (m_max < 1) {
        throw std::domain_error("m_max must be >= 1");
    }
    OptimalEncoding best{1, avg_bit_error(1, p1_err, p0_err, ErrorForm::Exact)};
    for (int m = 2; m <= m_max; ++m) {
        double e = avg_bit_error(m, p1_err, p0_err, ErrorForm::Exact);
        if (e < best.error) {
            best = {m, e};
        }
    }
    return best;
}

/// Fraction of positions where the two images agree.
inline double image_fidelity(const BitmapMessage &sent, const BitmapMessage &received) {
    if (sent.width() != received.width() || sent.height() != received.height()) {
        throw std::invalid_argument("image fidelity needs equal dimensions");
    }
    std::size_t agree = 0;
    for (std::size_t i = 0; i < sent.size(); ++i) {
        agree += sent.bits()[i] == received.bits()[i];
    }
    return static_cast<double>(agree) / static_cast<double>(sent.size());
}

struct TransmissionReport {
    double fidelity = 0.0;
    /// Mismatches over T, using the image's own black/white counts.
    double avg_bit_error = 0.0;
    /// Incorrectly received 0s (black pixels) over T.
    double violation_prob_bit0 = 0.0;
    /// Bit-0 violation plus the swap-backscatter bound for every 1 sent.
    double violation_prob_total = 0.0;
    std::size_t mismatches = 0;
    std::vector<std::pair<std::uint8_t, std::uint8_t>> records;
    BitmapMessage received{1, 1};
};

/// Sends every bit of `msg` with M photons; bit i uses rng.substream(i).
inline TransmissionReport transmit_message(
    const BitmapMessage &msg, int photons_per_bit, const ClickProbabilities &probs, const TrialRng &rng) {
    if (photons_per_bit < 1) {
        throw std::domain_error("photons per bit must be >= 1");
    }
    const std::size_t total = msg.size();
    TransmissionReport report;
    report.records.reserve(total);
    std::vector<std::uint8_t> received(total);
    std::size_t wrong_zeros = 0;
    for (std::size_t i = 0; i < total; ++i) {
        const int sent = msg.bits()[i];
        const int got = sample_bit_transmission(sent, photons_per_bit, probs, rng.substream(i));
        received[i] = static_cast<std::uint8_t>(got);
        report.records.emplace_back(static_cast<std::uint8_t>(sent), static_cast<std::uint8_t>(got));
        if (sent != got) {
            ++report.mismatches;
            if (sent == 0) {
                ++wrong_zeros;
            }
        }
    }
    report.received = BitmapMessage(msg.width(), msg.height(), std::move(received));
    report.fidelity = image_fidelity(msg, report.received);
    const double t = static_cast<double>(total);
    report.avg_bit_error = static_cast<double>(report.mismatches) / t;
    report.violation_prob_bit0 = static_cast<double>(wrong_zeros) / t;
    const double leak_per_one = -std::expm1(photons_per_bit * std::log1p(-probs.p_violation_bit1));
    report.violation_prob_total = report.violation_prob_bit0 + static_cast<double>(msg.count_white()) / t * leak_per_one;
    return report;
}

inline TransmissionReport transmit_message(
    const BitmapMessage &msg, const EncodingConfig &cfg, const NoiseParams &noise, const TrialRng &rng) {
    cfg.validate();
    return transmit_message(msg, cfg.photons_per_bit, click_probabilities(cfg.num_beamsplitters, noise), rng);
}

/// Expected fidelity of transmit_message: 1 minus the pixel-weighted error.
inline double expected_fidelity(const BitmapMessage &msg, int photons_per_bit, const ClickProbabilities &probs) {
    const double m = photons_per_bit;
    const double miss_one = std::exp(m * std::log1p(-probs.p_click_bit1));
    const double false_zero = -std::expm1(m * std::log1p(-probs.p_click_bit0));
    const double t = static_cast<double>(msg.size());
    return 1.0 - (static_cast<double>(msg.count_white()) * miss_one + static_cast<double>(msg.count_black()) * false_zero) / t;
}

}  // namespace cfc

#endif
