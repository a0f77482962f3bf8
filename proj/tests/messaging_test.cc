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

#include "cfc/messaging.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

using namespace cfc;

namespace {

BitmapMessage random_bitmap(std::mt19937_64 &gen, std::size_t w, std::size_t h, double white = 0.5) {
    std::bernoulli_distribution coin(white);
    std::vector<std::uint8_t> bits(w * h);
    for (auto &b : bits) b = coin(gen) ? 1 : 0;
    return {w, h, std::move(bits)};
}

/// Plain loop over M with the exact error written out independently.
int brute_force_best_m(double p1, double p0, int m_max) {
    int best = 1;
    double best_err = 2.0;
    for (int m = 1; m <= m_max; ++m) {
        double one = 1.0;
        double zero_ok = 1.0;
        for (int k = 0; k < m; ++k) {
            one *= p1;
            zero_ok *= 1.0 - p0;
        }
        double e = 0.5 * (one + 1.0 - zero_ok);
        if (e < best_err - 1e-15) {
            best_err = e;
            best = m;
        }
    }
    return best;
}

}  // namespace

TEST(avg_bit_error, examples) {
    EXPECT_DOUBLE_EQ(avg_bit_error(1, 0.3, 0.0, ErrorForm::Approximate), 0.15);
    EXPECT_DOUBLE_EQ(avg_bit_error(1, 0.3, 0.0, ErrorForm::Exact), 0.15);
    EXPECT_DOUBLE_EQ(avg_bit_error(4, 0.75, 0.0, ErrorForm::Exact), 0.158203125);
    double approx = avg_bit_error(10, 0.5, 0.001, ErrorForm::Approximate);
    double exact = avg_bit_error(10, 0.5, 0.001, ErrorForm::Exact);
    EXPECT_LE(std::abs(approx - exact), 5e-5);
    EXPECT_GT(approx, exact);
    EXPECT_THROW(avg_bit_error(0, 0.5, 0.0, ErrorForm::Exact), std::domain_error);
    EXPECT_THROW(avg_bit_error(3, 1.5, 0.0, ErrorForm::Exact), std::domain_error);
}

TEST(avg_bit_error, approximation_bound_grid) {
    for (int m : {1, 2, 5, 10, 50, 100, 320, 500, 1000}) {
        for (double p0 : {1e-6, 1e-5, 1e-4, 1.35e-4, 1e-3, 5e-3, 1e-2, 5e-2, 0.1}) {
            if (m * p0 > 0.5) continue;
            double diff = std::abs(avg_bit_error(m, 0.9, p0, ErrorForm::Approximate) -
                                   avg_bit_error(m, 0.9, p0, ErrorForm::Exact));
            ASSERT_LE(diff, (m * p0) * (m * p0) / 2.0 + 1e-16) << m << " " << p0;
        }
    }
}

TEST(violation_probability, examples_and_monotonicity) {
    EXPECT_EQ(violation_probability(500, 0.0, 0.3), 0.0);
    EXPECT_DOUBLE_EQ(violation_probability(10, 0.01, 1.0), 0.05);
    // Inverting at M=320, eta=0.9 for a 2.4% violation gives p0 = 1.35e-4.
    const double p_star = 0.024 * 2 * 0.9 / 320;
    EXPECT_NEAR(p_star, 1.35e-4, 1e-18);
    EXPECT_NEAR(violation_probability(320, p_star, 0.9), 0.024, 1e-15);
    EXPECT_THROW(violation_probability(10, 0.01, 0.0), std::domain_error);
    EXPECT_LT(violation_probability(10, 0.01, 0.9), violation_probability(11, 0.01, 0.9));
    EXPECT_LT(violation_probability(10, 0.01, 0.9), violation_probability(10, 0.011, 0.9));
    EXPECT_GT(violation_probability(10, 0.01, 0.8), violation_probability(10, 0.01, 0.9));
}

TEST(optimal_m, edge_cases) {
    EXPECT_EQ(optimal_m(0.9, 0.0, 250).photons_per_bit, 250);
    EXPECT_EQ(optimal_m(0.0, 0.01, 250).photons_per_bit, 1);
    EXPECT_EQ(optimal_m(0.0, 0.0, 250).photons_per_bit, 1);  // tie goes to smaller M
    EXPECT_THROW(optimal_m(0.5, 0.1, 0), std::domain_error);
}

TEST(optimal_m, matches_exhaustive_scan) {
    const double p1 = 1.0 - 0.0178112;
    const double p0 = 4.2e-5;
    OptimalEncoding best = optimal_m(p1, p0, 1000);
    EXPECT_EQ(best.photons_per_bit, brute_force_best_m(p1, p0, 1000));
    EXPECT_NEAR(best.error, avg_bit_error(best.photons_per_bit, p1, p0, ErrorForm::Exact), 0.0);
    for (double q0 : {1e-5, 1.35e-4, 1e-3}) {
        for (double q1 : {0.5, 0.9, 0.99}) {
            EXPECT_EQ(optimal_m(q1, q0, 600).photons_per_bit, brute_force_best_m(q1, q0, 600));
        }
    }
}

TEST(avg_bit_error, calibrated_curve_is_unimodal) {
    const double p1 = 1.0 - 0.017811;
    const double p0 = 1.35e-4;
    bool rising = false;
    double prev = avg_bit_error(1, p1, p0, ErrorForm::Exact);
    for (int m = 2; m <= 1000; ++m) {
        double cur = avg_bit_error(m, p1, p0, ErrorForm::Exact);
        if (cur > prev) rising = true;
        if (rising) {
            ASSERT_GE(cur, prev) << m;
        }
        prev = cur;
    }
    EXPECT_TRUE(rising);
}

TEST(bitmap_message, construction) {
    EXPECT_THROW(BitmapMessage(0, 3), std::invalid_argument);
    EXPECT_THROW(BitmapMessage(2, 2, {1, 0, 1}), std::invalid_argument);
    EXPECT_THROW(BitmapMessage(2, 1, {1, 2}), std::invalid_argument);
    BitmapMessage m(3, 2, {1, 0, 0, 1, 1, 0});
    EXPECT_EQ(m.at(0, 1), 1);
    EXPECT_EQ(m.at(2, 1), 0);
    EXPECT_EQ(m.count_white(), 3u);
    EXPECT_EQ(m.complement().count_white(), 3u);
    EXPECT_EQ(m.complement().complement(), m);
}

TEST(image_fidelity, identities) {
    BitmapMessage a(2, 2, {1, 0, 1, 1});
    EXPECT_EQ(image_fidelity(a, a), 1.0);
    EXPECT_EQ(image_fidelity(a, a.complement()), 0.0);
    EXPECT_EQ(image_fidelity(a, BitmapMessage(2, 2, {1, 0, 1, 0})), 0.75);
    EXPECT_THROW(image_fidelity(a, BitmapMessage(4, 1)), std::invalid_argument);
    EXPECT_THROW(image_fidelity(a, BitmapMessage(1, 4)), std::invalid_argument);

    std::mt19937_64 gen(3);
    for (int i = 0; i < 200; ++i) {
        BitmapMessage x = random_bitmap(gen, 7, 5);
        BitmapMessage y = random_bitmap(gen, 7, 5);
        ASSERT_EQ(image_fidelity(x, y) + image_fidelity(x, y.complement()), 1.0);
    }
}

TEST(transmit_message, ideal_channel_is_lossless) {
    std::mt19937_64 gen(8);
    BitmapMessage msg = random_bitmap(gen, 16, 16);
    TransmissionReport r = transmit_message(msg, EncodingConfig{60, 6}, NoiseParams::ideal(), TrialRng(1, 0));
    EXPECT_EQ(r.fidelity, 1.0);
    EXPECT_EQ(r.received, msg);
    EXPECT_EQ(r.violation_prob_bit0, 0.0);
    EXPECT_EQ(r.violation_prob_total, 0.0);
}

TEST(transmit_message, all_black_without_bit0_clicks) {
    BitmapMessage black(8, 8);
    ClickProbabilities p;
    p.p_click_bit1 = 0.5;
    p.p_violation_bit1 = 0.01;
    TransmissionReport r = transmit_message(black, 320, p, TrialRng(3, 4));
    EXPECT_EQ(r.fidelity, 1.0);
    EXPECT_EQ(r.violation_prob_bit0, 0.0);
    EXPECT_EQ(r.violation_prob_total, 0.0);
}

TEST(transmit_message, report_invariants) {
    std::mt19937_64 gen(21);
    BitmapMessage msg = random_bitmap(gen, 20, 10, 0.3);
    ClickProbabilities p;
    p.p_click_bit1 = 0.01;
    p.p_click_bit0 = 2e-4;
    p.p_violation_bit1 = 1e-4;
    TransmissionReport r = transmit_message(msg, 50, p, TrialRng(9, 0));
    const double t = static_cast<double>(msg.size());
    EXPECT_EQ(r.fidelity + static_cast<double>(r.mismatches) / t, 1.0);
    EXPECT_EQ(r.records.size(), msg.size());
    std::size_t wrong_zeros = 0;
    for (std::size_t i = 0; i < r.records.size(); ++i) {
        EXPECT_EQ(r.records[i].first, msg.bits()[i]);
        EXPECT_EQ(r.records[i].second, r.received.bits()[i]);
        wrong_zeros += r.records[i].first == 0 && r.records[i].second == 1;
    }
    EXPECT_DOUBLE_EQ(r.violation_prob_bit0, static_cast<double>(wrong_zeros) / t);
    const double leak = 1.0 - std::pow(1.0 - 1e-4, 50);
    EXPECT_NEAR(r.violation_prob_total, r.violation_prob_bit0 + static_cast<double>(msg.count_white()) / t * leak, 1e-15);

    TransmissionReport again = transmit_message(msg, 50, p, TrialRng(9, 0));
    EXPECT_EQ(again.received, r.received);
}

TEST(transmit_message, fidelity_converges_to_expectation) {
    std::mt19937_64 gen(77);
    BitmapMessage msg = random_bitmap(gen, 32, 32, 0.4);
    ClickProbabilities p;
    p.p_click_bit1 = 0.0178;
    p.p_click_bit0 = 1.35e-4;
    const int m = 100;
    const int reps = 200;
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) {
        sum += transmit_message(msg, m, p, TrialRng(5, static_cast<std::uint64_t>(r))).fidelity;
    }
    const double mean = sum / reps;
    const double expected = expected_fidelity(msg, m, p);
    const double miss1 = std::pow(1 - p.p_click_bit1, m);
    const double miss0 = 1 - std::pow(1 - p.p_click_bit0, m);
    const double t = static_cast<double>(msg.size());
    const double var_one = (static_cast<double>(msg.count_white()) * miss1 * (1 - miss1) +
                            static_cast<double>(msg.count_black()) * miss0 * (1 - miss0)) / (t * t);
    EXPECT_NEAR(mean, expected, 5 * std::sqrt(var_one / reps));
}
