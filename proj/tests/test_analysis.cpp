// SPDX-License-Identifier: Apache-2.0
//
// irsmimo - double-IRS aided MIMO channel simulation and capacity optimization
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include <irsmimo/analysis.hpp>
#include <irsmimo/harness.hpp>

#include <random>

using namespace irsmimo;
using Catch::Approx;

TEST_CASE("dB and dBm conversions")
{
    CHECK(dbm_to_watts(0.0) == Approx(1e-3));
    CHECK(dbm_to_watts(20.0) == Approx(0.1));
    CHECK(watts_to_dbm(1e-3) == Approx(0.0).margin(1e-12));
    CHECK(db_to_linear(-43.0) == Approx(std::pow(10.0, -4.3)));
    CHECK(watts_to_dbm(dbm_to_watts(7.3)) == Approx(7.3));
}

TEST_CASE("rank prediction on the two reference deployments")
{
    const RankPrediction r2 = predict_rank(default_scenario());
    CHECK(r2.predicted_rank == 2);
    CHECK(r2.rho_t < 0.05);
    CHECK(r2.rho_r < 0.05);
    CHECK_FALSE(r2.borderline);

    const RankPrediction r1 = predict_rank(fig3_scenario());
    CHECK(r1.predicted_rank == 1);
    CHECK(r1.rho_t == 1.0);
    CHECK(r1.rho_r == 1.0);

    // Prediction matches the numerical SVD rank under the matched template.
    const PhaseConfig pc = PhaseConfig::structured({1.0, 0.0}, {1.0, 0.0});
    CHECK(spectral(effective_channel(build_channel_set(default_scenario()), pc,
                                     CouplingModel::Approximate))
              .numerical_rank == 2);
    CHECK(spectral(effective_channel(build_channel_set(fig3_scenario()), pc,
                                     CouplingModel::Approximate))
              .numerical_rank == 1);
}

TEST_CASE("rank prediction matches SVD on randomized geometries")
{
    std::mt19937_64 rng(31);
    const PhaseConfig pc = PhaseConfig::structured({1.0, 0.0}, {1.0, 0.0});
    for (int i = 0; i < 200; ++i)
    {
        const Scenario s = random_rank_two_scenario(rng);
        const RankPrediction rp = predict_rank(s);
        CHECK(rp.predicted_rank ==
              spectral(effective_channel(build_channel_set(s), pc, CouplingModel::Approximate))
                  .numerical_rank);
    }
}

TEST_CASE("rank-two high-power capacity scales exactly in M and P")
{
    Scenario s = default_scenario();
    s.num_bs_antennas = 4;
    s.tx_power = dbm_to_watts(20.0);

    const double base = capacity_rank2_highpower(s);
    CHECK(capacity_rank2_highpower(set_total_elements(s, 2000)) == Approx(base + 4.0));
    Scenario p2 = s;
    p2.tx_power *= 2.0;
    CHECK(capacity_rank2_highpower(p2) == Approx(base + 2.0));

    CHECK_THROWS_AS(capacity_rank2_highpower(fig3_scenario()), std::domain_error);
    Scenario uneven = s;
    uneven.irs1_count_a = 10;
    uneven.irs1_count_b = 10;
    CHECK_THROWS_AS(capacity_rank2_highpower(uneven), std::invalid_argument);
}

TEST_CASE("rank-two high-power capacity matches the optimized rate at 20 dBm")
{
    Scenario s = default_scenario();
    s.num_bs_antennas = 4;
    s.tx_power = dbm_to_watts(20.0);
    const SolveResult r = algorithm1(build_channel_set(s), s);
    CHECK(std::abs(r.rate - capacity_rank2_highpower(s)) < 0.1);

    // The gap closes as power grows.
    Scenario hp = s;
    hp.tx_power = dbm_to_watts(30.0);
    const SolveResult rh = algorithm1(build_channel_set(hp), hp);
    CHECK(std::abs(rh.rate - capacity_rank2_highpower(hp)) < 0.02);
}

TEST_CASE("rank-one closed form matches algorithm1 and the trace oracle")
{
    Scenario s = fig3_scenario();
    s.tx_power = dbm_to_watts(20.0);
    const RankOneCapacity rc = capacity_rank1_closedform(s);

    const SolveResult r = algorithm1(build_channel_set(s), s);
    CHECK(rc.rate == Approx(r.rate).margin(1e-4));

    // rate = log2(1 + P delta1^2 / sigma2) with delta1^2 = tr(H H^H) at the
    // returned phases (rank-one channel).
    const ChannelSet cs = build_channel_set(s);
    const CMat h = effective_channel(cs, PhaseConfig::structured(rc.gamma1, rc.gamma2),
                                     CouplingModel::Approximate);
    const double tr = (h * h.adjoint()).trace().real();
    CHECK(rc.rate == Approx(std::log2(1.0 + s.tx_power * tr / s.noise_power)).epsilon(1e-6));

    CHECK_THROWS_AS(capacity_rank1_closedform(default_scenario()), std::domain_error);
}

TEST_CASE("rank-one phases beat a dense phase grid")
{
    Scenario s = fig3_scenario();
    s.tx_power = dbm_to_watts(20.0);
    const RankOneCapacity rc = capacity_rank1_closedform(s);
    const StructuredLinks sl = StructuredLinks::from_channel_set(build_channel_set(s));

    auto rate_at = [&](cplx g1, cplx g2) {
        const CMat h = sl.channel(g1, g2);
        const double tr = (h * h.adjoint()).trace().real();
        return std::log2(1.0 + s.tx_power * tr / s.noise_power);
    };
    CHECK(rate_at(rc.gamma1, rc.gamma2) == Approx(rc.rate).margin(1e-6));

    double best = rc.rate;
    for (int i = 0; i < 360; ++i)
        for (int j = 0; j < 360; ++j)
            best = std::max(best,
                            rate_at(std::polar(1.0, two_pi * i / 360.0),
                                    std::polar(1.0, two_pi * j / 360.0)));
    CHECK(best <= rc.rate + 1e-4);
}

TEST_CASE("single-IRS baseline closed form")
{
    Scenario s = default_scenario();
    s.num_bs_antennas = 4;
    s.tx_power = dbm_to_watts(20.0);
    // Direct evaluation at M = 1000, d_R2 = 1, d_T2 = sqrt(2501).
    CHECK(single_irs_capacity(s) == Approx(13.0).margin(0.05));

    // Doubling M adds ~2 bits in the high-SNR regime.
    CHECK(single_irs_capacity(set_total_elements(s, 2000)) - single_irs_capacity(s) ==
          Approx(2.0).margin(0.01));

    // Closed form equals the end-to-end numerical pipeline.
    const CMat h = single_irs_channel(build_channel_set(s));
    const TransmitCovariance q = optimal_covariance(h, s.tx_power, s.noise_power);
    CHECK(single_irs_capacity(s) ==
          Approx(log_det_rate(h, q, s.noise_power)).epsilon(1e-8));
}

TEST_CASE("determinant product identity")
{
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> ph(0.0, two_pi);

    // Rank-deficient case: both sides vanish.
    {
        const Scenario s = fig3_scenario();
        const auto [closed, numeric] =
            det_product_identity(s, PhaseConfig::structured({1.0, 0.0}, {1.0, 0.0}));
        CHECK(closed == Approx(0.0).margin(1e-20));
        const auto [ts, tm] = trace_identity(s, PhaseConfig::structured({1.0, 0.0}, {1.0, 0.0}));
        CHECK(numeric <= 1e-8 * tm * tm); // det << trace^2 for rank one
    }

    // Rank-two deployments: closed form matches the determinant, and the value
    // is independent of the common phases.
    double first = -1.0;
    for (int i = 0; i < 100; ++i)
    {
        const Scenario s = (i == 0) ? default_scenario() : random_rank_two_scenario(rng);
        const PhaseConfig pc =
            PhaseConfig::structured(std::polar(1.0, ph(rng)), std::polar(1.0, ph(rng)));
        const auto [closed, numeric] = det_product_identity(s, pc);
        CHECK(std::abs(closed - numeric) <= 1e-8 * std::max(closed, numeric));
        if (i == 0)
            first = closed;
    }
    // Phase independence on the fixed default deployment.
    double lo = first, hi = first;
    for (int i = 0; i < 100; ++i)
    {
        const auto [closed, numeric] = det_product_identity(
            default_scenario(),
            PhaseConfig::structured(std::polar(1.0, ph(rng)), std::polar(1.0, ph(rng))));
        lo = std::min(lo, numeric);
        hi = std::max(hi, numeric);
    }
    CHECK((hi - lo) / hi < 1e-9);
}

TEST_CASE("trace identity and its rank-one closed form")
{
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> ph(0.0, two_pi);
    for (int i = 0; i < 50; ++i)
    {
        const Scenario s = (i == 0) ? default_scenario() : random_rank_two_scenario(rng);
        const PhaseConfig pc =
            PhaseConfig::structured(std::polar(1.0, ph(rng)), std::polar(1.0, ph(rng)));
        const auto [sum, tr] = trace_identity(s, pc);
        CHECK(std::abs(sum - tr) <= 1e-10 * std::max(sum, tr));
    }

    const Scenario s1 = fig3_scenario();
    for (int i = 0; i < 20; ++i)
    {
        const PhaseConfig pc =
            PhaseConfig::structured(std::polar(1.0, ph(rng)), std::polar(1.0, ph(rng)));
        const auto [sum, tr] = trace_identity(s1, pc);
        CHECK(trace_rank1_closedform(s1, pc) == Approx(tr).epsilon(1e-6));
        (void)sum;
    }
    CHECK_THROWS_AS(trace_rank1_closedform(default_scenario(),
                                           PhaseConfig::structured({1, 0}, {1, 0})),
                    std::domain_error);
}

TEST_CASE("scaling fit estimates the slope per doubling")
{
    // Synthetic rate curves with known slopes.
    std::vector<std::pair<double, double>> pts;
    for (double m : {250.0, 500.0, 1000.0, 2000.0})
        pts.push_back({m, 4.0 * std::log2(m) + 1.7});
    CHECK(scaling_fit(pts, ScalingAxis::M).slope == Approx(4.0));

    pts.clear();
    for (double p : {0.01, 0.1, 1.0, 10.0}) // constant ratio 10
        pts.push_back({p, 2.0 * std::log2(p) - 0.4});
    CHECK(scaling_fit(pts, ScalingAxis::P).slope == Approx(2.0));

    CHECK_THROWS_AS(scaling_fit({{1.0, 0.0}, {2.0, 1.0}}, ScalingAxis::M), std::invalid_argument);
    CHECK_THROWS_AS(scaling_fit({{1.0, 0.0}, {2.0, 1.0}, {1.5, 2.0}}, ScalingAxis::M),
                    std::invalid_argument);
    CHECK_THROWS_AS(scaling_fit({{1.0, 0.0}, {2.0, 1.0}, {3.0, 2.0}}, ScalingAxis::M),
                    std::invalid_argument);
}
