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
//
// Acceptance gate: one PASS/FAIL line per criterion, with the measured
// quantities printed so failures are diagnosable. Exits nonzero if any
// criterion fails.

#include <irsmimo/irsmimo.hpp>

#include <iostream>
#include <random>
#include <sstream>

using namespace irsmimo;

namespace
{
    bool all_ok = true;

    void report(int n, const std::string &name, bool pass, const std::string &detail)
    {
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << n << " (" << name << "): "
                  << detail << '\n';
        all_ok = all_ok && pass;
    }

    Scenario vi_scenario(int nt, int nr, double p_dbm, int total = 1000)
    {
        Scenario s = set_total_elements(default_scenario(), total);
        s.num_bs_antennas = nt;
        s.num_user_antennas = nr;
        s.tx_power = dbm_to_watts(p_dbm);
        return s;
    }

    // Rate of a per-element phase deployment evaluated on the element-wise
    // exact channels (the simulation-grade model, free of the far-field and
    // parallel-link approximations).
    double exact_channel_rate(const Scenario &s, const CVec &phi1, const CVec &phi2)
    {
        const CMat t1 = channel_exact(s, ChannelId::T1);
        const CMat t2 = channel_exact(s, ChannelId::T2);
        const CMat r1 = channel_exact(s, ChannelId::R1);
        const CMat r2 = channel_exact(s, ChannelId::R2);
        const CMat sm = channel_exact(s, ChannelId::S);
        const CMat f1 = phi1.asDiagonal(), f2 = phi2.asDiagonal();
        const CMat h = r1 * f1 * t1 + r2 * f2 * t2 + r2 * f2 * sm * f1 * t1;
        const TransmitCovariance q = optimal_covariance(h, s.tx_power, s.noise_power);
        return log_det_rate(h, q, s.noise_power);
    }

    std::string fmt(double v)
    {
        std::ostringstream os;
        os.precision(6);
        os << v;
        return os.str();
    }
}

static void criterion1()
{
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> ph(0.0, two_pi);
    double worst_det = 0.0, worst_tr = 0.0;
    for (int i = 0; i <= 100; ++i)
    {
        const Scenario s = (i == 0) ? vi_scenario(4, 2, 5.0) : random_rank_two_scenario(rng);
        const PhaseConfig pc =
            PhaseConfig::structured(std::polar(1.0, ph(rng)), std::polar(1.0, ph(rng)));
        const auto [dc, dn] = det_product_identity(s, pc);
        worst_det = std::max(worst_det, std::abs(dc - dn) / std::max(dc, dn));
        const auto [ts, tm] = trace_identity(s, pc);
        worst_tr = std::max(worst_tr, std::abs(ts - tm) / std::max(ts, tm));
    }

    const Scenario f3 = fig3_scenario();
    const PhaseConfig pc = PhaseConfig::structured({1.0, 0.0}, {1.0, 0.0});
    const ChannelSet cs = build_channel_set(f3);
    const CMat h = effective_channel(cs, pc, CouplingModel::Approximate);
    const double tr = (h * h.adjoint()).trace().real();
    const double r1err = std::abs(trace_rank1_closedform(f3, pc) - tr) / tr;

    report(1, "identity suite", worst_det < 1e-8 && worst_tr < 1e-8 && r1err < 1e-6,
           "det rel err " + fmt(worst_det) + ", trace rel err " + fmt(worst_tr) +
               ", rank-one trace rel err " + fmt(r1err));
}

static void criterion2()
{
    std::mt19937_64 rng(202);
    std::normal_distribution<double> n;
    double worst_gap = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        CMat m0(3, 3), u(3, 1), v(3, 1);
        for (int r = 0; r < 3; ++r)
        {
            u(r, 0) = cplx(n(rng), n(rng));
            v(r, 0) = cplx(n(rng), n(rng));
            for (int c = 0; c < 3; ++c)
                m0(r, c) = cplx(n(rng), n(rng));
        }
        const CMat mk = u * v.adjoint(); // rank-one Y generator
        const CMat x = CMat::Identity(3, 3) + m0 * m0.adjoint() + mk * mk.adjoint();
        const CMat y = mk * m0.adjoint();
        auto obj = [&](cplx g) {
            return std::log2(std::abs((x + g * y + std::conj(g) * y.adjoint()).determinant()));
        };
        const double best = obj(solve_common_phase(x, y));
        for (int k = 0; k < 720; ++k)
            worst_gap = std::max(worst_gap, obj(std::polar(1.0, two_pi * k / 720.0)) - best);
    }

    std::uniform_real_distribution<double> d(0.05, 10.0);
    double worst_kkt = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        std::vector<double> deltas(5);
        for (double &v : deltas)
            v = d(rng);
        const double p = d(rng), sigma2 = 0.4;
        const PowerAllocation pa = waterfill(deltas, p, sigma2);
        worst_kkt = std::max(worst_kkt, std::abs(pa.total() - p) / p);
        for (size_t k = 0; k < deltas.size(); ++k)
        {
            const double floor = sigma2 / (deltas[k] * deltas[k]);
            if (pa.levels[k] > 0.0)
                worst_kkt = std::max(worst_kkt,
                                     std::abs(pa.water_level - floor - pa.levels[k]));
            else
                worst_kkt = std::max(worst_kkt, pa.water_level - floor);
        }
    }

    report(2, "subproblem optimality", worst_gap <= 1e-8 && worst_kkt <= 1e-9,
           "max grid advantage " + fmt(worst_gap) + " bits, max KKT violation " + fmt(worst_kkt));
}

static void criterion3()
{
    bool monotone = true, converged = true;
    int worst_iters = 0;
    double worst_drop = 0.0;

    std::vector<Scenario> scenarios;
    for (int nt : {2, 3, 4})
        for (double pdbm : {-10.0, 5.0, 20.0})
            scenarios.push_back(vi_scenario(nt, nt == 4 ? 2 : nt, pdbm));
    scenarios.push_back(fig3_scenario());
    for (double psi : {std::numbers::pi / 8.0, std::numbers::pi / 4.0,
                       3.0 * std::numbers::pi / 8.0, std::numbers::pi / 2.0})
        scenarios.push_back(psi_scenario(default_scenario(), psi));

    for (const Scenario &s : scenarios)
    {
        const SolveResult r = algorithm1(build_channel_set(s), s);
        converged = converged && r.converged && r.iterations <= 500;
        worst_iters = std::max(worst_iters, r.iterations);
        for (size_t i = 1; i < r.objective_trace.size(); ++i)
        {
            const double drop = r.objective_trace[i - 1] - r.objective_trace[i];
            worst_drop = std::max(worst_drop, drop);
            monotone = monotone &&
                       drop <= 1e-10 * std::max(1.0, std::abs(r.objective_trace[i - 1]));
        }
    }
    report(3, "monotone convergence", monotone && converged,
           std::to_string(scenarios.size()) + " scenarios, max cycles " +
               std::to_string(worst_iters) + ", worst trace decrease " + fmt(worst_drop));
}

static void criterion4()
{
    double worst = 0.0;
    for (double pdbm : {-10.0, 20.0})
        for (int m : {100, 400, 1000})
        {
            const Scenario s = vi_scenario(3, 3, pdbm, m);
            const ChannelSet cs = build_channel_set(s);
            const double a1 = algorithm1(cs, s).rate;
            const double pe = per_element_ao(cs, s).rate;
            worst = std::max(worst, std::abs(a1 - pe) / pe);
        }
    report(4, "benchmark agreement", worst < 0.01,
           "max |algorithm1 - per_element_ao| / per_element_ao = " + fmt(worst));
}

static void criterion5()
{
    // Both deployments are scored on the element-wise exact channel, which is
    // what the reference simulations measure; the structured model the
    // optimizer sees understates the heuristic's co-phasing loss.
    const Scenario s = vi_scenario(3, 3, -10.0);
    const ChannelSet cs = build_channel_set(s);
    const SolveResult a1 = algorithm1(cs, s);
    const SolveResult h = heuristic_fixed_phase(cs, s);
    const double ra = exact_channel_rate(s, a1.phi1, a1.phi2);
    const double rh = exact_channel_rate(s, h.phi1, h.phi2);
    const double gain = ra / rh - 1.0;
    report(5, "heuristic gap", gain >= 0.17 && gain <= 0.33,
           "algorithm1 " + fmt(ra) + " vs heuristic " + fmt(rh) + " bits/s/Hz, gain " +
               fmt(100.0 * gain) + "%");
}

static void criterion6()
{
    const std::vector<double> ms = {250, 500, 1000, 2000};
    auto m_slope = [&](double pdbm, bool single) {
        std::vector<std::pair<double, double>> pts;
        for (double m : ms)
        {
            const Scenario s = vi_scenario(4, 2, pdbm, static_cast<int>(m));
            const double rate = single ? single_irs_capacity(s)
                                       : algorithm1(build_channel_set(s), s).rate;
            pts.push_back({m, rate});
        }
        return scaling_fit(pts, ScalingAxis::M).slope;
    };
    const double dbl20 = m_slope(20.0, false);
    const double dbl_neg10 = m_slope(-10.0, false);
    const double single20 = m_slope(20.0, true);

    auto p_slope = [&](const Scenario &base) {
        std::vector<std::pair<double, double>> pts;
        for (double pdbm : {10.0, 20.0, 30.0, 40.0})
        {
            Scenario s = base;
            s.tx_power = dbm_to_watts(pdbm);
            pts.push_back({s.tx_power, algorithm1(build_channel_set(s), s).rate});
        }
        return scaling_fit(pts, ScalingAxis::P).slope;
    };
    const double p_rank2 = p_slope(vi_scenario(4, 2, 5.0));
    const double p_rank1 = p_slope(fig3_scenario());

    const bool pass = std::abs(dbl20 - 4.0) <= 0.3 && std::abs(dbl_neg10 - 4.0) <= 0.3 &&
                      std::abs(single20 - 2.0) <= 0.2 && std::abs(p_rank2 - 2.0) <= 0.1 &&
                      std::abs(p_rank1 - 1.0) <= 0.1;
    report(6, "scaling orders", pass,
           "M-slopes: double-IRS " + fmt(dbl20) + " @20dBm, " + fmt(dbl_neg10) +
               " @-10dBm (pre-asymptotic at this SNR), single-IRS " + fmt(single20) +
               "; P-slopes: rank-two " + fmt(p_rank2) + ", rank-one " + fmt(p_rank1));
}

static void criterion7()
{
    std::vector<double> gaps;
    for (double pdbm : {10.0, 20.0, 30.0})
    {
        const Scenario s = vi_scenario(4, 2, pdbm);
        gaps.push_back(std::abs(algorithm1(build_channel_set(s), s).rate -
                                capacity_rank2_highpower(s)));
    }
    const bool pass = gaps[1] < 0.1 && gaps[0] > gaps[1] && gaps[1] > gaps[2];
    report(7, "asymptotic closed form", pass,
           "gap(10 dBm) " + fmt(gaps[0]) + ", gap(20 dBm) " + fmt(gaps[1]) + ", gap(30 dBm) " +
               fmt(gaps[2]) + " bits/s/Hz");
}

static void criterion8()
{
    const std::vector<double> psis = {0.0, std::numbers::pi / 8.0, std::numbers::pi / 4.0,
                                      3.0 * std::numbers::pi / 8.0, std::numbers::pi / 2.0};
    Scenario base = vi_scenario(2, 2, 20.0);
    std::vector<double> rates, rhos;
    for (double psi : psis)
    {
        const Scenario s = psi_scenario(base, psi);
        rates.push_back(algorithm1(build_channel_set(s), s).rate);
        rhos.push_back(predict_rank(s).rho_r);
    }
    bool rate_mono = true, rho_mono = true;
    for (size_t i = 1; i < psis.size(); ++i)
    {
        rate_mono = rate_mono && rates[i] <= rates[i - 1] + 1e-6;
        rho_mono = rho_mono && rhos[i] >= rhos[i - 1] - 1e-12;
    }
    const int rank0 = predict_rank(psi_scenario(base, 0.0)).predicted_rank;
    const int rank90 = predict_rank(psi_scenario(base, std::numbers::pi / 2.0)).predicted_rank;
    report(8, "rank transition", rate_mono && rho_mono && rank0 == 2 && rank90 == 1,
           "rates " + fmt(rates.front()) + " -> " + fmt(rates.back()) + " bits/s/Hz, rho_r " +
               fmt(rhos.front()) + " -> " + fmt(rhos.back()) + ", rank " +
               std::to_string(rank0) + " -> " + std::to_string(rank90));
}

static void criterion9()
{
    // Crossover in M at high power.
    int below = -1, above = -1;
    for (int m : {50, 100, 250, 500, 1000, 2000})
    {
        const Scenario s = vi_scenario(4, 2, 20.0, m);
        const double dbl = algorithm1(build_channel_set(s), s).rate;
        const double sgl = single_irs_capacity(s);
        if (sgl > dbl && below < 0)
            below = m;
        if (dbl > sgl)
            above = m;
    }
    const bool crossover = below > 0 && above > below;

    // Link-ablation dominance in each power regime.
    const Scenario lo = vi_scenario(4, 2, -10.0);
    const ChannelSet cs_lo = build_channel_set(lo);
    const double full_lo = algorithm1(cs_lo, lo).rate;
    const double dbl_only =
        algorithm1(cs_lo, lo, 1e-5, StoppingRule::PerCycle, LinkMask::double_only()).rate;
    const double lo_gap = (full_lo - dbl_only) / full_lo;

    const Scenario hi = vi_scenario(4, 2, 20.0);
    const ChannelSet cs_hi = build_channel_set(hi);
    const double full_hi = algorithm1(cs_hi, hi).rate;
    const double sgl_only =
        algorithm1(cs_hi, hi, 1e-5, StoppingRule::PerCycle, LinkMask::single_only()).rate;
    const double hi_gap = (full_hi - sgl_only) / full_hi;

    report(9, "crossover behavior", crossover && lo_gap < 0.05 && hi_gap < 0.05,
           "single-IRS wins at M=" + std::to_string(below) + ", double-IRS wins by M=" +
               std::to_string(above) + "; double-only gap " + fmt(100.0 * lo_gap) +
               "% @-10dBm, single-only gap " + fmt(100.0 * hi_gap) + "% @20dBm");
}

static void criterion10()
{
    Scenario s = default_scenario();
    s.irs1_count_a = s.irs2_count_a = 5;
    s.irs1_count_b = s.irs2_count_b = 2; // M_i = 10 <= 100

    auto rel_err = [](const Scenario &sc, ChannelId id) {
        const CMat exact = channel_exact(sc, id);
        const CMat fact = channel_factored(sc, id).matrix();
        return (exact - fact).norm() / exact.norm();
    };

    Scenario far = s;
    far.bs_pos *= 10.0;
    far.user_pos *= 10.0;
    far.irs1_pos *= 10.0;
    far.irs2_pos *= 10.0;

    double worst = 0.0, worst_far = 0.0;
    bool shrinks = true;
    for (ChannelId id : {ChannelId::T1, ChannelId::T2, ChannelId::R1, ChannelId::R2, ChannelId::S})
    {
        const double e = rel_err(s, id), ef = rel_err(far, id);
        worst = std::max(worst, e);
        worst_far = std::max(worst_far, ef);
        shrinks = shrinks && ef < e;
    }
    report(10, "far-field model check", worst < 0.05 && shrinks,
           "worst link error " + fmt(worst) + " at M_i=10, " + fmt(worst_far) +
               " after x10 distances");
}

int main()
{
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::cout << (all_ok ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << '\n';
    return all_ok ? 0 : 1;
}
