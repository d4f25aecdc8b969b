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

#ifndef IRSMIMO_OPTIMIZER_HPP
#define IRSMIMO_OPTIMIZER_HPP

#include "capacity.hpp"

namespace irsmimo
{
    /// Structured channel H(g1, g2) = g1*ka*r1L*t1R^T + g2*kb*r2L*t2R^T
    /// + g1*g2*kc*r2L*t1R^T, obtained by plugging the conjugate-matched phase
    /// templates (with free common factors g1, g2) into the three links.
    struct StructuredLinks
    {
        cplx ka{0.0, 0.0}, kb{0.0, 0.0}, kc{0.0, 0.0};
        CVec r1_left, t1_right, r2_left, t2_right;

        static StructuredLinks from_channel_set(const ChannelSet &cs, LinkMask mask = LinkMask::all())
        {
            StructuredLinks sl;
            const double m1 = cs.irs1_elements();
            const double m2 = cs.irs2_elements();
            if (mask.single_reflection)
            {
                sl.ka = cs.r1.path_loss * cs.t1.path_loss * cs.r1.ref_phase * cs.t1.ref_phase * m1;
                sl.kb = cs.r2.path_loss * cs.t2.path_loss * cs.r2.ref_phase * cs.t2.ref_phase * m2;
            }
            if (mask.double_reflection)
                sl.kc = cs.r2.path_loss * cs.s.path_loss * cs.t1.path_loss *
                        cs.r2.ref_phase * cs.s.ref_phase * cs.t1.ref_phase * m1 * m2;
            sl.r1_left = cs.r1.left;
            sl.t1_right = cs.t1.right;
            sl.r2_left = cs.r2.left;
            sl.t2_right = cs.t2.right;
            return sl;
        }

        CMat channel(cplx g1, cplx g2) const
        {
            return (g1 * ka) * (r1_left * t1_right.transpose()) +
                   (g2 * kb) * (r2_left * t2_right.transpose()) +
                   (g1 * g2 * kc) * (r2_left * t1_right.transpose());
        }
    };

    /// The three link matrices with Q^{1/2} absorbed, so that
    /// H(g1,g2) Q^{1/2} = g1 A + g2 B + g1 g2 C.
    struct StructuredSubproblemData
    {
        CMat a, b, c;
    };

    namespace detail
    {
        inline CMat hermitian_sqrt(const CMat &q)
        {
            Eigen::SelfAdjointEigenSolver<CMat> es(q);
            if (es.info() != Eigen::Success)
                throw std::runtime_error("hermitian_sqrt: eigendecomposition failed");
            return es.eigenvectors() *
                   es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                   es.eigenvectors().adjoint();
        }
    }

    inline StructuredSubproblemData build_ABC(const StructuredLinks &sl, const TransmitCovariance &q)
    {
        q.validate();
        const CMat g = detail::hermitian_sqrt(q.q);
        StructuredSubproblemData d;
        d.a = sl.ka * sl.r1_left * (sl.t1_right.transpose() * g);
        d.b = sl.kb * sl.r2_left * (sl.t2_right.transpose() * g);
        d.c = sl.kc * sl.r2_left * (sl.t1_right.transpose() * g);
        return d;
    }

    /// Closed-form maximizer of log det(X + g Y + g* Y^H) over |g| = 1:
    /// g = exp(-j arg nu) with nu the sole nonzero eigenvalue of X^{-1} Y,
    /// computed as tr(X^{-1} Y) since Y has rank <= 1; g = 1 when nu vanishes.
    inline cplx solve_common_phase(const CMat &x, const CMat &y)
    {
        Eigen::LLT<CMat> llt(x);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("solve_common_phase: X is not positive definite");
        const cplx nu = llt.solve(y).trace();
        if (std::abs(nu) <= 1e-12 * y.norm())
            return {1.0, 0.0};
        return std::polar(1.0, -std::arg(nu));
    }

    enum class StoppingRule
    {
        PerCycle,   // relative objective increment of a full Q, g1, g2 cycle
        PerVariable // largest relative increment of any single-variable update
    };

    struct SolveResult
    {
        TransmitCovariance q;
        cplx gamma1{1.0, 0.0}, gamma2{1.0, 0.0};
        CVec phi1, phi2; // per-element reflection coefficients actually deployed
        double rate = 0.0;
        std::vector<double> objective_trace;
        int iterations = 0;
        bool converged = false;
        Eigen::VectorXd singular_values;
        std::vector<double> power_levels;
    };

    namespace detail
    {
        inline double rel_gain(double now, double before)
        {
            return (now - before) / std::max(std::abs(before), 1e-12);
        }

        inline void finalize(SolveResult &r, const CMat &h, double power, double sigma2)
        {
            r.q = optimal_covariance(h, power, sigma2);
            r.rate = log_det_rate(h, r.q, sigma2);
            r.objective_trace.push_back(r.rate);
            const SpectralDecomposition sd = spectral(h);
            r.singular_values = sd.singular_values;
            if (sd.numerical_rank > 0)
                r.power_levels = waterfill(std::vector<double>(sd.singular_values.data(),
                                                               sd.singular_values.data() + sd.numerical_rank),
                                           power, sigma2)
                                     .levels;
        }
    }

    /// Alternating optimization of (Q, g1, g2) on the structured channel:
    /// water-filling for Q, then the closed-form common-phase update for each
    /// IRS, until the relative objective increment falls below eps.
    inline SolveResult algorithm1(const ChannelSet &cs, const Scenario &s, double eps = 1e-5,
                                  StoppingRule rule = StoppingRule::PerCycle,
                                  LinkMask mask = LinkMask::all(), int max_cycles = 500)
    {
        if (eps <= 0.0)
            throw std::invalid_argument("algorithm1: eps must be > 0");
        const double p = s.tx_power, sigma2 = s.noise_power;
        const StructuredLinks sl = StructuredLinks::from_channel_set(cs, mask);

        SolveResult r;
        cplx g1{1.0, 0.0}, g2{1.0, 0.0};
        double last = -1.0;
        for (int cycle = 0; cycle < max_cycles; ++cycle)
        {
            double cycle_start = last;
            const TransmitCovariance q = optimal_covariance(sl.channel(g1, g2), p, sigma2);
            double rate = log_det_rate(sl.channel(g1, g2), q, sigma2);
            r.objective_trace.push_back(rate);
            double step_gain = (cycle == 0) ? 0.0 : detail::rel_gain(rate, last);
            if (cycle == 0)
                cycle_start = rate; // first measurable objective value
            last = rate;

            const StructuredSubproblemData d = build_ABC(sl, q);
            const double inv = 1.0 / sigma2;
            const CMat aa = d.a * d.a.adjoint(), bb = d.b * d.b.adjoint(), cc = d.c * d.c.adjoint();
            const CMat id = CMat::Identity(aa.rows(), aa.cols());

            const CMat x1 = id + inv * (aa + bb + cc + g2 * (d.c * d.a.adjoint()) +
                                        std::conj(g2) * (d.a * d.c.adjoint()));
            const CMat y1 = inv * (std::conj(g2) * (d.a * d.b.adjoint()) + d.c * d.b.adjoint());
            g1 = solve_common_phase(x1, y1);
            rate = log_det_rate(sl.channel(g1, g2), q, sigma2);
            r.objective_trace.push_back(rate);
            step_gain = std::max(step_gain, detail::rel_gain(rate, last));
            last = rate;

            const CMat x2 = id + inv * (aa + bb + cc + g1 * (d.c * d.b.adjoint()) +
                                        std::conj(g1) * (d.b * d.c.adjoint()));
            const CMat y2 = inv * (std::conj(g1) * (d.b * d.a.adjoint()) + d.c * d.a.adjoint());
            g2 = solve_common_phase(x2, y2);
            rate = log_det_rate(sl.channel(g1, g2), q, sigma2);
            r.objective_trace.push_back(rate);
            step_gain = std::max(step_gain, detail::rel_gain(rate, last));
            last = rate;

            r.iterations = cycle + 1;
            const double gain = (rule == StoppingRule::PerCycle) ? detail::rel_gain(last, cycle_start)
                                                                 : step_gain;
            if (cycle_start >= 0.0 && gain < eps)
            {
                r.converged = true;
                break;
            }
        }
        r.gamma1 = g1;
        r.gamma2 = g2;
        r.phi1 = template_phases_irs1(cs, g1);
        r.phi2 = template_phases_irs2(cs, g2);
        detail::finalize(r, sl.channel(g1, g2), p, sigma2);
        return r;
    }

    /// Benchmark: alternating optimization over every individual reflection
    /// coefficient plus Q, on the exact double-reflection coupling. Each
    /// single-phase subproblem is the same log det(X + phi Y + phi* Y^H) form
    /// solved in closed form. Cost grows with M; refused above element_cap.
    inline SolveResult per_element_ao(const ChannelSet &cs, const Scenario &s, double eps = 1e-5,
                                      int max_cycles = 500, int element_cap = 4096)
    {
        if (eps <= 0.0)
            throw std::invalid_argument("per_element_ao: eps must be > 0");
        const int m1 = cs.irs1_elements(), m2 = cs.irs2_elements();
        if (m1 + m2 > element_cap)
            throw std::invalid_argument("per_element_ao: total element count " +
                                        std::to_string(m1 + m2) + " exceeds cap " +
                                        std::to_string(element_cap) +
                                        "; per-element optimization cost grows with M");

        const double p = s.tx_power, sigma2 = s.noise_power;
        const cplx pre_a = cs.r1.path_loss * cs.t1.path_loss * cs.r1.ref_phase * cs.t1.ref_phase;
        const cplx pre_b = cs.r2.path_loss * cs.t2.path_loss * cs.r2.ref_phase * cs.t2.ref_phase;
        const cplx pre_c = cs.r2.path_loss * cs.s.path_loss * cs.t1.path_loss *
                           cs.r2.ref_phase * cs.s.ref_phase * cs.t1.ref_phase;

        // Per-element couplings: through-products of the IRS-side responses.
        const CVec e1a = cs.r1.right.cwiseProduct(cs.t1.left); // phi1 -> a
        const CVec e1s = cs.s.right.cwiseProduct(cs.t1.left);  // phi1 -> c
        const CVec e2b = cs.r2.right.cwiseProduct(cs.t2.left); // phi2 -> b
        const CVec e2s = cs.r2.right.cwiseProduct(cs.s.left);  // phi2 -> c

        CVec phi1 = template_phases_irs1(cs, {1.0, 0.0});
        CVec phi2 = template_phases_irs2(cs, {1.0, 0.0});
        cplx sa = (e1a.array() * phi1.array()).sum(), s1 = (e1s.array() * phi1.array()).sum();
        cplx sb = (e2b.array() * phi2.array()).sum(), s2 = (e2s.array() * phi2.array()).sum();

        const CMat m_a = cs.r1.left * cs.t1.right.transpose();
        const CMat m_b = cs.r2.left * cs.t2.right.transpose();
        const CMat m_c = cs.r2.left * cs.t1.right.transpose();
        auto assemble = [&]() { return pre_a * sa * m_a + pre_b * sb * m_b + pre_c * s2 * s1 * m_c; };

        SolveResult r;
        CMat h = assemble();
        TransmitCovariance q = optimal_covariance(h, p, sigma2);
        double last = log_det_rate(h, q, sigma2);
        r.objective_trace.push_back(last);

        const CMat id = CMat::Identity(cs.num_user_antennas(), cs.num_user_antennas());
        for (int cycle = 0; cycle < max_cycles; ++cycle)
        {
            const double cycle_start = last;
            const CMat g = detail::hermitian_sqrt(q.q);

            // One phase at a time: H = H0 + phi*K with K rank one, so the
            // common-phase solver applies verbatim.
            auto update = [&](cplx &phi, const CMat &k) {
                const CMat h0 = h - phi * k;
                const CMat m0 = h0 * g, mk = k * g;
                const CMat x = id + (m0 * m0.adjoint() + mk * mk.adjoint()) / sigma2;
                const CMat y = (mk * m0.adjoint()) / sigma2;
                const cplx next = solve_common_phase(x, y);
                h = h0 + next * k;
                phi = next;
            };
            for (int m = 0; m < m1; ++m)
            {
                const cplx old = phi1(m);
                const CMat k = pre_a * e1a(m) * m_a + pre_c * s2 * e1s(m) * m_c;
                update(phi1(m), k);
                sa += e1a(m) * (phi1(m) - old);
                s1 += e1s(m) * (phi1(m) - old);
            }
            r.objective_trace.push_back(log_det_rate(h, q, sigma2));
            for (int m = 0; m < m2; ++m)
            {
                const cplx old = phi2(m);
                const CMat k = pre_b * e2b(m) * m_b + pre_c * s1 * e2s(m) * m_c;
                update(phi2(m), k);
                sb += e2b(m) * (phi2(m) - old);
                s2 += e2s(m) * (phi2(m) - old);
            }
            r.objective_trace.push_back(log_det_rate(h, q, sigma2));

            h = assemble(); // resync the incremental state before the Q step
            q = optimal_covariance(h, p, sigma2);
            last = log_det_rate(h, q, sigma2);
            r.objective_trace.push_back(last);
            r.iterations = cycle + 1;
            if (detail::rel_gain(last, cycle_start) < eps)
            {
                r.converged = true;
                break;
            }
        }
        r.phi1 = phi1;
        r.phi2 = phi2;
        detail::finalize(r, h, p, sigma2);
        return r;
    }

    /// Baseline: conjugate-matched templates with g1 = g2 = 1 and water-filled Q.
    inline SolveResult heuristic_fixed_phase(const ChannelSet &cs, const Scenario &s,
                                             LinkMask mask = LinkMask::all())
    {
        const StructuredLinks sl = StructuredLinks::from_channel_set(cs, mask);
        SolveResult r;
        r.phi1 = template_phases_irs1(cs, r.gamma1);
        r.phi2 = template_phases_irs2(cs, r.gamma2);
        r.iterations = 1;
        r.converged = true;
        detail::finalize(r, sl.channel(r.gamma1, r.gamma2), s.tx_power, s.noise_power);
        return r;
    }

} // namespace irsmimo

#endif
