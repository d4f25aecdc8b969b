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

#ifndef IRSMIMO_ANALYSIS_HPP
#define IRSMIMO_ANALYSIS_HPP

#include "optimizer.hpp"

#include <utility>

namespace irsmimo
{
    inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

    /// Channel-rank prediction from the array-response correlations at the BS
    /// and user sides. The channel is rank-two iff neither correlation is 1.
    struct RankPrediction
    {
        int predicted_rank = 1;
        double theta_t = 0.0, theta_r = 0.0;
        double rho_t = 1.0, rho_r = 1.0;
        bool borderline = false; // a correlation sits inside the rho == 1 band without being exactly 1
    };

    inline RankPrediction predict_rank(const Scenario &s)
    {
        s.validate();
        const LinkGeometry g = link_geometry(s);
        RankPrediction rp;
        const double c = s.antenna_spacing / s.wavelength;
        rp.theta_t = c * (std::cos(g.t2_bs) - std::cos(g.t1_bs));
        rp.theta_r = c * (std::cos(g.r1_user) - std::cos(g.r2_user));
        rp.rho_t = response_correlation(s.num_bs_antennas, rp.theta_t);
        rp.rho_r = response_correlation(s.num_user_antennas, rp.theta_r);
        const bool one_t = std::abs(rp.rho_t - 1.0) < 1e-9;
        const bool one_r = std::abs(rp.rho_r - 1.0) < 1e-9;
        rp.predicted_rank = (!one_t && !one_r) ? 2 : 1;
        rp.borderline = (one_t && rp.rho_t != 1.0) || (one_r && rp.rho_r != 1.0);
        return rp;
    }

    /// High-power capacity of the rank-two channel with the conjugate-matched
    /// templates and an even element split:
    /// log2( alpha^4 Nt^2 M^4 P^2 / (16 d^2... sigma^4) (1-rho_t^2)(1-rho_r^2) ).
    inline double capacity_rank2_highpower(const Scenario &s)
    {
        const RankPrediction rp = predict_rank(s);
        if (rp.predicted_rank != 2)
            throw std::domain_error("capacity_rank2_highpower: scenario is rank-one");
        if (s.irs1_elements() != s.irs2_elements())
            throw std::invalid_argument("capacity_rank2_highpower: requires the even split M1 = M2");
        const LinkGeometry g = link_geometry(s);
        const double m = s.total_elements();
        const double nt = s.num_bs_antennas;
        const double num = std::pow(s.ref_gain, 4) * nt * nt * std::pow(m, 4) * s.tx_power * s.tx_power;
        const double den = 16.0 * std::pow(g.d_r1 * g.d_t1 * g.d_r2 * g.d_t2, 2) *
                           s.noise_power * s.noise_power;
        return std::log2(num / den * (1.0 - rp.rho_t * rp.rho_t) * (1.0 - rp.rho_r * rp.rho_r));
    }

    /// Exact capacity of the rank-one channel (rho_t = 1 case, N_r = 2) together
    /// with the maximizing common phase shifts. arg(g1) co-phases b with the
    /// double-reflection term; arg(g2) additionally aligns a with b + c and
    /// absorbs the pi*Theta_r offset of the cosine term (plus pi when
    /// cos(pi*Theta_r) < 0, where the cosine itself must be -1).
    struct RankOneCapacity
    {
        double rate = 0.0;
        cplx gamma1{1.0, 0.0}, gamma2{1.0, 0.0};
    };

    inline RankOneCapacity capacity_rank1_closedform(const Scenario &s)
    {
        const RankPrediction rp = predict_rank(s);
        if (std::abs(rp.rho_t - 1.0) >= 1e-9)
            throw std::domain_error("capacity_rank1_closedform: requires rho_t = 1 (t1R = t2R)");
        if (s.num_user_antennas != 2)
            throw std::domain_error("capacity_rank1_closedform: closed form requires N_r = 2");

        const LinkGeometry g = link_geometry(s);
        const double alpha = s.ref_gain;
        const double m1 = s.irs1_elements(), m2 = s.irs2_elements();
        const double amp_a = alpha * m1 / (g.d_r1 * g.d_t1);
        const double amp_bc = alpha * m2 / (g.d_r2 * g.d_t2) +
                              std::pow(alpha, 1.5) * m1 * m2 / (g.d_r2 * g.d_s * g.d_t1);

        RankOneCapacity rc;
        const double nt = s.num_bs_antennas;
        rc.rate = std::log2(1.0 + 2.0 * nt * s.tx_power / s.noise_power *
                                      (amp_a * amp_a + amp_bc * amp_bc +
                                       2.0 * amp_a * amp_bc * rp.rho_r));

        const double arg_ba = -two_pi * (g.d_r1 + g.d_t1) / s.wavelength;
        const double arg_bb = -two_pi * (g.d_r2 + g.d_t2) / s.wavelength;
        const double arg_bc = -two_pi * (g.d_r2 + g.d_s + g.d_t1) / s.wavelength;
        double arg_g1 = arg_bb - arg_bc;
        double arg_g2 = arg_ba - arg_bc - std::numbers::pi * rp.theta_r;
        if (std::cos(std::numbers::pi * rp.theta_r) < 0.0)
            arg_g2 += std::numbers::pi;
        rc.gamma1 = std::polar(1.0, arg_g1);
        rc.gamma2 = std::polar(1.0, arg_g2);
        return rc;
    }

    /// Single-IRS baseline channel: all M elements at IRS 2, conjugate-matched
    /// phases, i.e. H = (alpha M beta_b / (d_R2 d_T2)) r2L t2R^T with M taken
    /// from the scenario's total element count.
    inline CMat single_irs_channel(const ChannelSet &cs)
    {
        const double m = cs.irs1_elements() + cs.irs2_elements();
        const cplx k = cs.r2.path_loss * cs.t2.path_loss * cs.r2.ref_phase * cs.t2.ref_phase * m;
        return k * (cs.r2.left * cs.t2.right.transpose());
    }

    /// Capacity of the single-IRS baseline. For N_r = 2 this is
    /// log2(1 + 2 alpha^2 Nt M^2 P / (d_R2^2 d_T2^2 sigma^2)); the general-N_r
    /// value follows from the rank-one MRT rate with response norms Nt, Nr.
    inline double single_irs_capacity(const Scenario &s)
    {
        s.validate();
        const LinkGeometry g = link_geometry(s);
        const double m = s.total_elements();
        const double gain = s.ref_gain * m / (g.d_r2 * g.d_t2);
        return std::log2(1.0 + static_cast<double>(s.num_user_antennas) * s.num_bs_antennas *
                                   gain * gain * s.tx_power / s.noise_power);
    }

    /// Determinant identity for the rank-two structured channel:
    /// (delta1 delta2)^2 = |det(H H^H)| = 4 Nt^2 |a b|^2 (1-rho_t^2)(1-rho_r^2).
    inline std::pair<double, double> det_product_identity(const Scenario &s, const PhaseConfig &pc)
    {
        if (s.num_user_antennas != 2)
            throw std::domain_error("det_product_identity: requires N_r = 2");
        const RankPrediction rp = predict_rank(s);
        const ChannelSet cs = build_channel_set(s);
        const LinkCoefficients lc = link_coefficients(cs, pc);
        const double nt = s.num_bs_antennas;
        const double closed = 4.0 * nt * nt * std::norm(lc.a * lc.b) *
                              (1.0 - rp.rho_t * rp.rho_t) * (1.0 - rp.rho_r * rp.rho_r);
        const CMat h = effective_channel(cs, pc, CouplingModel::Approximate);
        const double numeric = std::abs((h * h.adjoint()).determinant());
        return {closed, numeric};
    }

    /// Trace identity: sum of squared channel entries from the explicit
    /// entry formula vs tr(H H^H) from the assembled matrix.
    inline std::pair<double, double> trace_identity(const Scenario &s, const PhaseConfig &pc)
    {
        const LinkGeometry g = link_geometry(s);
        const ChannelSet cs = build_channel_set(s);
        const LinkCoefficients lc = link_coefficients(cs, pc);
        const double k = two_pi * s.antenna_spacing / s.wavelength;
        double sum = 0.0;
        for (int nr = 0; nr < s.num_user_antennas; ++nr)
            for (int nt = 0; nt < s.num_bs_antennas; ++nt)
            {
                const cplx e = lc.a * std::polar(1.0, -k * (nr * std::cos(g.r1_user) - nt * std::cos(g.t1_bs))) +
                               lc.b * std::polar(1.0, -k * (nr * std::cos(g.r2_user) - nt * std::cos(g.t2_bs))) +
                               lc.c_approx * std::polar(1.0, -k * (nr * std::cos(g.r2_user) - nt * std::cos(g.t1_bs)));
                sum += std::norm(e);
            }
        const CMat h = effective_channel(cs, pc, CouplingModel::Approximate);
        return {sum, (h * h.adjoint()).trace().real()};
    }

    /// Closed-form tr(H H^H) for the rank-one (rho_t = 1, N_r = 2) channel at
    /// given structured phases, Eq.-level oracle form with the signed cosine.
    inline double trace_rank1_closedform(const Scenario &s, const PhaseConfig &pc)
    {
        const RankPrediction rp = predict_rank(s);
        if (std::abs(rp.rho_t - 1.0) >= 1e-9 || s.num_user_antennas != 2)
            throw std::domain_error("trace_rank1_closedform: requires rho_t = 1 and N_r = 2");
        const ChannelSet cs = build_channel_set(s);
        const LinkCoefficients lc = link_coefficients(cs, pc);
        const cplx bc = lc.b + lc.c_approx;
        const double nt = s.num_bs_antennas;
        const double delta = std::arg(bc) - std::arg(lc.a);
        const double pt = std::numbers::pi * rp.theta_r;
        return 2.0 * nt * (std::norm(lc.a) + std::norm(bc)) +
               4.0 * nt * std::abs(lc.a) * std::abs(bc) * std::cos(pt) * std::cos(pt + delta);
    }

    enum class ScalingAxis
    {
        M,
        P
    };

    /// Estimated asymptotic scaling order: mean rate increment per doubling of
    /// the abscissa over the last two steps of a constant-ratio sweep.
    struct ScalingFit
    {
        ScalingAxis axis = ScalingAxis::M;
        std::vector<std::pair<double, double>> points;
        double slope = 0.0;
    };

    inline ScalingFit scaling_fit(const std::vector<std::pair<double, double>> &points, ScalingAxis axis)
    {
        if (points.size() < 3)
            throw std::invalid_argument("scaling_fit: needs at least 3 points");
        for (size_t i = 1; i < points.size(); ++i)
            if (points[i].first <= points[i - 1].first)
                throw std::invalid_argument("scaling_fit: abscissae must be strictly increasing");
        const double ratio = points[1].first / points[0].first;
        for (size_t i = 1; i < points.size(); ++i)
        {
            const double r = points[i].first / points[i - 1].first;
            if (std::abs(r / ratio - 1.0) > 1e-6)
                throw std::invalid_argument("scaling_fit: abscissae must grow by a constant ratio");
        }
        ScalingFit f;
        f.axis = axis;
        f.points = points;
        // Last two steps only: small abscissae are pre-asymptotic. Normalizing
        // by log2(ratio) expresses the slope in bits per doubling.
        const size_t n = points.size();
        const double s1 = (points[n - 1].second - points[n - 2].second) / std::log2(ratio);
        const double s2 = (points[n - 2].second - points[n - 3].second) / std::log2(ratio);
        f.slope = 0.5 * (s1 + s2);
        return f;
    }

} // namespace irsmimo

#endif
