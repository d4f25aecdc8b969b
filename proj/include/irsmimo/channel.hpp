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

#ifndef IRSMIMO_CHANNEL_HPP
#define IRSMIMO_CHANNEL_HPP

#include "geometry.hpp"

#include <complex>
#include <numbers>

namespace irsmimo
{
    using cplx = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;

    inline constexpr double two_pi = 2.0 * std::numbers::pi;

    enum class ChannelId
    {
        T1, // BS -> IRS 1
        T2, // BS -> IRS 2
        R1, // IRS 1 -> user
        R2, // IRS 2 -> user
        S   // IRS 1 -> IRS 2
    };

    /// Phase sign of an array response: departure responses carry +, arrivals -.
    enum class ResponseSign
    {
        Departure,
        Arrival
    };

    /// ULA response: entry n (0-based) is exp(+-j (2 pi / lambda) n l cos(omega)).
    inline CVec ula_response(int count, double spacing, double wavelength, double omega, ResponseSign sign)
    {
        if (count < 1 || spacing <= 0.0 || wavelength <= 0.0)
            throw std::invalid_argument("ula_response: counts and spacings must be positive");
        const double s = (sign == ResponseSign::Departure) ? 1.0 : -1.0;
        const double step = s * two_pi / wavelength * spacing * std::cos(omega);
        CVec v(count);
        for (int n = 0; n < count; ++n)
            v(n) = std::polar(1.0, step * n);
        return v;
    }

    /// URA response over a count_a x count_b grid, flattened per the 1-based
    /// index map m = 1 + m_a + m_b * count_a.
    inline CVec ura_response(int count_a, int count_b, double spacing, double wavelength,
                             double omega_a, double omega_b, ResponseSign sign)
    {
        if (count_a < 1 || count_b < 1 || spacing <= 0.0 || wavelength <= 0.0)
            throw std::invalid_argument("ura_response: counts and spacings must be positive");
        const double s = (sign == ResponseSign::Departure) ? 1.0 : -1.0;
        const double ka = s * two_pi / wavelength * spacing * std::cos(omega_a);
        const double kb = s * two_pi / wavelength * spacing * std::cos(omega_b);
        CVec v(count_a * count_b);
        for (int mb = 0; mb < count_b; ++mb)
            for (int ma = 0; ma < count_a; ++ma)
                v(ura_index(ma, mb, count_a) - 1) = std::polar(1.0, ka * ma + kb * mb);
        return v;
    }

    /// Far-field rank-one channel: path_loss * ref_phase * left * right^T.
    struct FactoredChannel
    {
        double path_loss = 0.0; // sqrt(alpha) / d
        cplx ref_phase{1.0, 0.0}; // exp(-j 2 pi d / lambda)
        CVec left;  // response at the receiving end
        CVec right; // response at the transmitting end

        CMat matrix() const { return (path_loss * ref_phase) * (left * right.transpose()); }
    };

    struct ChannelSet
    {
        FactoredChannel t1, t2, r1, r2, s;

        int num_bs_antennas() const { return static_cast<int>(t1.right.size()); }
        int num_user_antennas() const { return static_cast<int>(r1.left.size()); }
        int irs1_elements() const { return static_cast<int>(t1.left.size()); }
        int irs2_elements() const { return static_cast<int>(t2.left.size()); }
    };

    inline FactoredChannel channel_factored(const Scenario &s, ChannelId which)
    {
        const LinkGeometry g = link_geometry(s);
        const double sqrt_alpha = std::sqrt(s.ref_gain);
        FactoredChannel f;
        auto set_ref = [&](double d) {
            f.path_loss = sqrt_alpha / d;
            f.ref_phase = std::polar(1.0, -two_pi * d / s.wavelength);
        };
        switch (which)
        {
        case ChannelId::T1:
            set_ref(g.d_t1);
            f.left = ura_response(s.irs1_count_a, s.irs1_count_b, s.element_spacing, s.wavelength,
                                  g.t1_a, g.t1_b, ResponseSign::Arrival);
            f.right = ula_response(s.num_bs_antennas, s.antenna_spacing, s.wavelength, g.t1_bs,
                                   ResponseSign::Departure);
            break;
        case ChannelId::T2:
            set_ref(g.d_t2);
            f.left = ura_response(s.irs2_count_a, s.irs2_count_b, s.element_spacing, s.wavelength,
                                  g.t2_a, g.t2_b, ResponseSign::Arrival);
            f.right = ula_response(s.num_bs_antennas, s.antenna_spacing, s.wavelength, g.t2_bs,
                                   ResponseSign::Departure);
            break;
        case ChannelId::R1:
            set_ref(g.d_r1);
            f.left = ula_response(s.num_user_antennas, s.antenna_spacing, s.wavelength, g.r1_user,
                                  ResponseSign::Arrival);
            f.right = ura_response(s.irs1_count_a, s.irs1_count_b, s.element_spacing, s.wavelength,
                                   g.r1_a, g.r1_b, ResponseSign::Departure);
            break;
        case ChannelId::R2:
            set_ref(g.d_r2);
            f.left = ula_response(s.num_user_antennas, s.antenna_spacing, s.wavelength, g.r2_user,
                                  ResponseSign::Arrival);
            f.right = ura_response(s.irs2_count_a, s.irs2_count_b, s.element_spacing, s.wavelength,
                                   g.r2_a, g.r2_b, ResponseSign::Departure);
            break;
        case ChannelId::S:
            set_ref(g.d_s);
            f.left = ura_response(s.irs2_count_a, s.irs2_count_b, s.element_spacing, s.wavelength,
                                  g.s_2a, g.s_2b, ResponseSign::Arrival);
            f.right = ura_response(s.irs1_count_a, s.irs1_count_b, s.element_spacing, s.wavelength,
                                   g.s_1a, g.s_1b, ResponseSign::Departure);
            break;
        }
        return f;
    }

    inline ChannelSet build_channel_set(const Scenario &s)
    {
        s.validate();
        ChannelSet cs;
        cs.t1 = channel_factored(s, ChannelId::T1);
        cs.t2 = channel_factored(s, ChannelId::T2);
        cs.r1 = channel_factored(s, ChannelId::R1);
        cs.r2 = channel_factored(s, ChannelId::R2);
        cs.s = channel_factored(s, ChannelId::S);
        return cs;
    }

    namespace detail
    {
        // Physical positions of every antenna/element of one link endpoint.
        inline std::vector<Vec3> ula_positions(const Vec3 &anchor, const Vec3 &axis, int count, double spacing)
        {
            std::vector<Vec3> p(count);
            for (int n = 0; n < count; ++n)
                p[n] = anchor + n * spacing * axis;
            return p;
        }

        inline std::vector<Vec3> ura_positions(const Vec3 &anchor, const Vec3 &axis_a, const Vec3 &axis_b,
                                               int count_a, int count_b, double spacing)
        {
            std::vector<Vec3> p(count_a * count_b);
            for (int mb = 0; mb < count_b; ++mb)
                for (int ma = 0; ma < count_a; ++ma)
                    p[ura_index(ma, mb, count_a) - 1] = anchor + ma * spacing * axis_a + mb * spacing * axis_b;
            return p;
        }

        inline CMat exact_los(const std::vector<Vec3> &rx, const std::vector<Vec3> &tx,
                              double alpha, double wavelength)
        {
            CMat h(rx.size(), tx.size());
            const double sqrt_alpha = std::sqrt(alpha);
            for (size_t c = 0; c < tx.size(); ++c)
                for (size_t r = 0; r < rx.size(); ++r)
                {
                    const double d = (rx[r] - tx[c]).norm();
                    if (d <= 0.0)
                        throw std::domain_error("channel_exact: zero element distance");
                    h(r, c) = std::polar(sqrt_alpha / d, -two_pi * d / wavelength);
                }
            return h;
        }
    }

    /// Element-wise exact LoS channel from physical element positions.
    inline CMat channel_exact(const Scenario &s, ChannelId which)
    {
        const auto bs = detail::ula_positions(s.bs_pos, s.bs_axis, s.num_bs_antennas, s.antenna_spacing);
        const auto user = detail::ula_positions(s.user_pos, s.user_axis, s.num_user_antennas, s.antenna_spacing);
        const auto irs1 = detail::ura_positions(s.irs1_pos, s.irs1_axis_a, s.irs1_axis_b,
                                                s.irs1_count_a, s.irs1_count_b, s.element_spacing);
        const auto irs2 = detail::ura_positions(s.irs2_pos, s.irs2_axis_a, s.irs2_axis_b,
                                                s.irs2_count_a, s.irs2_count_b, s.element_spacing);
        switch (which)
        {
        case ChannelId::T1:
            return detail::exact_los(irs1, bs, s.ref_gain, s.wavelength);
        case ChannelId::T2:
            return detail::exact_los(irs2, bs, s.ref_gain, s.wavelength);
        case ChannelId::R1:
            return detail::exact_los(user, irs1, s.ref_gain, s.wavelength);
        case ChannelId::R2:
            return detail::exact_los(user, irs2, s.ref_gain, s.wavelength);
        case ChannelId::S:
            return detail::exact_los(irs2, irs1, s.ref_gain, s.wavelength);
        }
        throw std::invalid_argument("channel_exact: unknown channel id");
    }

    /// IRS reflection coefficients: per-element vectors, or two common phase
    /// shifts applied over the conjugate-matched template.
    struct PhaseConfig
    {
        enum class Mode
        {
            PerElement,
            Structured
        };

        Mode mode = Mode::Structured;
        CVec phi1, phi2;          // PerElement
        cplx gamma1{1.0, 0.0};    // Structured
        cplx gamma2{1.0, 0.0};

        static PhaseConfig per_element(CVec p1, CVec p2)
        {
            PhaseConfig pc;
            pc.mode = Mode::PerElement;
            pc.phi1 = std::move(p1);
            pc.phi2 = std::move(p2);
            return pc;
        }

        static PhaseConfig structured(cplx g1, cplx g2)
        {
            PhaseConfig pc;
            pc.mode = Mode::Structured;
            pc.gamma1 = g1;
            pc.gamma2 = g2;
            return pc;
        }
    };

    /// Conjugate-matched per-element phases of IRS 1: gamma * conj(t_1L) * conj(r_1R).
    inline CVec template_phases_irs1(const ChannelSet &cs, cplx gamma)
    {
        return gamma * cs.t1.left.conjugate().cwiseProduct(cs.r1.right.conjugate());
    }

    inline CVec template_phases_irs2(const ChannelSet &cs, cplx gamma)
    {
        return gamma * cs.t2.left.conjugate().cwiseProduct(cs.r2.right.conjugate());
    }

    inline PhaseConfig expand_phases(const ChannelSet &cs, const PhaseConfig &pc)
    {
        if (pc.mode == PhaseConfig::Mode::PerElement)
            return pc;
        return PhaseConfig::per_element(template_phases_irs1(cs, pc.gamma1),
                                        template_phases_irs2(cs, pc.gamma2));
    }

    /// Complex gains of the three reflection links: a (via IRS 1), b (via IRS 2),
    /// c (double reflection, exact) and c_approx (double reflection with the
    /// inter-IRS responses replaced by the parallel-link approximation).
    struct LinkCoefficients
    {
        cplx a, b, c, c_approx;
    };

    inline LinkCoefficients link_coefficients(const ChannelSet &cs, const PhaseConfig &pc)
    {
        const PhaseConfig p = expand_phases(cs, pc);
        if (p.phi1.size() != cs.irs1_elements() || p.phi2.size() != cs.irs2_elements())
            throw std::invalid_argument("link_coefficients: phase vector length mismatch");

        auto through = [](const CVec &rx, const CVec &phi, const CVec &tx) {
            return (rx.array() * phi.array() * tx.array()).sum();
        };

        LinkCoefficients lc;
        lc.a = cs.r1.path_loss * cs.t1.path_loss * cs.r1.ref_phase * cs.t1.ref_phase *
               through(cs.r1.right, p.phi1, cs.t1.left);
        lc.b = cs.r2.path_loss * cs.t2.path_loss * cs.r2.ref_phase * cs.t2.ref_phase *
               through(cs.r2.right, p.phi2, cs.t2.left);
        const cplx pre_c = cs.r2.path_loss * cs.s.path_loss * cs.t1.path_loss *
                           cs.r2.ref_phase * cs.s.ref_phase * cs.t1.ref_phase;
        lc.c = pre_c * through(cs.r2.right, p.phi2, cs.s.left) * through(cs.s.right, p.phi1, cs.t1.left);
        lc.c_approx = pre_c * through(cs.r2.right, p.phi2, cs.t2.left) * through(cs.r1.right, p.phi1, cs.t1.left);
        return lc;
    }

    /// Double-reflection coupling: exact inter-IRS responses, or the parallel-link
    /// approximation the common-phase optimizer is built on.
    enum class CouplingModel
    {
        Exact,
        Approximate
    };

    /// Selects which reflection links contribute to the effective channel.
    struct LinkMask
    {
        bool single_reflection = true; // the two BS-IRSi-user links
        bool double_reflection = true; // the BS-IRS1-IRS2-user link

        static LinkMask all() { return {}; }
        static LinkMask single_only() { return {true, false}; }
        static LinkMask double_only() { return {false, true}; }
    };

    /// Effective N_r x N_t BS-user channel: superposition of the two
    /// single-reflection links and the double-reflection link.
    inline CMat effective_channel(const ChannelSet &cs, const PhaseConfig &pc,
                                  CouplingModel model = CouplingModel::Exact,
                                  LinkMask mask = LinkMask::all())
    {
        const LinkCoefficients lc = link_coefficients(cs, pc);
        // The structured form is defined on the approximate coupling.
        const cplx cc = (pc.mode == PhaseConfig::Mode::Structured || model == CouplingModel::Approximate)
                            ? lc.c_approx
                            : lc.c;
        CMat h = CMat::Zero(cs.num_user_antennas(), cs.num_bs_antennas());
        if (mask.single_reflection)
        {
            h += lc.a * (cs.r1.left * cs.t1.right.transpose());
            h += lc.b * (cs.r2.left * cs.t2.right.transpose());
        }
        if (mask.double_reflection)
            h += cc * (cs.r2.left * cs.t1.right.transpose());
        return h;
    }

    /// Normalized correlation |sin(pi N Theta) / (N sin(pi Theta))| between two
    /// length-N array responses separated by Theta; 1 at integer Theta.
    inline double response_correlation(int count, double theta)
    {
        if (count < 1)
            throw std::invalid_argument("response_correlation: count must be >= 1");
        const double denom = std::sin(std::numbers::pi * theta);
        if (std::abs(denom) < 1e-9)
            return 1.0;
        return std::abs(std::sin(std::numbers::pi * count * theta) / (count * denom));
    }

} // namespace irsmimo

#endif
