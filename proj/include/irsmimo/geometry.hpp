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

#ifndef IRSMIMO_GEOMETRY_HPP
#define IRSMIMO_GEOMETRY_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace irsmimo
{
    using Vec3 = Eigen::Vector3d;

    /// Physical deployment: BS and user ULAs, two IRS URAs, carrier and power budget.
    /// All lengths in meters, powers in watts, gains linear.
    struct Scenario
    {
        Vec3 bs_pos{1.0, 0.0, 0.0};   // u_t
        Vec3 user_pos{1.0, 50.0, 0.0}; // u_r
        Vec3 irs1_pos{0.0, 0.0, 0.0};  // u_1
        Vec3 irs2_pos{0.0, 50.0, 0.0}; // u_2

        Vec3 bs_axis{-1.0, 0.0, 0.0};   // v_t, unit
        Vec3 user_axis{-1.0, 0.0, 0.0}; // v_r, unit
        Vec3 irs1_axis_a{-0.5, 0.8660254037844386, 0.0};
        Vec3 irs1_axis_b{0.0, 0.0, 1.0};
        Vec3 irs2_axis_a{0.0, 0.0, 1.0};
        Vec3 irs2_axis_b{-0.5, -0.8660254037844386, 0.0};

        int num_bs_antennas = 2;   // N_t
        int num_user_antennas = 2; // N_r
        int irs1_count_a = 25;     // M_1^(a)
        int irs1_count_b = 20;     // M_1^(b)
        int irs2_count_a = 25;
        int irs2_count_b = 20;

        double antenna_spacing = 0.0435; // l_n
        double element_spacing = 0.0087; // l_m
        double wavelength = 0.087;
        double ref_gain = 5.011872336272722e-05; // alpha, linear power gain at 1 m (-43 dB)
        double tx_power = 3.1622776601683794e-03; // P, watts (5 dBm)
        double noise_power = 1e-10;               // sigma^2, watts (-70 dBm)

        int irs1_elements() const { return irs1_count_a * irs1_count_b; }
        int irs2_elements() const { return irs2_count_a * irs2_count_b; }
        int total_elements() const { return irs1_elements() + irs2_elements(); }

        void validate() const;
    };

    namespace detail
    {
        inline void require(bool ok, const std::string &msg)
        {
            if (!ok)
                throw std::invalid_argument(msg);
        }
    }

    inline void Scenario::validate() const
    {
        constexpr double tol = 1e-12;
        detail::require(std::abs(bs_axis.norm() - 1.0) < tol, "bs_axis must be a unit vector");
        detail::require(std::abs(user_axis.norm() - 1.0) < tol, "user_axis must be a unit vector");
        detail::require(std::abs(irs1_axis_a.norm() - 1.0) < tol, "irs1_axis_a must be a unit vector");
        detail::require(std::abs(irs1_axis_b.norm() - 1.0) < tol, "irs1_axis_b must be a unit vector");
        detail::require(std::abs(irs2_axis_a.norm() - 1.0) < tol, "irs2_axis_a must be a unit vector");
        detail::require(std::abs(irs2_axis_b.norm() - 1.0) < tol, "irs2_axis_b must be a unit vector");
        detail::require(std::abs(irs1_axis_a.dot(irs1_axis_b)) < tol, "irs1 base directions must be orthogonal");
        detail::require(std::abs(irs2_axis_a.dot(irs2_axis_b)) < tol, "irs2 base directions must be orthogonal");
        detail::require(num_bs_antennas >= 1, "num_bs_antennas must be >= 1");
        detail::require(num_user_antennas >= 1, "num_user_antennas must be >= 1");
        detail::require(irs1_count_a >= 1 && irs1_count_b >= 1, "irs1 element counts must be >= 1");
        detail::require(irs2_count_a >= 1 && irs2_count_b >= 1, "irs2 element counts must be >= 1");
        detail::require(antenna_spacing > 0.0, "antenna_spacing must be > 0");
        detail::require(element_spacing > 0.0, "element_spacing must be > 0");
        detail::require(wavelength > 0.0, "wavelength must be > 0");
        detail::require(ref_gain > 0.0, "ref_gain must be > 0");
        detail::require(tx_power > 0.0, "tx_power must be > 0");
        detail::require(noise_power > 0.0, "noise_power must be > 0");
        detail::require((irs1_pos - bs_pos).norm() > 0.0, "irs1_pos must differ from bs_pos");
        detail::require((irs2_pos - user_pos).norm() > 0.0, "irs2_pos must differ from user_pos");
        detail::require((irs2_pos - irs1_pos).norm() > 0.0, "irs2_pos must differ from irs1_pos");
    }

    /// Link distances and the angle table that parameterizes the LoS array responses.
    /// Angle naming: <link>_<axis>, e.g. t1_bs is the angle between the BS->IRS1
    /// direction and the BS array axis, r2_a between IRS2->user and IRS2's first axis.
    struct LinkGeometry
    {
        double d_t1, d_t2, d_r1, d_r2, d_s;

        double t1_bs, t1_a, t1_b;
        double t2_bs, t2_a, t2_b;
        double r1_user, r1_a, r1_b;
        double r2_user, r2_a, r2_b;
        double s_1a, s_1b, s_2a, s_2b;
    };

    /// Angle between the direction u_from -> u_to and the unit axis v, in [0, pi].
    /// The arccos argument is clamped to [-1, 1] to absorb rounding in the
    /// normalized inner product.
    inline double angle_between(const Vec3 &u_from, const Vec3 &u_to, const Vec3 &v)
    {
        const Vec3 d = u_to - u_from;
        const double n = d.norm();
        if (n <= 0.0)
            throw std::domain_error("angle_between: coincident endpoints (degenerate geometry)");
        const double c = std::clamp(d.dot(v) / (n * v.norm()), -1.0, 1.0);
        return std::acos(c);
    }

    /// Flat URA element index, 1-based: m = 1 + m_a + m_b * M_a.
    inline int ura_index(int m_a, int m_b, int count_a)
    {
        if (count_a < 1 || m_a < 0 || m_a >= count_a || m_b < 0)
            throw std::out_of_range("ura_index: sub-index out of range");
        return 1 + m_a + m_b * count_a;
    }

    /// Inverse of ura_index: flat 1-based index -> (m_a, m_b).
    inline std::pair<int, int> ura_subindices(int m, int count_a)
    {
        if (count_a < 1 || m < 1)
            throw std::out_of_range("ura_subindices: index out of range");
        const int z = m - 1;
        return {z % count_a, z / count_a};
    }

    inline LinkGeometry link_geometry(const Scenario &s)
    {
        LinkGeometry g{};
        g.d_t1 = (s.irs1_pos - s.bs_pos).norm();
        g.d_t2 = (s.irs2_pos - s.bs_pos).norm();
        g.d_r1 = (s.user_pos - s.irs1_pos).norm();
        g.d_r2 = (s.user_pos - s.irs2_pos).norm();
        g.d_s = (s.irs2_pos - s.irs1_pos).norm();

        g.t1_bs = angle_between(s.bs_pos, s.irs1_pos, s.bs_axis);
        g.t1_a = angle_between(s.bs_pos, s.irs1_pos, s.irs1_axis_a);
        g.t1_b = angle_between(s.bs_pos, s.irs1_pos, s.irs1_axis_b);
        g.t2_bs = angle_between(s.bs_pos, s.irs2_pos, s.bs_axis);
        g.t2_a = angle_between(s.bs_pos, s.irs2_pos, s.irs2_axis_a);
        g.t2_b = angle_between(s.bs_pos, s.irs2_pos, s.irs2_axis_b);

        g.r1_user = angle_between(s.irs1_pos, s.user_pos, s.user_axis);
        g.r1_a = angle_between(s.irs1_pos, s.user_pos, s.irs1_axis_a);
        g.r1_b = angle_between(s.irs1_pos, s.user_pos, s.irs1_axis_b);
        g.r2_user = angle_between(s.irs2_pos, s.user_pos, s.user_axis);
        g.r2_a = angle_between(s.irs2_pos, s.user_pos, s.irs2_axis_a);
        g.r2_b = angle_between(s.irs2_pos, s.user_pos, s.irs2_axis_b);

        g.s_1a = angle_between(s.irs1_pos, s.irs2_pos, s.irs1_axis_a);
        g.s_1b = angle_between(s.irs1_pos, s.irs2_pos, s.irs1_axis_b);
        g.s_2a = angle_between(s.irs1_pos, s.irs2_pos, s.irs2_axis_a);
        g.s_2b = angle_between(s.irs1_pos, s.irs2_pos, s.irs2_axis_b);
        return g;
    }

} // namespace irsmimo

#endif
