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

#ifndef IRSMIMO_HARNESS_HPP
#define IRSMIMO_HARNESS_HPP

#include "analysis.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

namespace irsmimo
{
    /// I/O or parse failure (exit code 2 at the CLI), as opposed to a
    /// validation failure (exit code 1).
    struct config_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    inline Scenario default_scenario() { return Scenario{}; }

    /// Rank-one variant of the default deployment: BS and user arrays pointed
    /// along z, so both IRSs see identical angles at each array end.
    inline Scenario fig3_scenario()
    {
        Scenario s;
        s.bs_axis = Vec3{0.0, 0.0, 1.0};
        s.user_axis = Vec3{0.0, 0.0, 1.0};
        return s;
    }

    /// Moves the user on the unit circle around IRS 2:
    /// u_r = u_2 + [cos(psi), -sin(psi), 0], so d_R2 stays 1 m.
    inline Scenario psi_scenario(const Scenario &base, double psi)
    {
        if (psi < 0.0 || psi > std::numbers::pi / 2.0)
            throw std::invalid_argument("psi_scenario: psi must lie in [0, pi/2]");
        Scenario s = base;
        s.user_pos = base.irs2_pos + Vec3{std::cos(psi), -std::sin(psi), 0.0};
        return s;
    }

    /// Even split M1 = M2 = M/2 with each IRS shaped as the most square
    /// count_a x count_b factorization (count_a >= count_b).
    inline Scenario set_total_elements(const Scenario &base, int total)
    {
        if (total < 2 || total % 2 != 0)
            throw std::invalid_argument("set_total_elements: total must be a positive even number");
        const int half = total / 2;
        int b = static_cast<int>(std::sqrt(static_cast<double>(half)));
        while (half % b != 0)
            --b;
        Scenario s = base;
        s.irs1_count_a = s.irs2_count_a = half / b;
        s.irs1_count_b = s.irs2_count_b = b;
        return s;
    }

    namespace detail
    {
        inline Vec3 vec3_from_json(const nlohmann::json &j, const std::string &key)
        {
            if (!j.is_array() || j.size() != 3 || !j[0].is_number())
                throw config_error("scenario config: '" + key + "' must be an array of 3 numbers");
            return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
        }
    }

    /// Builds a Scenario from a key/value object; unspecified keys keep the
    /// default deployment. Keys carry explicit units where ambiguity exists.
    inline Scenario scenario_from_json(const nlohmann::json &j)
    {
        static const std::set<std::string> known = {
            "bs_pos", "user_pos", "irs1_pos", "irs2_pos",
            "bs_axis", "user_axis", "irs1_axis_a", "irs1_axis_b", "irs2_axis_a", "irs2_axis_b",
            "num_bs_antennas", "num_user_antennas",
            "irs1_count_a", "irs1_count_b", "irs2_count_a", "irs2_count_b", "total_elements",
            "wavelength_m", "antenna_spacing_in_wavelengths", "element_spacing_in_wavelengths",
            "ref_gain_db", "transmit_power_dbm", "noise_power_dbm"};
        if (!j.is_object())
            throw config_error("scenario config: top level must be an object");
        for (const auto &item : j.items())
            if (!known.count(item.key()))
                throw config_error("scenario config: unknown key '" + item.key() + "'");

        Scenario s;
        auto vec = [&](const char *k, Vec3 &dst) {
            if (j.contains(k))
                dst = detail::vec3_from_json(j.at(k), k);
        };
        vec("bs_pos", s.bs_pos);
        vec("user_pos", s.user_pos);
        vec("irs1_pos", s.irs1_pos);
        vec("irs2_pos", s.irs2_pos);
        vec("bs_axis", s.bs_axis);
        vec("user_axis", s.user_axis);
        vec("irs1_axis_a", s.irs1_axis_a);
        vec("irs1_axis_b", s.irs1_axis_b);
        vec("irs2_axis_a", s.irs2_axis_a);
        vec("irs2_axis_b", s.irs2_axis_b);

        auto num = [&](const char *k, auto &dst) {
            if (j.contains(k))
            {
                if (!j.at(k).is_number())
                    throw config_error(std::string("scenario config: '") + k + "' must be a number");
                dst = j.at(k).get<std::remove_reference_t<decltype(dst)>>();
            }
        };
        num("num_bs_antennas", s.num_bs_antennas);
        num("num_user_antennas", s.num_user_antennas);
        num("irs1_count_a", s.irs1_count_a);
        num("irs1_count_b", s.irs1_count_b);
        num("irs2_count_a", s.irs2_count_a);
        num("irs2_count_b", s.irs2_count_b);

        if (j.contains("wavelength_m"))
        {
            num("wavelength_m", s.wavelength);
            // Spacings default to lambda/2 and lambda/10 at any carrier.
            s.antenna_spacing = s.wavelength / 2.0;
            s.element_spacing = s.wavelength / 10.0;
        }
        double spacing = 0.0;
        if (j.contains("antenna_spacing_in_wavelengths"))
        {
            num("antenna_spacing_in_wavelengths", spacing);
            s.antenna_spacing = spacing * s.wavelength;
        }
        if (j.contains("element_spacing_in_wavelengths"))
        {
            num("element_spacing_in_wavelengths", spacing);
            s.element_spacing = spacing * s.wavelength;
        }
        double db = 0.0;
        if (j.contains("ref_gain_db"))
        {
            num("ref_gain_db", db);
            s.ref_gain = db_to_linear(db);
        }
        if (j.contains("transmit_power_dbm"))
        {
            num("transmit_power_dbm", db);
            s.tx_power = dbm_to_watts(db);
        }
        if (j.contains("noise_power_dbm"))
        {
            num("noise_power_dbm", db);
            s.noise_power = dbm_to_watts(db);
        }
        if (j.contains("total_elements"))
        {
            int total = 0;
            num("total_elements", total);
            s = set_total_elements(s, total);
        }
        s.validate();
        return s;
    }

    inline Scenario load_scenario(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw config_error("cannot open scenario config: " + path);
        nlohmann::json j;
        try
        {
            in >> j;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw config_error("cannot parse scenario config " + path + ": " + e.what());
        }
        return scenario_from_json(j);
    }

    enum class Algorithm
    {
        Algorithm1,
        PerElementAO,
        Heuristic,
        SingleIrs,
        Rank2ClosedForm,
        Rank1ClosedForm,
        SingleReflectionOnly,
        DoubleReflectionOnly
    };

    inline const char *algorithm_name(Algorithm a)
    {
        switch (a)
        {
        case Algorithm::Algorithm1: return "algorithm1";
        case Algorithm::PerElementAO: return "per_element_ao";
        case Algorithm::Heuristic: return "heuristic";
        case Algorithm::SingleIrs: return "single_irs";
        case Algorithm::Rank2ClosedForm: return "rank2_closedform";
        case Algorithm::Rank1ClosedForm: return "rank1_closedform";
        case Algorithm::SingleReflectionOnly: return "single_reflection_only";
        case Algorithm::DoubleReflectionOnly: return "double_reflection_only";
        }
        throw std::invalid_argument("algorithm_name: unknown algorithm");
    }

    inline Algorithm parse_algorithm(const std::string &name)
    {
        for (Algorithm a : {Algorithm::Algorithm1, Algorithm::PerElementAO, Algorithm::Heuristic,
                            Algorithm::SingleIrs, Algorithm::Rank2ClosedForm, Algorithm::Rank1ClosedForm,
                            Algorithm::SingleReflectionOnly, Algorithm::DoubleReflectionOnly})
            if (name == algorithm_name(a))
                return a;
        throw config_error("unknown algorithm '" + name + "'");
    }

    enum class SweepAxis
    {
        M,
        PDbm,
        Psi,
        None
    };

    struct SweepSpec
    {
        Scenario base;
        SweepAxis axis = SweepAxis::None;
        std::vector<double> values; // element counts, dBm, or radians per axis
        std::vector<Algorithm> algorithms;

        void validate() const
        {
            if (algorithms.empty())
                throw std::invalid_argument("SweepSpec: no algorithms selected");
            if (axis != SweepAxis::None)
            {
                if (values.empty())
                    throw std::invalid_argument("SweepSpec: values must be non-empty");
                for (size_t i = 1; i < values.size(); ++i)
                    if (values[i] <= values[i - 1])
                        throw std::invalid_argument("SweepSpec: values must be strictly increasing");
                if (axis == SweepAxis::M)
                    for (double v : values)
                        if (v != std::floor(v) || static_cast<long>(v) % 2 != 0)
                            throw std::invalid_argument("SweepSpec: M values must be even integers");
            }
        }
    };

    struct ResultRow
    {
        double axis_value = 0.0;
        std::string algorithm;
        double rate = std::numeric_limits<double>::quiet_NaN();
        int iterations = 0;
        double wall_time = 0.0;
        double sv1 = std::numeric_limits<double>::quiet_NaN();
        double sv2 = std::numeric_limits<double>::quiet_NaN();
        double p1 = std::numeric_limits<double>::quiet_NaN();
        double p2 = std::numeric_limits<double>::quiet_NaN();
        std::string error;
    };

    namespace detail
    {
        inline void fill_from_solve(ResultRow &row, const SolveResult &sr)
        {
            row.rate = sr.rate;
            row.iterations = sr.iterations;
            if (sr.singular_values.size() > 0)
                row.sv1 = sr.singular_values(0);
            if (sr.singular_values.size() > 1)
                row.sv2 = sr.singular_values(1);
            if (!sr.power_levels.empty())
                row.p1 = sr.power_levels[0];
            if (sr.power_levels.size() > 1)
                row.p2 = sr.power_levels[1];
        }
    }

    inline ResultRow run_algorithm(const Scenario &s, Algorithm a)
    {
        ResultRow row;
        row.algorithm = algorithm_name(a);
        const auto start = std::chrono::steady_clock::now();
        switch (a)
        {
        case Algorithm::Algorithm1:
            detail::fill_from_solve(row, algorithm1(build_channel_set(s), s));
            break;
        case Algorithm::PerElementAO:
            detail::fill_from_solve(row, per_element_ao(build_channel_set(s), s));
            break;
        case Algorithm::Heuristic:
            detail::fill_from_solve(row, heuristic_fixed_phase(build_channel_set(s), s));
            break;
        case Algorithm::SingleReflectionOnly:
            detail::fill_from_solve(row, algorithm1(build_channel_set(s), s, 1e-5,
                                                    StoppingRule::PerCycle, LinkMask::single_only()));
            break;
        case Algorithm::DoubleReflectionOnly:
            detail::fill_from_solve(row, algorithm1(build_channel_set(s), s, 1e-5,
                                                    StoppingRule::PerCycle, LinkMask::double_only()));
            break;
        case Algorithm::SingleIrs:
        {
            const CMat h = single_irs_channel(build_channel_set(s));
            const TransmitCovariance q = optimal_covariance(h, s.tx_power, s.noise_power);
            row.rate = log_det_rate(h, q, s.noise_power);
            row.iterations = 1;
            const SpectralDecomposition sd = spectral(h);
            if (sd.numerical_rank > 0)
            {
                row.sv1 = sd.singular_values(0);
                row.p1 = s.tx_power;
            }
            break;
        }
        case Algorithm::Rank2ClosedForm:
            row.rate = capacity_rank2_highpower(s);
            break;
        case Algorithm::Rank1ClosedForm:
            row.rate = capacity_rank1_closedform(s).rate;
            break;
        }
        row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return row;
    }

    inline Scenario apply_axis(const Scenario &base, SweepAxis axis, double value)
    {
        switch (axis)
        {
        case SweepAxis::M:
            return set_total_elements(base, static_cast<int>(value));
        case SweepAxis::PDbm:
        {
            Scenario s = base;
            s.tx_power = dbm_to_watts(value);
            return s;
        }
        case SweepAxis::Psi:
            return psi_scenario(base, value);
        case SweepAxis::None:
            return base;
        }
        throw std::invalid_argument("apply_axis: unknown axis");
    }

    inline std::vector<ResultRow> run_sweep(const SweepSpec &spec)
    {
        spec.validate();
        std::vector<ResultRow> rows;
        const std::vector<double> values =
            (spec.axis == SweepAxis::None) ? std::vector<double>{0.0} : spec.values;
        for (double v : values)
            for (Algorithm a : spec.algorithms)
            {
                ResultRow row;
                row.axis_value = v;
                row.algorithm = algorithm_name(a);
                try
                {
                    row = run_algorithm(apply_axis(spec.base, spec.axis, v), a);
                    row.axis_value = v;
                }
                catch (const std::exception &e)
                {
                    row.error = e.what(); // keep the sweep going; failure is recorded in-row
                }
                rows.push_back(std::move(row));
            }
        return rows;
    }

    namespace detail
    {
        inline std::string fmt(double v)
        {
            std::ostringstream os;
            os << std::setprecision(15) << v;
            return os.str();
        }

        inline nlohmann::json row_json(const ResultRow &r)
        {
            nlohmann::json j{{"axis", r.axis_value},      {"algorithm", r.algorithm},
                             {"rate_bpshz", r.rate},      {"iterations", r.iterations},
                             {"wall_time_s", r.wall_time}, {"sv1", r.sv1},
                             {"sv2", r.sv2},              {"p1", r.p1},
                             {"p2", r.p2}};
            if (!r.error.empty())
                j["error"] = r.error;
            return j;
        }
    }

    inline void emit_csv(const std::vector<ResultRow> &rows, std::ostream &out)
    {
        out << "axis,algorithm,rate_bpshz,iterations,wall_time_s,sv1,sv2,p1,p2\n";
        for (const ResultRow &r : rows)
            out << detail::fmt(r.axis_value) << ',' << r.algorithm << ',' << detail::fmt(r.rate)
                << ',' << r.iterations << ',' << detail::fmt(r.wall_time) << ','
                << detail::fmt(r.sv1) << ',' << detail::fmt(r.sv2) << ',' << detail::fmt(r.p1)
                << ',' << detail::fmt(r.p2) << '\n';
    }

    inline void emit_json(const std::vector<ResultRow> &rows, std::ostream &out)
    {
        nlohmann::json arr = nlohmann::json::array();
        for (const ResultRow &r : rows)
            arr.push_back(detail::row_json(r));
        out << arr.dump(2) << '\n';
    }

    inline void emit(const std::vector<ResultRow> &rows, const std::string &format,
                     const std::string &path)
    {
        std::ofstream out(path);
        if (!out)
            throw config_error("cannot open output file: " + path);
        if (format == "csv")
            emit_csv(rows, out);
        else if (format == "json")
            emit_json(rows, out);
        else
            throw config_error("unknown output format '" + format + "' (expected csv or json)");
        if (!out)
            throw config_error("write failed: " + path);
    }

    inline SweepSpec sweep_from_json(const nlohmann::json &j)
    {
        static const std::set<std::string> known = {"scenario", "axis", "values", "algorithms"};
        if (!j.is_object())
            throw config_error("sweep spec: top level must be an object");
        for (const auto &item : j.items())
            if (!known.count(item.key()))
                throw config_error("sweep spec: unknown key '" + item.key() + "'");
        SweepSpec spec;
        spec.base = j.contains("scenario") ? scenario_from_json(j.at("scenario")) : default_scenario();
        const std::string axis = j.value("axis", "none");
        if (axis == "M")
            spec.axis = SweepAxis::M;
        else if (axis == "P_dbm")
            spec.axis = SweepAxis::PDbm;
        else if (axis == "psi_rad")
            spec.axis = SweepAxis::Psi;
        else if (axis == "none")
            spec.axis = SweepAxis::None;
        else
            throw config_error("sweep spec: unknown axis '" + axis + "'");
        if (j.contains("values"))
            for (const auto &v : j.at("values"))
            {
                if (!v.is_number())
                    throw config_error("sweep spec: values must be numbers");
                spec.values.push_back(v.get<double>());
            }
        if (!j.contains("algorithms") || !j.at("algorithms").is_array())
            throw config_error("sweep spec: 'algorithms' array is required");
        for (const auto &a : j.at("algorithms"))
            spec.algorithms.push_back(parse_algorithm(a.get<std::string>()));
        return spec;
    }

    inline SweepSpec load_sweep(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw config_error("cannot open sweep spec: " + path);
        nlohmann::json j;
        try
        {
            in >> j;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw config_error("cannot parse sweep spec " + path + ": " + e.what());
        }
        return sweep_from_json(j);
    }

    /// Named experiment presets mirroring the reference deployment's figures.
    inline SweepSpec figure_preset(const std::string &name)
    {
        SweepSpec spec;
        Scenario s = default_scenario();
        if (name == "fig4a" || name == "fig4b" || name == "fig4c")
        {
            s.num_bs_antennas = 3;
            s.num_user_antennas = 3;
            s.tx_power = dbm_to_watts(name == "fig4b" ? 20.0 : -10.0);
            spec.base = s;
            spec.axis = SweepAxis::M;
            if (name == "fig4c")
            {
                spec.values = {100, 200, 400, 1000, 2000};
                spec.algorithms = {Algorithm::Algorithm1, Algorithm::PerElementAO};
            }
            else
            {
                spec.values = {100, 200, 400, 1000};
                spec.algorithms = {Algorithm::Algorithm1, Algorithm::PerElementAO, Algorithm::Heuristic};
            }
        }
        else if (name == "fig5a" || name == "fig5b" || name == "fig5c")
        {
            s.num_bs_antennas = 4;
            s.tx_power = dbm_to_watts(name == "fig5a" ? -10.0 : (name == "fig5b" ? 5.0 : 20.0));
            spec.base = s;
            spec.axis = SweepAxis::M;
            // The high-power sweep starts low to expose the single/double crossover.
            spec.values = (name == "fig5c") ? std::vector<double>{50, 100, 250, 500, 1000, 2000}
                                            : std::vector<double>{250, 500, 1000, 2000};
            spec.algorithms = {Algorithm::Algorithm1, Algorithm::SingleIrs,
                               Algorithm::SingleReflectionOnly, Algorithm::DoubleReflectionOnly};
        }
        else if (name == "fig5d")
        {
            s.num_bs_antennas = 4;
            spec.base = s;
            spec.axis = SweepAxis::PDbm;
            spec.values = {-10, -5, 0, 5, 10, 15, 20, 25, 30};
            spec.algorithms = {Algorithm::Algorithm1, Algorithm::SingleIrs, Algorithm::Rank2ClosedForm,
                               Algorithm::SingleReflectionOnly, Algorithm::DoubleReflectionOnly};
        }
        else if (name == "fig6a" || name == "fig6b")
        {
            s.num_bs_antennas = 4;
            s.tx_power = dbm_to_watts(name == "fig6a" ? 20.0 : -10.0);
            spec.base = s;
            spec.axis = SweepAxis::M;
            spec.values = {250, 500, 1000, 2000};
            spec.algorithms = {Algorithm::Algorithm1, Algorithm::SingleIrs};
        }
        else if (name == "fig7a" || name == "fig7b")
        {
            s.tx_power = dbm_to_watts(20.0);
            spec.base = s;
            spec.axis = SweepAxis::Psi;
            const double step = std::numbers::pi / 16.0;
            for (int i = 0; i <= 8; ++i)
                spec.values.push_back(i * step);
            spec.algorithms = (name == "fig7a")
                                  ? std::vector<Algorithm>{Algorithm::Algorithm1}
                                  : std::vector<Algorithm>{Algorithm::Algorithm1, Algorithm::SingleIrs,
                                                           Algorithm::Heuristic};
        }
        else
        {
            throw config_error("unknown figure preset '" + name +
                               "' (expected fig4a..fig4c, fig5a..fig5d, fig6a, fig6b, fig7a, fig7b)");
        }
        return spec;
    }

    /// Random rank-two deployment for randomized identity checks: the user is
    /// placed at a random angle on the unit circle around IRS 2 and the power
    /// budget is jittered. Borderline-rank draws are rejected.
    template <class Rng>
    Scenario random_rank_two_scenario(Rng &rng)
    {
        std::uniform_real_distribution<double> angle(0.0, 1.3);
        std::uniform_real_distribution<double> power_dbm(-10.0, 20.0);
        Scenario small = set_total_elements(default_scenario(), 80);
        for (int attempt = 0; attempt < 256; ++attempt)
        {
            Scenario s = psi_scenario(small, angle(rng));
            s.tx_power = dbm_to_watts(power_dbm(rng));
            const RankPrediction rp = predict_rank(s);
            if (rp.predicted_rank == 2 && std::abs(rp.rho_t - 1.0) > 1e-3 &&
                std::abs(rp.rho_r - 1.0) > 1e-3)
                return s;
        }
        throw std::runtime_error("random_rank_two_scenario: rejection sampling failed");
    }

    /// Self-check battery: numeric identities, subproblem optimality against
    /// grid search, and rank prediction against the SVD. Prints one line per
    /// check; returns false if any check fails.
    inline bool validate_suite(unsigned seed, std::ostream &out)
    {
        std::mt19937_64 rng(seed);
        bool ok = true;
        auto check = [&](const std::string &name, bool pass) {
            out << (pass ? "PASS " : "FAIL ") << name << '\n';
            ok = ok && pass;
        };

        // Determinant and trace identities on the default and random deployments.
        {
            std::uniform_real_distribution<double> ph(0.0, two_pi);
            bool det_ok = true, tr_ok = true;
            for (int i = 0; i < 20; ++i)
            {
                const Scenario s = random_rank_two_scenario(rng);
                const PhaseConfig pc = PhaseConfig::structured(std::polar(1.0, ph(rng)),
                                                               std::polar(1.0, ph(rng)));
                const auto [dc, dn] = det_product_identity(s, pc);
                det_ok = det_ok && std::abs(dc - dn) <= 1e-8 * std::max(dc, dn);
                const auto [ts, tm] = trace_identity(s, pc);
                tr_ok = tr_ok && std::abs(ts - tm) <= 1e-10 * std::max(ts, tm);
            }
            check("determinant identity (randomized)", det_ok);
            check("trace identity (randomized)", tr_ok);
        }

        // Rank-one trace closed form on the rank-one deployment.
        {
            const Scenario s = fig3_scenario();
            const PhaseConfig pc = PhaseConfig::structured({1.0, 0.0}, {1.0, 0.0});
            const ChannelSet cs = build_channel_set(s);
            const CMat h = effective_channel(cs, pc, CouplingModel::Approximate);
            const double tr = (h * h.adjoint()).trace().real();
            const double cf = trace_rank1_closedform(s, pc);
            check("rank-one trace closed form", std::abs(cf - tr) <= 1e-6 * tr);
        }

        // Common-phase subproblem vs unit-circle grid search.
        {
            std::normal_distribution<double> g;
            bool pass = true;
            for (int i = 0; i < 20 && pass; ++i)
            {
                // Instances with the subproblem's own structure: the objective
                // det(X + g Y + g* Y^H) = det(I + (M0 + g MK)(M0 + g MK)^H)
                // stays positive on the whole unit circle.
                CMat m0(3, 3), u(3, 1), v(3, 1);
                for (int r = 0; r < 3; ++r)
                {
                    u(r, 0) = cplx(g(rng), g(rng));
                    v(r, 0) = cplx(g(rng), g(rng));
                    for (int c = 0; c < 3; ++c)
                        m0(r, c) = cplx(g(rng), g(rng));
                }
                const CMat mk = u * v.adjoint(); // rank one
                const CMat x = CMat::Identity(3, 3) + m0 * m0.adjoint() + mk * mk.adjoint();
                const CMat y = mk * m0.adjoint();
                auto obj = [&](cplx gamma) {
                    return std::log2(std::abs((x + gamma * y + std::conj(gamma) * y.adjoint())
                                                  .determinant()));
                };
                const double best = obj(solve_common_phase(x, y));
                for (int k = 0; k < 720; ++k)
                    if (obj(std::polar(1.0, two_pi * k / 720.0)) > best + 1e-8)
                        pass = false;
            }
            check("common-phase closed form vs grid search", pass);
        }

        // Water-filling KKT conditions on random spectra.
        {
            std::uniform_real_distribution<double> d(0.1, 10.0);
            bool pass = true;
            for (int i = 0; i < 20 && pass; ++i)
            {
                std::vector<double> deltas(4);
                for (double &x : deltas)
                    x = d(rng);
                const double p = d(rng), sigma2 = 0.5;
                const PowerAllocation pa = waterfill(deltas, p, sigma2);
                pass = pass && std::abs(pa.total() - p) <= 1e-9 * p;
                for (size_t k = 0; k < deltas.size(); ++k)
                {
                    const double floor = sigma2 / (deltas[k] * deltas[k]);
                    if (pa.levels[k] > 0.0)
                        pass = pass && std::abs(pa.water_level - floor - pa.levels[k]) <= 1e-9;
                    else
                        pass = pass && pa.water_level <= floor + 1e-9;
                }
            }
            check("water-filling KKT conditions", pass);
        }

        // Rank prediction vs numerical SVD rank.
        {
            const Scenario s2 = default_scenario();
            const Scenario s1 = fig3_scenario();
            auto numeric_rank = [](const Scenario &s) {
                const ChannelSet cs = build_channel_set(s);
                return spectral(effective_channel(cs, PhaseConfig::structured({1, 0}, {1, 0}),
                                                  CouplingModel::Approximate))
                    .numerical_rank;
            };
            check("rank prediction (rank-two deployment)",
                  predict_rank(s2).predicted_rank == 2 && numeric_rank(s2) == 2);
            check("rank prediction (rank-one deployment)",
                  predict_rank(s1).predicted_rank == 1 && numeric_rank(s1) == 1);
        }

        // Structured decomposition identity H Q^{1/2} = g1 A + g2 B + g1 g2 C.
        {
            const Scenario s = set_total_elements(default_scenario(), 80);
            const ChannelSet cs = build_channel_set(s);
            const StructuredLinks sl = StructuredLinks::from_channel_set(cs);
            std::uniform_real_distribution<double> ph(0.0, two_pi);
            const cplx g1 = std::polar(1.0, ph(rng)), g2 = std::polar(1.0, ph(rng));
            const TransmitCovariance q = optimal_covariance(sl.channel(g1, g2), s.tx_power,
                                                            s.noise_power);
            const StructuredSubproblemData d = build_ABC(sl, q);
            const CMat lhs = sl.channel(g1, g2) * detail::hermitian_sqrt(q.q);
            const CMat rhs = g1 * d.a + g2 * d.b + g1 * g2 * d.c;
            check("structured decomposition identity", (lhs - rhs).norm() <= 1e-10 * lhs.norm());
        }

        // Single-IRS closed form vs end-to-end numerical pipeline.
        {
            const Scenario s = default_scenario();
            const CMat h = single_irs_channel(build_channel_set(s));
            const TransmitCovariance q = optimal_covariance(h, s.tx_power, s.noise_power);
            const double numeric = log_det_rate(h, q, s.noise_power);
            const double closed = single_irs_capacity(s);
            check("single-IRS closed form vs numerical",
                  std::abs(closed - numeric) <= 1e-8 * std::max(closed, numeric));
        }

        return ok;
    }

} // namespace irsmimo

#endif
