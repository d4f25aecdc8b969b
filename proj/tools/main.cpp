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

#include <CLI11.hpp>
#include <iostream>

#include <irsmimo/irsmimo.hpp>

namespace
{
    void write_rows(const std::vector<irsmimo::ResultRow> &rows, const std::string &out,
                    const std::string &format)
    {
        if (out.empty())
        {
            if (format == "csv")
                irsmimo::emit_csv(rows, std::cout);
            else if (format == "json")
                irsmimo::emit_json(rows, std::cout);
            else
                throw irsmimo::config_error("unknown output format '" + format + "'");
        }
        else
        {
            irsmimo::emit(rows, format, out);
        }
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Double-IRS aided MIMO LoS channel simulation and capacity optimization"};
    app.require_subcommand(1);

    std::string config_path, algo = "algorithm1", out_path, format = "csv";
    auto *solve = app.add_subcommand("solve", "Optimize a single scenario");
    solve->add_option("--config", config_path, "Scenario config file (JSON)")->required();
    solve->add_option("--algo", algo, "Algorithm name (default algorithm1)");
    solve->add_option("--out", out_path, "Output file (default stdout)");
    solve->add_option("--format", format, "Output format: csv or json");

    std::string spec_path, sweep_out, sweep_format = "csv";
    auto *sweep = app.add_subcommand("sweep", "Run a parameter sweep from a spec file");
    sweep->add_option("--spec", spec_path, "Sweep spec file (JSON)")->required();
    sweep->add_option("--out", sweep_out, "Output file")->required();
    sweep->add_option("--format", sweep_format, "Output format: csv or json");

    std::string preset, fig_out, fig_format = "csv";
    auto *figure = app.add_subcommand("figure", "Run a named experiment preset");
    figure->add_option("preset", preset, "Preset name (fig4a..fig7b)")->required();
    figure->add_option("--out", fig_out, "Output file")->required();
    figure->add_option("--format", fig_format, "Output format: csv or json");

    unsigned seed = 1;
    auto *validate = app.add_subcommand("validate", "Run the identity and oracle self-checks");
    validate->add_option("--seed", seed, "RNG seed for the randomized checks");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (solve->parsed())
        {
            const irsmimo::Scenario s = irsmimo::load_scenario(config_path);
            irsmimo::ResultRow row = irsmimo::run_algorithm(s, irsmimo::parse_algorithm(algo));
            if (!row.error.empty())
                throw std::runtime_error(row.error);
            write_rows({row}, out_path, format);
        }
        else if (sweep->parsed())
        {
            write_rows(irsmimo::run_sweep(irsmimo::load_sweep(spec_path)), sweep_out, sweep_format);
        }
        else if (figure->parsed())
        {
            write_rows(irsmimo::run_sweep(irsmimo::figure_preset(preset)), fig_out, fig_format);
        }
        else if (validate->parsed())
        {
            if (!irsmimo::validate_suite(seed, std::cout))
                return 1;
        }
    }
    catch (const irsmimo::config_error &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
