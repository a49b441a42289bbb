// nhlat: spectra, parameter sweeps, zero-mode searches, and mode diagnostics
// for gain/loss-modulated tight-binding chains.

#include "nhlat/errors.hpp"
#include "nhlat/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

void print_error(const std::string& kind, const std::string& message)
{
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << '\n';
}

nhlat::ScenarioConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw nhlat::config_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return nhlat::parse_config(buf.str());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Non-Hermitian lattice spectra and zero-mode diagnostics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string figure;
    double tol = 0.0;
    std::string grid_spec;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config_path, "scenario config (JSON)");
        if (config_required)
            opt->required();
        sub->add_option("--out", out_dir, "output directory (default: config 'output' or ./out)");
        sub->add_option("--tol", tol, "override the zero-mode energy tolerance");
        sub->add_option("--grid", grid_spec, "override the parameter grid as lo:hi:step");
    };

    CLI::App* c_spectrum = app.add_subcommand("spectrum", "eigenvalues at fixed t'");
    CLI::App* c_sweep = app.add_subcommand("sweep", "tracked branches over a t' grid");
    CLI::App* c_find = app.add_subcommand("find-zero", "locate a zero-mode root in t'");
    CLI::App* c_analyze = app.add_subcommand("analyze", "zero-mode root plus full diagnostics");
    CLI::App* c_repro = app.add_subcommand("reproduce", "run a bundled reference scenario");
    add_common(c_spectrum, true);
    add_common(c_sweep, true);
    add_common(c_find, true);
    add_common(c_analyze, true);
    add_common(c_repro, false);
    c_repro->add_option("figure", figure, "fig1, fig2a, fig2c, fig3, or fig4");

    CLI11_PARSE(app, argc, argv);

    try {
        nhlat::ScenarioConfig cfg;
        nhlat::Action action = nhlat::Action::spectrum;
        if (c_spectrum->parsed())
            action = nhlat::Action::spectrum;
        else if (c_sweep->parsed())
            action = nhlat::Action::sweep;
        else if (c_find->parsed())
            action = nhlat::Action::find_zero;
        else if (c_analyze->parsed())
            action = nhlat::Action::analyze;
        else if (c_repro->parsed())
            action = nhlat::Action::reproduce;

        if (!config_path.empty())
            cfg = load_config(config_path);
        if (action == nhlat::Action::reproduce) {
            if (!figure.empty())
                cfg.figure = figure;
        }
        if (out_dir.empty())
            out_dir = cfg.output_dir.value_or("out");
        if (tol > 0.0)
            cfg.tol.tol_e = tol;
        if (!grid_spec.empty()) {
            double lo = 0.0, hi = 0.0, step = 0.0;
            char c1 = 0, c2 = 0;
            std::istringstream is(grid_spec);
            if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':')
                throw nhlat::config_error("--grid expects lo:hi:step");
            cfg.grid = {lo, hi, step};
        }
        return nhlat::run_scenario(cfg, action, out_dir);
    } catch (const nhlat::config_error& e) {
        print_error("config", e.what());
        return 2;
    } catch (const nhlat::symmetry_error& e) {
        print_error("symmetry", std::string(e.what()) + "; offenders: " + e.offenders);
        return 3;
    } catch (const nhlat::numerical_error& e) {
        print_error("numerical", e.what());
        return 3;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 3;
    }
}
