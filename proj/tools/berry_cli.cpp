#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "berry/checks.hpp"
#include "berry/scenario.hpp"
#include "berry/version.hpp"

namespace {

int exit_code_for(const std::exception& e) {
    using namespace berry;
    if (dynamic_cast<const ScenarioError*>(&e) || dynamic_cast<const BadPresetParams*>(&e) ||
        dynamic_cast<const PathNotClosed*>(&e) || dynamic_cast<const ShapeMismatch*>(&e) ||
        dynamic_cast<const InvalidSpin*>(&e) || dynamic_cast<const InvalidJ*>(&e) ||
        dynamic_cast<const UnknownBranch*>(&e))
        return 2;
    if (dynamic_cast<const OutOfDomain*>(&e) || dynamic_cast<const PathNodeError*>(&e) ||
        dynamic_cast<const DegeneracyViolation*>(&e) || dynamic_cast<const OutOfPatch*>(&e) ||
        dynamic_cast<const AtAntipode*>(&e) || dynamic_cast<const DegenerateLoop*>(&e))
        return 3;
    return 4;
}

int cmd_run(const std::string& file, const std::string& out_file) {
    std::ifstream in(file);
    if (!in) {
        std::cerr << "error: cannot open '" << file << "'\n";
        return 2;
    }
    berry::json doc;
    try {
        doc = berry::json::parse(in);
    } catch (const berry::json::exception& e) {
        std::cerr << "error: scenario is not valid JSON: " << e.what() << "\n";
        return 2;
    }
    try {
        const berry::json report = berry::run_scenario(doc);
        if (out_file.empty()) {
            std::cout << report.dump(2) << "\n";
        } else {
            std::ofstream out(out_file);
            if (!out) {
                std::cerr << "error: cannot write '" << out_file << "'\n";
                return 2;
            }
            out << report.dump(2) << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_models(bool as_json) {
    if (as_json)
        std::cout << berry::list_models_json().dump(2) << "\n";
    else
        std::cout << berry::list_models_text();
    return 0;
}

int cmd_reproduce(const std::string& only, std::size_t steps, bool verbose) {
    berry::CheckOptions opts;
    if (steps > 0) opts.ode_steps = steps;
    opts.verbose = verbose;

    bool any = false, all_pass = true;
    std::size_t index = 0;
    for (const berry::Check& check : berry::acceptance_checks()) {
        ++index;
        if (!only.empty() && check.group != only) continue;
        any = true;
        const berry::CheckResult res = berry::run_check(check, opts);
        all_pass = all_pass && res.pass;
        std::cout << (res.pass ? "PASS" : "FAIL") << "  " << index << ". " << check.name << "  ["
                  << check.group << "]  (worst error " << res.worst << " of tolerance)\n";
        if (verbose || !res.pass)
            for (const std::string& line : res.lines) std::cout << line << "\n";
    }
    if (!any) {
        std::cerr << "error: no checks in group '" << only
                  << "' (groups: spin, lambda, planar, curvature, convergence, properties)\n";
        return 2;
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Berry bundle toolkit: holonomies, transition functions and topological "
                 "invariants of parameter-dependent Hamiltonians"};
    app.set_version_flag("--version", std::string(berry::kVersion));
    app.require_subcommand(1);

    std::string scenario_file, out_file;
    CLI::App* run = app.add_subcommand("run", "execute a scenario file");
    run->add_option("scenario", scenario_file, "scenario JSON file")->required();
    run->add_option("--out", out_file, "write the report here instead of stdout");

    bool models_json = false;
    CLI::App* models = app.add_subcommand("models", "list the built-in model zoo");
    models->add_flag("--json", models_json, "machine-readable listing");

    std::string only;
    std::size_t steps = 0;
    bool verbose = false;
    CLI::App* repro =
        app.add_subcommand("reproduce", "run the quantitative regression suite");
    repro->add_option("--only", only, "restrict to one group "
                                      "(spin|lambda|planar|curvature|convergence|properties)");
    repro->add_option("--steps", steps, "override the holonomy integration step count");
    repro->add_flag("--verbose", verbose, "print every sub-case comparison");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (run->parsed()) return cmd_run(scenario_file, out_file);
    if (models->parsed()) return cmd_models(models_json);
    if (repro->parsed()) return cmd_reproduce(only, steps, verbose);
    return 2;
}
