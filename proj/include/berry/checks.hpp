#pragma once

#include <functional>
#include <string>
#include <vector>

namespace berry {

struct CheckOptions {
    std::size_t ode_steps = 2048;  // step count for the holonomy integrations
    bool verbose = false;
};

struct CheckResult {
    std::string name;
    std::string group;
    bool pass = true;
    double worst = 0.0;  // worst |error| / tolerance ratio over the sub-cases
    std::vector<std::string> lines;
};

struct Check {
    std::string name;
    std::string group;  // spin | lambda | planar | curvature | convergence | properties
    std::function<void(struct CheckRecorder&, const CheckOptions&)> run;
};

// The quantitative regression suite reproducing the worked systems: spin
// solid-angle law, transition windings and bundle classes, Lambda-system
// triviality and oracle equivalence, planar topological phases, flatness,
// convergence orders, and the randomized property suite.
const std::vector<Check>& acceptance_checks();

// Runs one check, converting exceptions into failures.
CheckResult run_check(const Check& check, const CheckOptions& opts = {});

// Collects sub-case comparisons for one check.
struct CheckRecorder {
    CheckResult result;

    void expect_near(const std::string& what, double measured, double expected, double tol);
    void expect_le(const std::string& what, double measured, double bound);
    void expect_true(const std::string& what, bool ok);
};

}  // namespace berry
