#pragma once

// Command-line front end. Exit codes: 0 success, 1 malformed configuration
// or usage, 2 failed check, 3 divergence.

#include <iosfwd>
#include <string>
#include <vector>

#include "qlwave/config.hpp"
#include "qlwave/harness.hpp"

namespace qlwave {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitCheck = 2, kExitDivergence = 3 };

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Arguments without the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Builders shared with the tests.
ProblemSpec problem_from(const Config& c);
FilterSpec filter_from(const Config& c);
IntegratorConfig integrator_from(const Config& c);
ReferenceConfig reference_from(const Config& c);
InitialData initial_data_from(const Config& c, const std::string& fallback = "h5");
/// τ values from sweep.tau, or sweep.tau_dyadic = m0:m1 giving sweep.tau_base/2^m.
std::vector<double> tau_list_from(const Config& c);
/// Number of steps from time.n_steps, else T/τ (which must be an integer).
long step_count_from(const Config& c);
ExperimentPlan plan_from(const Config& c);

}  // namespace qlwave
