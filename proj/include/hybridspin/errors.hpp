#pragma once

#include <stdexcept>
#include <string>

namespace hybridspin {

// Exit codes used by the CLI; exceptions map onto them 1:1.
enum class ExitCode : int {
    ok = 0,
    config_error = 2,
    contract_violation = 3,
    numerical_failure = 4,
    positivity_violation = 5,
    degenerate_density = 6,
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContractViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PositivityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateDensity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hybridspin
