#pragma once

#include <stdexcept>
#include <string>

namespace ionq {

// Two ions closer than the coincidence threshold: the step that produced the
// configuration was invalid, so this is a hard error rather than a clamp.
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Axial order swap or non-finite value during integration.
struct IntegrationError : std::runtime_error {
  IntegrationError(const std::string& what, long step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_index(step) {}
  long step_index;
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double gradient_norm)
      : std::runtime_error(what), final_gradient_norm(gradient_norm) {}
  double final_gradient_norm;
};

// Invalid or inconsistent configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Too many excluded realizations, degenerate fits, etc. (CLI exit code 3).
struct DataQualityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Damping parameters fit neither the overdamped nor the underdamped regime.
struct AmbiguousRegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ionq
