#pragma once

#include <stdexcept>
#include <string>

namespace bmx {

// Invalid or inconsistent user-supplied configuration: bad parameter ranges,
// malformed config files, unknown keys.  Mapped to CLI exit code 2.
class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A structurally valid request for a combination the toolkit does not model,
// e.g. a harmonic potential where only the free case has a closed form.
// Mapped to CLI exit code 3.
class scenario_error : public std::runtime_error {
  public:
    explicit scenario_error(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical validity condition failed during evaluation: nonpositive
// variance, a violated rate-formula bound, density leaking off the grid.
// Mapped to CLI exit code 4.
class validity_error : public std::runtime_error {
  public:
    explicit validity_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bmx
