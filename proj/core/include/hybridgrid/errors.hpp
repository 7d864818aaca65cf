#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hybridgrid {

// Argument outside the mathematical domain of a model function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative solver hit its iteration cap or lost its bracket.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The PV datasheet cannot be matched by the single-diode law.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every problem found in a scenario document, collected in one pass.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> errors);

  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

}  // namespace hybridgrid
