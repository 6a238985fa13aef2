#ifndef DSAIR_ERRORS_HPP
#define DSAIR_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace dsair {

// A parameter or input violated one of its invariants. `field()` names the
// offending parameter so callers can report it.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// The model defines no payoff for this strategy pairing (e.g. CS against PS).
class UnsupportedPairError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An index such as a population count was outside its admissible range.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace dsair

#endif  // DSAIR_ERRORS_HPP
