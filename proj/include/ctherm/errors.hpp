#ifndef CTHERM_ERRORS_HPP
#define CTHERM_ERRORS_HPP

#include <stdexcept>

namespace ctherm {

/// A computed quantity violated one of the identities the library promises
/// to hold; distinct from bad input so callers can map it to its own exit code.
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An input file failed its schema or physical-validity checks.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ctherm

#endif
