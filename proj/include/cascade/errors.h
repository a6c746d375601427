#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

// Exit-code families used by the command line front end.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DesignError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cascade
