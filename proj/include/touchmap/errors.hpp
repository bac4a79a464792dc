#pragma once

#include <stdexcept>
#include <string>

namespace touchmap {

// Error kinds raised across the library. Each is a distinct type so callers
// can catch exactly the failure they expect.

struct InvalidParam : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A robot center left the workspace; only an integration bug can cause it.
struct OutOfBounds : std::logic_error {
  using std::logic_error::logic_error;
};

struct EmptyCandidates : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnknownObserver : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidScenario : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace touchmap
