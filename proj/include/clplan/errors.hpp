#pragma once

#include <stdexcept>
#include <string>

namespace clplan {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when spectrum bookkeeping is violated. Signals a planner logic bug;
// the run must abort rather than continue on a corrupt grid.
struct OccupancyError : std::logic_error {
  explicit OccupancyError(const std::string& msg) : std::logic_error(msg) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace clplan
