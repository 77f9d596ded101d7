#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace atgen {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A set of attacks has no goal satisfied by all of its members.
class no_common_goal : public error {
public:
  no_common_goal() : error("no common goal") {}
  explicit no_common_goal(const std::string& what) : error("no common goal: " + what) {}
};

/// Malformed input (JSON, expression text, spec files).
class parse_error : public error {
public:
  parse_error(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : error(line ? what + " at line " + std::to_string(line) + ", column " + std::to_string(column)
                   : what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace atgen
