#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mei {

/// Bad argument or violated precondition. Maps to CLI exit code 1.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario document rejected by the parser; carries the offending line.
class ParseError : public InvalidInput {
public:
  ParseError(const std::string& message, std::size_t line, const std::string& section = {})
      : InvalidInput(message + " at line " + std::to_string(line) +
                     (section.empty() ? std::string() : " in section [" + section + "]")),
        line_(line),
        section_(section) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& section() const noexcept { return section_; }

private:
  std::size_t line_;
  std::string section_;
};

/// No feasible operating point exists. Maps to CLI exit code 2.
class Infeasible : public std::runtime_error {
public:
  explicit Infeasible(const std::string& message,
                      std::optional<std::size_t> step = std::nullopt)
      : std::runtime_error(message), step_(step) {}

  std::optional<std::size_t> step() const noexcept { return step_; }

private:
  std::optional<std::size_t> step_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace mei
