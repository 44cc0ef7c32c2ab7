#pragma once

#include <stdexcept>
#include <string>

namespace urbanscope {

// Bad arguments, malformed files, violated preconditions. CLI exit code 2.
class InvalidInput : public std::runtime_error {
public:
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// Input is well formed but carries no usable signal (e.g. a constant field).
class DegenerateInput : public InvalidInput {
public:
  explicit DegenerateInput(const std::string& what) : InvalidInput(what) {}
};

// A parse failure tied to a location in a text file.
class ParseError : public InvalidInput {
public:
  ParseError(const std::string& file, std::size_t line, const std::string& what);

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// An invariant that should hold by construction was broken.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

// A pipeline stage failed. CLI exit code 3.
class StageFailure : public std::runtime_error {
public:
  StageFailure(std::string stage, const std::string& cause);

  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

}  // namespace urbanscope
