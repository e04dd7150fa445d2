#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace visfactor {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter is outside its documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A generator exhausted its rejection budget. Carries the seed so the
/// failing corner can be replayed.
class GenerationFailed : public Error {
 public:
  GenerationFailed(const std::string& what, std::uint64_t seed)
      : Error(what + " (seed " + std::to_string(seed) + ")"), seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

/// An item violates its own format contract (e.g. an MCQ with two keys).
class ItemDefinitionError : public Error {
 public:
  using Error::Error;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class AggregationError : public Error {
 public:
  using Error::Error;
};

}  // namespace visfactor
