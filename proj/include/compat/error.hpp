#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace compat {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class WrongArity final : public Error {
  public:
    WrongArity(std::size_t expected, std::size_t got)
        : Error("expected " + std::to_string(expected) + " values, got " + std::to_string(got)),
          expected_(expected), got_(got) {}
    WrongArity(const std::string &context, std::size_t expected, std::size_t got)
        : Error(context + ": expected " + std::to_string(expected) + " values, got " +
                std::to_string(got)),
          expected_(expected), got_(got) {}
    std::size_t expected() const noexcept { return expected_; }
    std::size_t got() const noexcept { return got_; }

  private:
    std::size_t expected_;
    std::size_t got_;
};

class OutOfRange final : public Error {
  public:
    OutOfRange(std::string attribute, std::size_t index, double value)
        : Error(attribute + " = " + std::to_string(value) + " outside [0, 10]"),
          attribute_(std::move(attribute)), index_(index), value_(value) {}
    const std::string &attribute() const noexcept { return attribute_; }
    std::size_t index() const noexcept { return index_; }
    double value() const noexcept { return value_; }

  private:
    std::string attribute_;
    std::size_t index_;
    double value_;
};

class PopulationTooSmall final : public Error {
  public:
    explicit PopulationTooSmall(std::size_t n)
        : Error("population of " + std::to_string(n) + " has no \"other individual\"; need at least 2") {}
};

class EmptySplit final : public Error {
  public:
    using Error::Error;
};

class BadArchitecture final : public Error {
  public:
    using Error::Error;
};

class ShapeMismatch final : public Error {
  public:
    using Error::Error;
};

class EmptyDataset final : public Error {
  public:
    using Error::Error;
};

class LengthMismatch final : public Error {
  public:
    LengthMismatch(std::size_t lhs, std::size_t rhs)
        : Error("sequence lengths differ: " + std::to_string(lhs) + " vs " + std::to_string(rhs)) {}
};

class EmptyInput final : public Error {
  public:
    using Error::Error;
};

// malformed CSV/JSON content, unsupported file versions
class DataFormatError final : public Error {
  public:
    using Error::Error;
};

class ConfigError final : public Error {
  public:
    using Error::Error;
};

class IoError final : public Error {
  public:
    using Error::Error;
};

}  // namespace compat
