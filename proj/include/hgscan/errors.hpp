#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hgscan {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An enumeration or sampling request exceeds its configured budget.
class BudgetError : public std::runtime_error {
public:
    BudgetError(const std::string& what, std::uint64_t required, std::uint64_t budget)
        : std::runtime_error(what + " (required " + std::to_string(required) + ", budget " +
                             std::to_string(budget) + ")"),
          required_(required), budget_(budget) {}

    std::uint64_t required() const noexcept { return required_; }
    std::uint64_t budget() const noexcept { return budget_; }

private:
    std::uint64_t required_;
    std::uint64_t budget_;
};

/// Malformed input file or configuration. Carries the 1-based line when known.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A scan set has zero null expectation but a positive observed count.
class ZeroExpectationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hgscan
