// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>

namespace critsplit {

/// Argument outside the mathematical domain of an operation (m < 2, t < 0, pole of psi, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A leaf label or shape key that does not exist.
class NotFoundError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Operation called on an object in the wrong state (e.g. growing an ordered tree).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Input text could not be parsed; message carries a 1-based line:column.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error(message + " at " + std::to_string(line) + ":" + std::to_string(column)),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Structurally valid input that violates a policy (polytomies under the strict policy).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative numerics failed to converge or bracket.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Request exceeds a hard size cap.
class ResourceError : public std::length_error {
public:
    using std::length_error::length_error;
};

}  // namespace critsplit
