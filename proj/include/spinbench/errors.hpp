// Copyright 2026 The spinbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spinbench {

/// Configuration or vector length does not match the model size.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Value outside the admissible alphabet or range (e.g. a spin that is not +-1).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Problem too large for an exact (enumerative) routine.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

/// Malformed instance structure (unassigned spins, couplings between distant cells, ...).
struct StructureError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Tensor-network contraction lost all weight (beta or chi too aggressive).
struct ContractionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Statistics carry no information about the requested quantity.
struct DegenerateDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Metric undefined for the given inputs.
struct UndefinedMetricError : std::domain_error {
    using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

}  // namespace spinbench
