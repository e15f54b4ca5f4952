// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace seqscen {

// Search exceeded its cap without finding an admissible sample size.
class CapacityError : public std::runtime_error {
public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative numeric routine failed to converge or produced a non-finite value.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// A user-supplied evaluator (constraint, sampler, ...) failed or returned NaN.
class EvaluationError : public std::runtime_error {
public:
  explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace seqscen
