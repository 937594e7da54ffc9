/* SPDX-FileCopyrightText: Copyright (c) 2026, the qqbo authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef QQBO_ERRORS_HPP
#define QQBO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qqbo {

/// Linear algebra broke down (e.g. Cholesky failure after jitter escalation).
class NumericalFailure : public std::runtime_error {
public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Every optimization start of a model fit failed.
class FitFailure : public NumericalFailure {
public:
  explicit FitFailure(const std::string& what) : NumericalFailure(what) {}
};

/// Ask/tell called out of order, or a campaign driven past its budget.
class ProtocolError : public std::logic_error {
public:
  explicit ProtocolError(const std::string& what) : std::logic_error(what) {}
};

/// A requested computation exceeds its evaluation budget.
class BudgetError : public std::runtime_error {
public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// Reading or writing a state/report file failed or the content is invalid.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qqbo

#endif
