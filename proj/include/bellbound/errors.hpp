#pragma once

#include <stdexcept>
#include <string>

namespace bellbound {

/// Invalid argument: a precondition on p, beta, lambda, tolerance or a
/// distribution was violated. The message names the violated condition.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// The query lies outside the parameter regime a bound is proven for.
class RegimeError : public DomainError {
public:
    explicit RegimeError(const std::string& what) : DomainError(what) {}
};

/// Base for failures of a numerical budget (term count, exact arithmetic,
/// enumeration size). Inputs were valid but the computation could not finish.
class NumericalBudgetError : public std::runtime_error {
public:
    explicit NumericalBudgetError(const std::string& what) : std::runtime_error(what) {}
};

class ToleranceNotReached : public NumericalBudgetError {
public:
    explicit ToleranceNotReached(const std::string& what) : NumericalBudgetError(what) {}
};

class OverflowError : public NumericalBudgetError {
public:
    explicit OverflowError(const std::string& what) : NumericalBudgetError(what) {}
};

class BudgetExceeded : public NumericalBudgetError {
public:
    explicit BudgetExceeded(const std::string& what) : NumericalBudgetError(what) {}
};

}  // namespace bellbound
