#pragma once

#include <stdexcept>
#include <string>

namespace okutsu {

/// A call whose arguments violate a documented precondition.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The tree lacks the data needed to answer a query (for instance refinement chains).
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Stored tree data contradicts data recomputed from refinement chains.
class InconsistentTree : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An exhaustive search would exceed its evaluation budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace okutsu
