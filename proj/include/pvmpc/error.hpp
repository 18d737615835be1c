#pragma once

#include <stdexcept>
#include <string>

namespace pvmpc {

// Bad input data or configuration (files, schema, invariants).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The optimizer could not produce a usable answer where one was required.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pvmpc
