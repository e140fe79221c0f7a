#pragma once

#include <stdexcept>
#include <string>

namespace mpwsn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates its type invariant (negative power, zero bit rate, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The quadratic for a path has A <= 0: zero delay or zero traffic energy.
class DegeneratePathError : public Error {
 public:
  using Error::Error;
};

/// Every path has zero raw capacity but packets remain to be placed.
class NoCapacityError : public Error {
 public:
  using Error::Error;
};

/// A route references a node that is no longer alive.
class StaleRouteError : public Error {
 public:
  using Error::Error;
};

/// No redundant node is left to take over a failed node.
class UnrecoverableFailure : public Error {
 public:
  using Error::Error;
};

/// A second transfer was started while one is still active.
class TransferInProgress : public Error {
 public:
  using Error::Error;
};

/// Scenario file problem; the message carries the line number and/or field name.
class ScenarioError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpwsn
