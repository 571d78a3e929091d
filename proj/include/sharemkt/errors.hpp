#pragma once

#include <stdexcept>
#include <string>

namespace sharemkt {

/// Base class for all solver-level failures (as opposed to bad input,
/// which throws std::invalid_argument / std::domain_error).
class SolverError : public std::runtime_error {
  public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

class NoRootError : public SolverError {
  public:
    explicit NoRootError(const std::string& what) : SolverError(what) {}
};

class NoClearingError : public SolverError {
  public:
    explicit NoClearingError(const std::string& what) : SolverError(what) {}
};

class CrossCheckMismatchError : public SolverError {
  public:
    explicit CrossCheckMismatchError(const std::string& what) : SolverError(what) {}
};

class InconsistentRegimeError : public SolverError {
  public:
    explicit InconsistentRegimeError(const std::string& what) : SolverError(what) {}
};

class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class InsufficientDataError : public std::runtime_error {
  public:
    explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateFitError : public std::runtime_error {
  public:
    explicit DegenerateFitError(const std::string& what) : std::runtime_error(what) {}
};

class DuplicateValuesError : public std::invalid_argument {
  public:
    explicit DuplicateValuesError(const std::string& what) : std::invalid_argument(what) {}
};

class OracleNonConvergenceError : public SolverError {
  public:
    explicit OracleNonConvergenceError(const std::string& what) : SolverError(what) {}
};

}  // namespace sharemkt
