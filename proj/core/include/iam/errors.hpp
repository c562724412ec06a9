#pragma once

#include <stdexcept>
#include <string>

namespace iam {

/// Coarse classification used for CLI exit codes.
enum class ErrorClass {
  Input = 2,        // malformed data, bad scenario, invalid arguments
  Convergence = 3,  // market solver did not reach tolerance
  Infeasible = 4,   // constraint set or emission cap cannot be met
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string kind, const std::string& what);

  ErrorClass error_class() const noexcept { return class_; }
  const std::string& kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(class_); }

 private:
  ErrorClass class_;
  std::string kind_;
};

#define IAM_DECLARE_ERROR(Name, Class)                                  \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what)                              \
        : Error(ErrorClass::Class, #Name, what) {}                      \
  };

// model-core
IAM_DECLARE_ERROR(InvalidDataset, Input)
IAM_DECLARE_ERROR(DanglingCommodity, Input)
IAM_DECLARE_ERROR(BadSharesSum, Input)
IAM_DECLARE_ERROR(NonPositiveIntensity, Input)
IAM_DECLARE_ERROR(BadTimeGrid, Input)

// choice
IAM_DECLARE_ERROR(MissingPrice, Input)
IAM_DECLARE_ERROR(AllWeightsZero, Input)
IAM_DECLARE_ERROR(ZeroObservedCostWithPositiveShare, Input)

// markets
IAM_DECLARE_ERROR(InfeasibleConstraintSet, Infeasible)

// policy
IAM_DECLARE_ERROR(BadYears, Input)
IAM_DECLARE_ERROR(UnknownScenarioKey, Input)

// emissions
IAM_DECLARE_ERROR(ZeroGeneration, Input)
IAM_DECLARE_ERROR(NoNegativeEmissions, Input)
IAM_DECLARE_ERROR(EmptySector, Input)

// feasibility
IAM_DECLARE_ERROR(NoBindingCap, Input)
IAM_DECLARE_ERROR(UnknownTechClass, Input)
IAM_DECLARE_ERROR(MisalignedSeries, Input)
IAM_DECLARE_ERROR(UnknownPotential, Input)

// scenario-io
IAM_DECLARE_ERROR(MissingTable, Input)
IAM_DECLARE_ERROR(UnknownKey, Input)
IAM_DECLARE_ERROR(BadValue, Input)

#undef IAM_DECLARE_ERROR

/// Raised with the row/column that failed to parse or validate.
class SchemaViolation : public Error {
 public:
  SchemaViolation(std::string table, std::size_t row, std::string column,
                  std::string reason);

  const std::string& table() const noexcept { return table_; }
  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string table_;
  std::size_t row_;
  std::string column_;
  std::string reason_;
};

/// The damped price iteration hit its iteration budget. Carries the best
/// residual reached so callers can decide whether to accept it.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double residual, int iterations);

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Net emissions at the carbon-price ceiling still exceed the cap.
class CapInfeasible : public Error {
 public:
  CapInfeasible(const std::string& what, double gap_mt);

  double gap_mt() const noexcept { return gap_mt_; }

 private:
  double gap_mt_;
};

}  // namespace iam
