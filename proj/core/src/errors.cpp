#include "iam/errors.hpp"

#include <fmt/format.h>

namespace iam {

Error::Error(ErrorClass cls, std::string kind, const std::string& what)
    : std::runtime_error(what), class_(cls), kind_(std::move(kind)) {}

SchemaViolation::SchemaViolation(std::string table, std::size_t row,
                                 std::string column, std::string reason)
    : Error(ErrorClass::Input, "SchemaViolation",
            fmt::format("{}: row {}, column '{}': {}", table, row, column, reason)),
      table_(std::move(table)),
      row_(row),
      column_(std::move(column)),
      reason_(std::move(reason)) {}

NoConvergence::NoConvergence(const std::string& what, double residual,
                             int iterations)
    : Error(ErrorClass::Convergence, "NoConvergence",
            fmt::format("{} (residual {:.3e} after {} iterations)", what,
                        residual, iterations)),
      residual_(residual),
      iterations_(iterations) {}

CapInfeasible::CapInfeasible(const std::string& what, double gap_mt)
    : Error(ErrorClass::Infeasible, "CapInfeasible",
            fmt::format("{} (gap {:.3f} MtCO2e)", what, gap_mt)),
      gap_mt_(gap_mt) {}

}  // namespace iam
