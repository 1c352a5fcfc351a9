#include "sigmak/common/errors.hpp"

namespace sigmak {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::admissibility: return "admissibility";
    case ErrorKind::degenerate_quotient: return "degenerate_quotient";
    case ErrorKind::argument: return "argument";
    case ErrorKind::metric: return "metric";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::chart: return "chart";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::model: return "model";
    case ErrorKind::safeguard: return "safeguard";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::hypothesis: return "hypothesis";
    case ErrorKind::normalization: return "normalization";
    case ErrorKind::umbilicity: return "umbilicity";
    case ErrorKind::validation: return "validation";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace sigmak
