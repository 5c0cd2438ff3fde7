#pragma once

#include <stdexcept>
#include <string>

namespace cusp {

enum class ErrorKind {
  parameter,
  domain,
  configuration,
  degenerate,
  infeasible,
  precondition,
  size,
  evaluation,
  data,
  io,
  out_of_range,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define CUSP_DEFINE_ERROR(Name, Kind)                                   \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

CUSP_DEFINE_ERROR(ParameterError, parameter)
CUSP_DEFINE_ERROR(DomainError, domain)
CUSP_DEFINE_ERROR(ConfigError, configuration)
CUSP_DEFINE_ERROR(DegenerateError, degenerate)
CUSP_DEFINE_ERROR(InfeasibleError, infeasible)
CUSP_DEFINE_ERROR(PreconditionError, precondition)
CUSP_DEFINE_ERROR(SizeError, size)
CUSP_DEFINE_ERROR(EvaluationError, evaluation)
CUSP_DEFINE_ERROR(DataError, data)
CUSP_DEFINE_ERROR(IoError, io)
CUSP_DEFINE_ERROR(RangeError, out_of_range)

#undef CUSP_DEFINE_ERROR

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::domain: return "domain";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::size: return "size";
    case ErrorKind::evaluation: return "evaluation";
    case ErrorKind::data: return "data";
    case ErrorKind::io: return "io";
    case ErrorKind::out_of_range: return "range";
  }
  return "unknown";
}

}  // namespace cusp
