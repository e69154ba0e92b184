#ifndef PERSUASION_ERROR_H_
#define PERSUASION_ERROR_H_

#include <stdexcept>
#include <string>

namespace persuasion {

enum class ErrorKind {
  kMeanMismatch,
  kNullEvent,
  kDomainError,
  kNotRegular,
  kEmptySet,
  kNotComparable,
  kInfeasible,
  kNumericFailure,
  kInvalidWitness,
  kNotAViolation,
  kConstructionFailure,
  kPreconditionFailed,
  kParseError,
  kInvalidArgument,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace persuasion

#endif  // PERSUASION_ERROR_H_
