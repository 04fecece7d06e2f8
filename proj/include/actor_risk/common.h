#ifndef ACTOR_RISK_COMMON_H_
#define ACTOR_RISK_COMMON_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace actor_risk {

// Opaque actor identifier. Compared and ordered by its string value so that
// every map keyed by actor is iterated in the same order on every run.
class ActorId {
 public:
  ActorId() = default;
  explicit ActorId(std::string value) : value_(std::move(value)) {}

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  auto operator<=>(const ActorId&) const = default;

 private:
  std::string value_;
};

inline std::ostream& operator<<(std::ostream& os, const ActorId& id) {
  return os << id.str();
}

// Reserved identifier of the controlled vehicle.
inline const ActorId& EgoId() {
  static const ActorId kEgo("ego");
  return kEgo;
}

// Error categories. The numeric values double as CLI exit codes where the
// command-line front end surfaces them directly.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kConfig = 2,
  kValidation = 3,
  kDegenerate = 4,
  kCapExceeded = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace actor_risk

template <>
struct std::hash<actor_risk::ActorId> {
  size_t operator()(const actor_risk::ActorId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};

#endif  // ACTOR_RISK_COMMON_H_
