#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dgmm {

/// Validation: malformed input or a failed structural check.
/// Precondition: a computation's hypothesis does not hold.
/// Inconclusive: the degree window is too small to certify an answer.
enum class ErrorKind { Validation, Precondition, Inconclusive };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_validation(const std::string& what) {
  throw Error(ErrorKind::Validation, what);
}

[[noreturn]] inline void fail_precondition(const std::string& what) {
  throw Error(ErrorKind::Precondition, what);
}

[[noreturn]] inline void fail_inconclusive(const std::string& what) {
  throw Error(ErrorKind::Inconclusive, what);
}

/// Outcome of a verify_* routine. Violations carry a witness description;
/// only the first few are kept so reports stay readable.
struct CheckReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::size_t suppressed = 0;

  static constexpr std::size_t kMaxWitnesses = 8;

  void fail(const std::string& witness) {
    ok = false;
    if (violations.size() < kMaxWitnesses)
      violations.push_back(witness);
    else
      ++suppressed;
  }

  void merge(const CheckReport& other, const std::string& prefix = "") {
    if (other.ok) return;
    ok = false;
    for (const auto& v : other.violations) fail(prefix + v);
    suppressed += other.suppressed;
  }

  std::string first() const { return violations.empty() ? std::string() : violations.front(); }
};

}  // namespace dgmm
