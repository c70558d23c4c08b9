#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace circ {

/// Base of every exception thrown by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: bad arity, repeated observations, mismatched
/// structures and the like.
class input_error : public error {
public:
  using error::error;
};

/// Unknown measurement, outcome or circumstance id.
class lookup_error : public error {
public:
  using error::error;
};

/// Conditioning on a disjunction of circumstances with zero total weight.
class undefined_conditional_error : public error {
public:
  using error::error;
};

/// The observed outcomes have zero prior probability under the model.
class impossible_evidence_error : public error {
public:
  using error::error;
};

struct Violation {
  std::string location;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

inline std::string render(const ValidationReport& report) {
  std::string out;
  for (const auto& v : report) {
    if (!out.empty()) out += "\n";
    out += v.location + ": " + v.message;
  }
  return out;
}

class validation_error : public error {
public:
  explicit validation_error(ValidationReport report)
      : error("invalid model:\n" + render(report)), report_(std::move(report)) {}

  const ValidationReport& report() const noexcept { return report_; }

private:
  ValidationReport report_;
};

} // namespace circ
