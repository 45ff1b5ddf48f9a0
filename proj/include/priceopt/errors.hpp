#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace priceopt {

enum class ConstraintKind { sales, revenue };

inline const char* to_string(ConstraintKind k) {
  return k == ConstraintKind::sales ? "sales" : "revenue";
}

/// Malformed input: bad construction arguments, schema violations, broken files.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One requirement that cannot be met: `required` exceeds `capacity` on [t_start, t_end].
struct InfeasibilityDetail {
  std::size_t constraint_index = 0;
  ConstraintKind kind = ConstraintKind::sales;
  double t_start = 0.0;
  double t_end = 0.0;
  double required = 0.0;
  double capacity = 0.0;
};

/// A scenario (or sub-interval) admits no admissible price.
class infeasible_error : public std::runtime_error {
 public:
  explicit infeasible_error(const std::string& msg) : std::runtime_error(msg) {}
  infeasible_error(const std::string& msg, std::vector<InfeasibilityDetail> details)
      : std::runtime_error(msg), details_(std::move(details)) {}

  const std::vector<InfeasibilityDetail>& details() const { return details_; }

 private:
  std::vector<InfeasibilityDetail> details_;
};

/// Brute-force enumeration would exceed its evaluation budget.
class enumeration_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace priceopt
