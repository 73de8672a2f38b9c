#include "retroatom/tolerances.hpp"

#include <cstdlib>
#include <optional>
#include <string>

namespace retroatom {

namespace {

std::optional<double> tol_override() {
  static const std::optional<double> value = []() -> std::optional<double> {
    const char* raw = std::getenv("RETROATOM_TOL_OVERRIDE");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(raw, &end);
    if (end == raw || *end != '\0' || !(v > 0.0)) return std::nullopt;
    return v;
  }();
  return value;
}

}  // namespace

double hermiticity_tol() { return tol_override().value_or(HERMITICITY_TOL); }
double psd_tol() { return tol_override().value_or(PSD_TOL); }
double completeness_tol() { return tol_override().value_or(COMPLETENESS_TOL); }
double posterior_sum_tol() { return tol_override().value_or(POSTERIOR_SUM_TOL); }

}  // namespace retroatom
