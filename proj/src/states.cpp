#include "retroatom/states.hpp"

#include <cmath>
#include <utility>

#include "retroatom/tolerances.hpp"

namespace retroatom {

namespace {

void require_hermitian_psd(const Operator2& op, const char* what) {
  if (!is_hermitian(op, hermiticity_tol())) {
    throw NonPhysicalError(std::string(what) + " is not Hermitian");
  }
  if (hermitian_eigenvalues(op).first < -psd_tol()) {
    throw NonPhysicalError(std::string(what) + " has a negative eigenvalue");
  }
}

}  // namespace

DensityMatrix::DensityMatrix(const Operator2& op, StateRole role) : op_(op), role_(role) {
  if (!is_hermitian(op_, hermiticity_tol())) {
    throw NonPhysicalError("density matrix is not Hermitian");
  }
  if (std::abs(op_.trace() - Complex(1.0)) > hermiticity_tol()) {
    throw NonPhysicalError("density matrix does not have unit trace");
  }
  if (hermitian_eigenvalues(op_).first < -psd_tol()) {
    throw NonPhysicalError("density matrix has a negative eigenvalue");
  }
}

PomElement::PomElement(const Operator2& op, std::string label)
    : op_(op), label_(std::move(label)) {
  require_hermitian_psd(op_, "POM element");
}

PomSet::PomSet(std::vector<PomElement> elements) : elements_(std::move(elements)) {
  Operator2 sum;
  for (const PomElement& e : elements_) sum = sum + e.op();
  if ((sum - Operator2::identity()).inf_norm() > completeness_tol()) {
    throw NonPhysicalError("POM elements do not sum to the identity");
  }
}

PreparationEnsemble::PreparationEnsemble(std::vector<Item> items) : items_(std::move(items)) {
  double total = 0.0;
  for (const Item& item : items_) {
    require_hermitian_psd(item.second, "preparation operator");
    total += item.second.trace().real();
  }
  if (std::abs(total - 1.0) > completeness_tol()) {
    throw NonPhysicalError("preparation operator traces do not sum to one");
  }
}

BlochVector to_bloch(const DensityMatrix& rho) {
  const Operator2& op = rho.op();
  return {2.0 * op.eg().real(), -2.0 * op.eg().imag(), op.ee().real() - op.gg().real()};
}

DensityMatrix from_bloch(const BlochVector& b, StateRole role) {
  if (b.norm_sq() > 1.0 + BLOCH_NORM_TOL) {
    throw NonPhysicalError("non-physical Bloch vector: norm exceeds one");
  }
  const Operator2 op(0.5 * (1.0 + b.w), Complex(0.5 * b.u, -0.5 * b.v),
                     Complex(0.5 * b.u, 0.5 * b.v), 0.5 * (1.0 - b.w));
  return DensityMatrix(op, role);
}

DensityMatrix normalize_to_density(const Operator2& op, StateRole role) {
  const double tr = op.trace().real();
  if (!(tr > 0.0)) {
    throw UnnormalizableError("unnormalizable: operator trace is not positive");
  }
  const Operator2 scaled = (1.0 / tr) * op;
  if (!is_hermitian(scaled, hermiticity_tol()) ||
      hermitian_eigenvalues(scaled).first < -psd_tol()) {
    throw NonPhysicalError("non-physical operator");
  }
  return DensityMatrix(scaled, role);
}

PomElement projector_theta(double theta) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("projector angle must be finite");
  }
  const double se = std::sin(0.5 * theta);  // amplitude on |e>
  const double cg = std::cos(0.5 * theta);  // amplitude on |g>
  const Operator2 op(se * se, se * cg, cg * se, cg * cg);
  return PomElement(op, "theta");
}

}  // namespace retroatom
