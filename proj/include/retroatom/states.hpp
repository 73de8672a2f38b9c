// states.hpp — Validated quantum-mechanical domain types: density matrices,
// POM elements, preparation ensembles and Bloch vectors
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "retroatom/operator2.hpp"

namespace retroatom {

// Whether a state was assigned from a preparation (forward in time) or from
// a measurement outcome (backward in time).
enum class StateRole { Predictive, Retrodictive };

// Hermitian, unit-trace, positive semi-definite 2x2 operator. Validation
// runs on every construction.
class DensityMatrix {
 public:
  DensityMatrix(const Operator2& op, StateRole role);

  const Operator2& op() const { return op_; }
  StateRole role() const { return role_; }

 private:
  Operator2 op_;
  StateRole role_;
};

// A single positive semi-definite measurement-outcome (or preparation)
// operator. Not necessarily trace one.
class PomElement {
 public:
  PomElement(const Operator2& op, std::string label);

  const Operator2& op() const { return op_; }
  const std::string& label() const { return label_; }

 private:
  Operator2 op_;
  std::string label_;
};

// A complete probability operator measure: elements summing to the identity.
class PomSet {
 public:
  explicit PomSet(std::vector<PomElement> elements);

  const std::vector<PomElement>& elements() const { return elements_; }

 private:
  std::vector<PomElement> elements_;
};

// Weighted preparation operators Lambda_p = P(p) * rho_p. Each item is
// Hermitian PSD and the traces sum to one.
class PreparationEnsemble {
 public:
  using Item = std::pair<std::string, Operator2>;

  explicit PreparationEnsemble(std::vector<Item> items);

  const std::vector<Item>& items() const { return items_; }

 private:
  std::vector<Item> items_;
};

// (u, v, w) expectation values of sigma_1, sigma_2, sigma_3.
struct BlochVector {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;

  double norm_sq() const { return u * u + v * v + w * w; }
};

// rho = (1 + u sigma_1 + v sigma_2 + w sigma_3) / 2 and its inverse.
// from_bloch rejects vectors outside the Bloch ball (norm tolerance
// BLOCH_NORM_TOL).
BlochVector to_bloch(const DensityMatrix& rho);
DensityMatrix from_bloch(const BlochVector& b, StateRole role = StateRole::Predictive);

// Scale a Hermitian PSD operator to unit trace. Zero or negative trace
// raises UnnormalizableError; positivity violations raise NonPhysicalError.
DensityMatrix normalize_to_density(const Operator2& op, StateRole role);

// Rank-one projector onto cos(theta/2)|g> + sin(theta/2)|e>.
PomElement projector_theta(double theta);

}  // namespace retroatom
