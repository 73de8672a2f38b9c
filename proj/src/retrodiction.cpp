#include "retroatom/retrodiction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "retroatom/tolerances.hpp"

namespace retroatom {

namespace {

double real_trace_product(const Operator2& a, const Operator2& b) {
  return (a * b).trace().real();
}

// Clamp the tiny negative overlaps that rounding can produce between PSD
// operators, then normalize into a posterior.
PreparationPosterior normalize_overlaps(std::vector<std::pair<std::string, double>> overlaps) {
  double total = 0.0;
  for (auto& [label, weight] : overlaps) {
    if (weight < 0.0) weight = 0.0;
    total += weight;
  }
  if (!(total > IMPOSSIBLE_OUTCOME_FLOOR)) {
    throw IncompatibleEnsembleError("measurement incompatible with ensemble");
  }
  for (auto& [label, weight] : overlaps) weight /= total;
  return PreparationPosterior(std::move(overlaps));
}

RetrodictionResult result_from_raw_image(const Operator2& raw) {
  const double n = raw.trace().real();
  if (!(n > IMPOSSIBLE_OUTCOME_FLOOR)) {
    throw ImpossibleOutcomeError("impossible outcome: zero retrodictive weight");
  }
  return {DensityMatrix((1.0 / n) * raw, StateRole::Retrodictive), n};
}

}  // namespace

PreparationPosterior::PreparationPosterior(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  double total = 0.0;
  for (auto& [label, p] : entries_) {
    if (p < -posterior_sum_tol() || p > 1.0 + posterior_sum_tol()) {
      throw NonPhysicalError("posterior probability outside [0, 1]");
    }
    p = std::min(std::max(p, 0.0), 1.0);
    total += p;
  }
  if (std::abs(total - 1.0) > posterior_sum_tol()) {
    throw NonPhysicalError("posterior probabilities do not sum to one");
  }
}

double PreparationPosterior::probability(const std::string& label) const {
  for (const auto& [name, p] : entries_) {
    if (name == label) return p;
  }
  throw std::invalid_argument("no posterior entry labelled '" + label + "'");
}

DensityMatrix retrodict_closed(const PomElement& pom, const Operator2& unitary) {
  const Operator2 gram = unitary.dagger() * unitary;
  if ((gram - Operator2::identity()).inf_norm() > UNITARITY_TOL) {
    throw std::invalid_argument("backward evolution operator is not unitary");
  }
  return normalize_to_density(unitary.dagger() * pom.op() * unitary,
                              StateRole::Retrodictive);
}

RetrodictionResult retrodict_open(const ChannelParams& params, const PomElement& pom) {
  const Superoperator s = build_superoperator(params);
  return result_from_raw_image(s.adjoint().apply(pom.op()));
}

RetrodictionResult retrodict_pauli(const ChannelParams& params, const PomElement& pom) {
  const Superoperator s = build_superoperator(params);

  // Forward-propagate 1/2 and (1 + sigma_k)/2; each has the form of a
  // density matrix, so the predictive channel applies directly.
  const Operator2 half_one_fwd = s.apply(0.5 * Operator2::identity());
  const double n = 2.0 * real_trace_product(half_one_fwd, pom.op());
  if (!(n > IMPOSSIBLE_OUTCOME_FLOOR)) {
    throw ImpossibleOutcomeError("impossible outcome: zero retrodictive weight");
  }

  Operator2 rho = 0.5 * Operator2::identity();
  for (int k = 1; k <= 3; ++k) {
    const Operator2 fwd = s.apply(0.5 * (Operator2::identity() + pauli(k)));
    const double u_k = 2.0 * real_trace_product(fwd, pom.op()) / n - 1.0;
    rho = rho + (0.5 * u_k) * pauli(k);
  }
  return {DensityMatrix(rho, StateRole::Retrodictive), n};
}

PreparationPosterior preparation_posterior(const DensityMatrix& rho_retr,
                                           const PreparationEnsemble& ensemble) {
  std::vector<std::pair<std::string, double>> overlaps;
  overlaps.reserve(ensemble.items().size());
  for (const auto& [label, lambda] : ensemble.items()) {
    overlaps.emplace_back(label, real_trace_product(rho_retr.op(), lambda));
  }
  return normalize_overlaps(std::move(overlaps));
}

PreparationPosterior forward_bayes(const ChannelParams& params,
                                   const PreparationEnsemble& ensemble,
                                   const PomElement& pom) {
  const Superoperator s = build_superoperator(params);
  std::vector<std::pair<std::string, double>> overlaps;
  overlaps.reserve(ensemble.items().size());
  for (const auto& [label, lambda] : ensemble.items()) {
    overlaps.emplace_back(label, real_trace_product(pom.op(), s.apply(lambda)));
  }
  return normalize_overlaps(std::move(overlaps));
}

PreparationPosterior forward_bayes_rk4(const ChannelParams& params,
                                       const PreparationEnsemble& ensemble,
                                       const PomElement& pom, int steps) {
  std::vector<std::pair<std::string, double>> overlaps;
  overlaps.reserve(ensemble.items().size());
  for (const auto& [label, lambda] : ensemble.items()) {
    const Operator2 evolved = integrate_lindblad_op(params, lambda, steps);
    overlaps.emplace_back(label, real_trace_product(pom.op(), evolved));
  }
  return normalize_overlaps(std::move(overlaps));
}

PreparationPosterior prep_prob_direct(const ChannelParams& params, const PomElement& pom,
                                      const std::vector<PomElement>& prep_elements) {
  const Superoperator s = build_superoperator(params);
  std::vector<std::pair<std::string, double>> overlaps;
  overlaps.reserve(prep_elements.size());
  for (const PomElement& prep : prep_elements) {
    if (!(prep.op().trace().real() > 0.0)) {
      throw std::invalid_argument("preparation element must have positive trace");
    }
    overlaps.emplace_back(prep.label(), real_trace_product(pom.op(), s.apply(prep.op())));
  }
  return normalize_overlaps(std::move(overlaps));
}

}  // namespace retroatom
