// retrodiction.hpp — Map a measurement outcome backward through a channel to
// a retrodictive state and convert it to preparation probabilities, by
// mutually checking routes
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "retroatom/channel.hpp"
#include "retroatom/states.hpp"

namespace retroatom {

// Normalized retrodictive state together with the trace of the raw adjoint
// image (the outcome's retrodictive weight).
struct RetrodictionResult {
  DensityMatrix rho_retr;
  double normalization;
};

// Posterior probabilities over labelled preparation events. Entries are
// validated to lie in [0, 1] and sum to one.
class PreparationPosterior {
 public:
  using Entry = std::pair<std::string, double>;

  explicit PreparationPosterior(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  double probability(const std::string& label) const;

 private:
  std::vector<Entry> entries_;
};

// Closed-system retrodiction: evolve the POM element backward through a
// unitary and normalize. The unitary is checked against UNITARITY_TOL.
DensityMatrix retrodict_closed(const PomElement& pom, const Operator2& unitary);

// Open-system retrodiction via the Hilbert-Schmidt adjoint of the channel
// superoperator. Raises ImpossibleOutcomeError when the retrodictive weight
// vanishes.
RetrodictionResult retrodict_open(const ChannelParams& params, const PomElement& pom);

// Same quantity by the independent Pauli-expansion route: the operators
// (1 + sigma_k)/2 and 1/2 are propagated forward through the channel and the
// Bloch components are read off from traces against the POM element.
RetrodictionResult retrodict_pauli(const ChannelParams& params, const PomElement& pom);

// Posterior over the ensemble given an already retrodicted state:
// P(p|m) proportional to Tr[rho_retr Lambda_p].
PreparationPosterior preparation_posterior(const DensityMatrix& rho_retr,
                                           const PreparationEnsemble& ensemble);

// The independent predictive-formalism route: P(p|m) proportional to
// Tr[Pi_m Phi(Lambda_p)], with the channel applied analytically or via the
// fixed-step integrator.
PreparationPosterior forward_bayes(const ChannelParams& params,
                                   const PreparationEnsemble& ensemble,
                                   const PomElement& pom);
PreparationPosterior forward_bayes_rk4(const ChannelParams& params,
                                       const PreparationEnsemble& ensemble,
                                       const PomElement& pom, int steps);

// Preparation probabilities for an unbiased source described by preparation
// POM elements, evolved forward and traced against the measurement element.
PreparationPosterior prep_prob_direct(const ChannelParams& params, const PomElement& pom,
                                      const std::vector<PomElement>& prep_elements);

}  // namespace retroatom
