// scenarios.hpp — Closed-form results for the three channels, kept as
// independent golden references for the general machinery, plus the
// figure-data series they generate
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "retroatom/channel.hpp"
#include "retroatom/states.hpp"

namespace retroatom::scenarios {

// Named series sampled on a common tau grid; the payload behind the
// figure-data CSV output.
struct ScenarioCurve {
  std::vector<double> tau_grid;
  std::vector<std::pair<std::string, std::vector<double>>> series;
};

// Undriven atom measured in the ground state: probabilities that the
// excited / ground state was prepared by an unbiased two-state source.
std::pair<double, double> spont_prep_probs(double gamma, double tau);

// Element-wise retrodictive state for the undriven atom and an arbitrary
// POM element, already normalized.
Operator2 spont_retro_elements(const PomElement& pom, double gamma, double tau);

// Posterior for the source preparing |e> with prior p and (|e>+|g>)/sqrt(2)
// with prior 1-p, measured at angle theta.
std::pair<double, double> superposition_posterior(double theta, double p, double gamma,
                                                  double tau);

// Element-wise retrodictive state for the thermal channel, normalized.
Operator2 thermal_retro_elements(const PomElement& pom, double gamma, double nbar,
                                 double tau);

// Forward Bloch-vector evolution of the driven atom in the literal
// coefficient form; cross-checked against the generator exponential.
BlochVector driven_bloch(const BlochVector& b0, double gamma, double v, double tau);

// Driven-channel retrodictive states for the three worked measurement
// outcomes: |e><e|, (1 + sigma_2)/2 and (1 + sigma_1)/2.
Operator2 driven_retro_excited(double gamma, double v, double tau);
Operator2 driven_retro_sigma2(double gamma, double v, double tau);
Operator2 driven_retro_sigma1(double gamma, double v, double tau);

enum class FigureId { F1a, F1b, F2a, F2b, F2c, F2d, F3a, F3b, F3c, F3d, F4a, F4b };

// Accepts "1a", "2c", "4b", ... Throws std::invalid_argument otherwise.
FigureId parse_figure_id(const std::string& text);
std::string figure_label(FigureId id);
const std::vector<FigureId>& all_figures();

struct FigureParams {
  double gamma = 1.0;
  double nbar = 1.0;  // thermal figures
  double v = 4.0;     // driven figures; default is four times gamma
};

// Default abscissa: `points` samples with gamma*tau spanning [0, 6] for the
// thermal figures and [0, 5] for the driven ones.
std::vector<double> default_tau_grid(FigureId id, double gamma, int points);

// Predictive curves apply the forward channel to the stated initial state;
// retrodictive curves apply retrodict_open to the stated POM element.
ScenarioCurve figure_data(FigureId id, const FigureParams& params,
                          const std::vector<double>& tau_grid);

}  // namespace retroatom::scenarios
