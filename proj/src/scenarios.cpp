#include "retroatom/scenarios.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "retroatom/retrodiction.hpp"
#include "retroatom/tolerances.hpp"

namespace retroatom::scenarios {

namespace {

Operator2 normalize_by_diagonal(Complex ee, Complex eg, Complex ge, Complex gg) {
  const double n = (ee + gg).real();
  if (!(n > IMPOSSIBLE_OUTCOME_FLOOR)) {
    throw ImpossibleOutcomeError("impossible outcome: zero retrodictive weight");
  }
  const Complex inv(1.0 / n, 0.0);
  return {inv * ee, inv * eg, inv * ge, inv * gg};
}

}  // namespace

std::pair<double, double> spont_prep_probs(double gamma, double tau) {
  const double e2 = std::exp(-2.0 * gamma * tau);
  const double p_e = (1.0 - e2) / (2.0 - e2);
  return {p_e, 1.0 / (2.0 - e2)};
}

Operator2 spont_retro_elements(const PomElement& pom, double gamma, double tau) {
  const double e1 = std::exp(-gamma * tau);
  const double e2 = e1 * e1;
  const Complex pee = pom.op().ee();
  const Complex pgg = pom.op().gg();
  const Complex ee = e2 * pee + (1.0 - e2) * pgg;
  const Complex gg = pgg;
  const Complex eg = e1 * pom.op().eg();
  const Complex ge = e1 * pom.op().ge();
  return normalize_by_diagonal(ee, eg, ge, gg);
}

std::pair<double, double> superposition_posterior(double theta, double p, double gamma,
                                                  double tau) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("prior probability must lie in [0, 1]");
  }
  const double e1 = std::exp(-gamma * tau);
  const double e2 = e1 * e1;
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const double numerator_e = p * (1.0 + ct * (1.0 - 2.0 * e2));
  const double denominator =
      1.0 + ct * (1.0 - e2) + (1.0 - p) * st * e1 - p * ct * e2;
  const double p_e = numerator_e / denominator;
  return {p_e, 1.0 - p_e};
}

Operator2 thermal_retro_elements(const PomElement& pom, double gamma, double nbar,
                                 double tau) {
  const double r = 2.0 * nbar + 1.0;
  const double e1 = std::exp(-gamma * r * tau);
  const double e2 = e1 * e1;
  const double up = nbar / r;
  const double down = (nbar + 1.0) / r;
  const Complex pee = pom.op().ee();
  const Complex pgg = pom.op().gg();
  const Complex ee = pee * (up + down * e2) + pgg * (down * (1.0 - e2));
  const Complex gg = pgg * (down + up * e2) + pee * (up * (1.0 - e2));
  const Complex eg = e1 * pom.op().eg();
  const Complex ge = e1 * pom.op().ge();
  return normalize_by_diagonal(ee, eg, ge, gg);
}

BlochVector driven_bloch(const BlochVector& b0, double gamma, double v, double tau) {
  const double denom = v * v + 2.0 * gamma * gamma;
  const RabiTrig tr = rabi_trig(v * v - 0.25 * gamma * gamma, tau);
  const double decay = std::exp(-1.5 * gamma * tau);

  const double u = b0.u * std::exp(-gamma * tau);
  const double vv =
      (2.0 * gamma * v +
       decay * ((denom * b0.v - 2.0 * gamma * v) * tr.c +
                (-3.0 * gamma * gamma * v +
                 denom * (-v * b0.w + 0.5 * gamma * b0.v)) *
                    tr.s)) /
      denom;
  const double w =
      (-2.0 * gamma * gamma +
       decay * ((2.0 * gamma * gamma + denom * b0.w) * tr.c +
                (-2.0 * gamma * (v * v + 0.5 * gamma * gamma) +
                 denom * (v * b0.v - 0.5 * gamma * b0.w)) *
                    tr.s)) /
      denom;
  return {u, vv, w};
}

Operator2 driven_retro_excited(double gamma, double v, double tau) {
  const double denom = v * v + 2.0 * gamma * gamma;
  const RabiTrig tr = rabi_trig(v * v - 0.25 * gamma * gamma, tau);
  const double decay = std::exp(-1.5 * gamma * tau);
  const double g2 = gamma * gamma;

  const double ee = (v * v + decay * ((v * v + 4.0 * g2) * tr.c -
                                      0.5 * gamma * (5.0 * v * v + 4.0 * g2) * tr.s)) /
                    (2.0 * denom);
  const double gg = v * v * (1.0 - decay * (tr.c + 1.5 * gamma * tr.s)) / (2.0 * denom);
  const Complex eg(0.0, -0.5 * v * decay * tr.s);
  return normalize_by_diagonal(ee, eg, -eg, gg);
}

Operator2 driven_retro_sigma2(double gamma, double v, double tau) {
  const double denom = v * v + 2.0 * gamma * gamma;
  const RabiTrig tr = rabi_trig(v * v - 0.25 * gamma * gamma, tau);
  const double decay = std::exp(-1.5 * gamma * tau);
  const double g2 = gamma * gamma;

  const double ee =
      0.5 * (1.0 + (2.0 * gamma * v -
                    decay * (2.0 * gamma * v * tr.c + v * (v * v + 5.0 * g2) * tr.s)) /
                       denom);
  const double gg =
      0.5 * (1.0 + (2.0 * gamma * v -
                    decay * (2.0 * gamma * v * tr.c + v * (g2 - v * v) * tr.s)) /
                       denom);
  const Complex eg = Complex(0.0, -0.5 * decay) * Complex(tr.c + 0.5 * gamma * tr.s, 0.0);
  return normalize_by_diagonal(ee, eg, -eg, gg);
}

Operator2 driven_retro_sigma1(double gamma, double /*v*/, double tau) {
  const double off = 0.5 * std::exp(-gamma * tau);
  return {0.5, off, off, 0.5};
}

FigureId parse_figure_id(const std::string& text) {
  static const std::map<std::string, FigureId> ids = {
      {"1a", FigureId::F1a}, {"1b", FigureId::F1b}, {"2a", FigureId::F2a},
      {"2b", FigureId::F2b}, {"2c", FigureId::F2c}, {"2d", FigureId::F2d},
      {"3a", FigureId::F3a}, {"3b", FigureId::F3b}, {"3c", FigureId::F3c},
      {"3d", FigureId::F3d}, {"4a", FigureId::F4a}, {"4b", FigureId::F4b}};
  const auto it = ids.find(text);
  if (it == ids.end()) {
    throw std::invalid_argument("unknown figure id '" + text + "'");
  }
  return it->second;
}

std::string figure_label(FigureId id) {
  switch (id) {
    case FigureId::F1a: return "1a";
    case FigureId::F1b: return "1b";
    case FigureId::F2a: return "2a";
    case FigureId::F2b: return "2b";
    case FigureId::F2c: return "2c";
    case FigureId::F2d: return "2d";
    case FigureId::F3a: return "3a";
    case FigureId::F3b: return "3b";
    case FigureId::F3c: return "3c";
    case FigureId::F3d: return "3d";
    case FigureId::F4a: return "4a";
    case FigureId::F4b: return "4b";
  }
  throw std::invalid_argument("unknown figure id");
}

const std::vector<FigureId>& all_figures() {
  static const std::vector<FigureId> ids = {
      FigureId::F1a, FigureId::F1b, FigureId::F2a, FigureId::F2b,
      FigureId::F2c, FigureId::F2d, FigureId::F3a, FigureId::F3b,
      FigureId::F3c, FigureId::F3d, FigureId::F4a, FigureId::F4b};
  return ids;
}

namespace {

bool is_thermal_figure(FigureId id) { return id == FigureId::F1a || id == FigureId::F1b; }

enum class CurveSource { Predictive, Retrodictive };
enum class CurveContent { Diagonal, ImagOffDiagonal, FullOffDiagonal };

struct FigureSpec {
  CurveSource source;
  CurveContent content;
};

FigureSpec figure_spec(FigureId id) {
  switch (id) {
    case FigureId::F1a: return {CurveSource::Predictive, CurveContent::Diagonal};
    case FigureId::F1b: return {CurveSource::Retrodictive, CurveContent::Diagonal};
    case FigureId::F2a: return {CurveSource::Predictive, CurveContent::Diagonal};
    case FigureId::F2b: return {CurveSource::Retrodictive, CurveContent::Diagonal};
    case FigureId::F2c: return {CurveSource::Predictive, CurveContent::ImagOffDiagonal};
    case FigureId::F2d: return {CurveSource::Retrodictive, CurveContent::ImagOffDiagonal};
    case FigureId::F3a: return {CurveSource::Predictive, CurveContent::Diagonal};
    case FigureId::F3b: return {CurveSource::Retrodictive, CurveContent::Diagonal};
    case FigureId::F3c: return {CurveSource::Predictive, CurveContent::ImagOffDiagonal};
    case FigureId::F3d: return {CurveSource::Retrodictive, CurveContent::ImagOffDiagonal};
    case FigureId::F4a: return {CurveSource::Retrodictive, CurveContent::Diagonal};
    case FigureId::F4b: return {CurveSource::Retrodictive, CurveContent::FullOffDiagonal};
  }
  throw std::invalid_argument("unknown figure id");
}

// Initial predictive state (for predictive curves) or measured POM element
// (for retrodictive curves) belonging to each figure family.
Operator2 figure_subject(FigureId id, const FigureParams& p) {
  switch (id) {
    case FigureId::F1a:
    case FigureId::F1b:
    case FigureId::F2a:
    case FigureId::F2b:
    case FigureId::F2c:
    case FigureId::F2d:
      return Operator2::ketbra(kExcited, kExcited);
    case FigureId::F3a:
    case FigureId::F3b:
    case FigureId::F3c:
    case FigureId::F3d:
      // (|e> + i|g>)/sqrt(2), i.e. (1 + sigma_2)/2.
      return 0.5 * (Operator2::identity() + pauli(2));
    case FigureId::F4a:
    case FigureId::F4b:
      return from_bloch(driven_steady_state(p.gamma, p.v)).op();
  }
  throw std::invalid_argument("unknown figure id");
}

ChannelParams figure_channel(FigureId id, const FigureParams& p, double tau) {
  return is_thermal_figure(id) ? ChannelParams::thermal(p.gamma, p.nbar, tau)
                               : ChannelParams::driven(p.gamma, p.v, tau);
}

}  // namespace

std::vector<double> default_tau_grid(FigureId id, double gamma, int points) {
  if (points < 2) {
    throw std::invalid_argument("figure grid needs at least two points");
  }
  const double span = (is_thermal_figure(id) ? 6.0 : 5.0) / gamma;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = span * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

ScenarioCurve figure_data(FigureId id, const FigureParams& params,
                          const std::vector<double>& tau_grid) {
  if (tau_grid.empty()) {
    throw std::invalid_argument("figure grid must not be empty");
  }
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] >= 0.0) || (i > 0 && !(tau_grid[i] > tau_grid[i - 1]))) {
      throw std::invalid_argument("figure grid must be ascending and non-negative");
    }
  }

  const FigureSpec spec = figure_spec(id);
  const Operator2 subject = figure_subject(id, params);

  ScenarioCurve curve;
  curve.tau_grid = tau_grid;
  switch (spec.content) {
    case CurveContent::Diagonal:
      curve.series = {{"rho_ee", {}}, {"rho_gg", {}}};
      break;
    case CurveContent::ImagOffDiagonal:
      curve.series = {{"im_rho_eg", {}}, {"im_rho_ge", {}}};
      break;
    case CurveContent::FullOffDiagonal:
      curve.series = {{"re_rho_eg", {}}, {"im_rho_eg", {}}, {"re_rho_ge", {}},
                      {"im_rho_ge", {}}};
      break;
  }
  for (auto& [name, values] : curve.series) values.reserve(tau_grid.size());

  for (const double tau : tau_grid) {
    const ChannelParams cp = figure_channel(id, params, tau);
    Operator2 rho;
    if (spec.source == CurveSource::Predictive) {
      rho = build_superoperator(cp).apply(subject);
    } else {
      rho = retrodict_open(cp, PomElement(subject, figure_label(id))).rho_retr.op();
    }
    switch (spec.content) {
      case CurveContent::Diagonal:
        curve.series[0].second.push_back(rho.ee().real());
        curve.series[1].second.push_back(rho.gg().real());
        break;
      case CurveContent::ImagOffDiagonal:
        curve.series[0].second.push_back(rho.eg().imag());
        curve.series[1].second.push_back(rho.ge().imag());
        break;
      case CurveContent::FullOffDiagonal:
        curve.series[0].second.push_back(rho.eg().real());
        curve.series[1].second.push_back(rho.eg().imag());
        curve.series[2].second.push_back(rho.ge().real());
        curve.series[3].second.push_back(rho.ge().imag());
        break;
    }
  }
  return curve;
}

}  // namespace retroatom::scenarios
