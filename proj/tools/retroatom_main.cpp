// retroatom_main.cpp — Command-line front end: retrodiction queries,
// preparation posteriors, figure-data emission and the self-check suite
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "retroatom/cli_io.hpp"
#include "retroatom/retrodiction.hpp"
#include "retroatom/scenarios.hpp"
#include "retroatom/selfcheck.hpp"
#include "retroatom/tolerances.hpp"

namespace {

using retroatom::ChannelKind;
using retroatom::ChannelParams;
using retroatom::cli::fmt12;
using retroatom::cli::Json;

constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitImpossible = 3;

struct ChannelFlags {
  std::string name;
  double gamma = 1.0;
  double nbar = 0.0;
  double v = 0.0;
  double tau = 0.0;
  bool nbar_given = false;
  bool v_given = false;
};

ChannelParams make_channel(const ChannelFlags& f) {
  if (f.name == "spontaneous") {
    if (f.nbar_given || f.v_given) {
      throw std::invalid_argument(
          "--nbar/--v do not apply to the spontaneous channel");
    }
    return ChannelParams::spontaneous(f.gamma, f.tau);
  }
  if (f.name == "thermal") {
    if (!f.nbar_given) throw std::invalid_argument("thermal channel requires --nbar");
    if (f.v_given) throw std::invalid_argument("--v does not apply to the thermal channel");
    return ChannelParams::thermal(f.gamma, f.nbar, f.tau);
  }
  if (f.name == "driven") {
    if (!f.v_given) throw std::invalid_argument("driven channel requires --v");
    if (f.nbar_given) {
      throw std::invalid_argument("--nbar does not apply to the driven channel");
    }
    return ChannelParams::driven(f.gamma, f.v, f.tau);
  }
  throw std::invalid_argument("unknown channel '" + f.name + "'");
}

Json channel_json(const ChannelParams& p) {
  Json j;
  switch (p.kind) {
    case ChannelKind::SpontaneousEmission: j["channel"] = "spontaneous"; break;
    case ChannelKind::Thermal: j["channel"] = "thermal"; break;
    case ChannelKind::Driven: j["channel"] = "driven"; break;
  }
  j["gamma"] = p.gamma;
  if (p.kind == ChannelKind::Thermal) j["nbar"] = p.nbar;
  if (p.kind == ChannelKind::Driven) j["v"] = p.v;
  j["tau"] = p.tau;
  return j;
}

void emit(const std::string& payload, const std::string& output) {
  if (output.empty() || output == "-") {
    std::fwrite(payload.data(), 1, payload.size(), stdout);
    return;
  }
  std::ofstream file(output, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file '" + output + "'");
  file.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

int run_retrodict(const ChannelFlags& flags, const std::string& pom_spec,
                  const std::string& format, const std::string& output) {
  const ChannelParams params = make_channel(flags);
  const retroatom::PomElement pom = retroatom::cli::resolve_pom(pom_spec, params);
  const retroatom::RetrodictionResult result = retroatom::retrodict_open(params, pom);
  const retroatom::Operator2& rho = result.rho_retr.op();

  std::string payload;
  if (format == "json") {
    Json j = channel_json(params);
    j["pom"] = pom.label();
    j["rho_retr"] = retroatom::cli::operator_to_json(rho);
    j["normalization"] = result.normalization;
    payload = j.dump(2) + "\n";
  } else {
    payload =
        "tau,rho_ee_re,rho_ee_im,rho_eg_re,rho_eg_im,rho_ge_re,rho_ge_im,"
        "rho_gg_re,rho_gg_im,normalization\n";
    payload += fmt12(params.tau) + "," + fmt12(rho.ee().real()) + "," +
               fmt12(rho.ee().imag()) + "," + fmt12(rho.eg().real()) + "," +
               fmt12(rho.eg().imag()) + "," + fmt12(rho.ge().real()) + "," +
               fmt12(rho.ge().imag()) + "," + fmt12(rho.gg().real()) + "," +
               fmt12(rho.gg().imag()) + "," + fmt12(result.normalization) + "\n";
  }
  emit(payload, output);
  return 0;
}

int run_posterior(const ChannelFlags& flags, const std::string& pom_spec,
                  const std::string& ensemble_spec, const std::string& format,
                  const std::string& output) {
  const ChannelParams params = make_channel(flags);
  const retroatom::PomElement pom = retroatom::cli::resolve_pom(pom_spec, params);
  const retroatom::PreparationEnsemble ensemble =
      retroatom::cli::resolve_ensemble(ensemble_spec);

  const retroatom::RetrodictionResult retro = retroatom::retrodict_open(params, pom);
  const retroatom::PreparationPosterior via_retro =
      retroatom::preparation_posterior(retro.rho_retr, ensemble);
  const retroatom::PreparationPosterior via_bayes =
      retroatom::forward_bayes(params, ensemble, pom);

  double max_dev = 0.0;
  for (std::size_t i = 0; i < via_retro.entries().size(); ++i) {
    max_dev = std::max(max_dev, std::abs(via_retro.entries()[i].second -
                                         via_bayes.entries()[i].second));
  }

  std::string payload;
  if (format == "json") {
    Json j = channel_json(params);
    j["pom"] = pom.label();
    j["entries"] = Json::array();
    for (std::size_t i = 0; i < via_retro.entries().size(); ++i) {
      Json entry;
      entry["label"] = via_retro.entries()[i].first;
      entry["p_retrodictive"] = via_retro.entries()[i].second;
      entry["p_forward_bayes"] = via_bayes.entries()[i].second;
      j["entries"].push_back(entry);
    }
    j["max_deviation"] = max_dev;
    payload = j.dump(2) + "\n";
  } else {
    payload = "label,p_retrodictive,p_forward_bayes,abs_diff\n";
    for (std::size_t i = 0; i < via_retro.entries().size(); ++i) {
      const double a = via_retro.entries()[i].second;
      const double b = via_bayes.entries()[i].second;
      payload += via_retro.entries()[i].first + "," + fmt12(a) + "," + fmt12(b) + "," +
                 fmt12(std::abs(a - b)) + "\n";
    }
  }
  emit(payload, output);

  if (max_dev > retroatom::ROUTE_EQUIV_TOL) {
    std::cerr << "error: retrodictive and Bayesian routes disagree by " << max_dev
              << "\n";
    return kExitInternal;
  }
  return 0;
}

int run_figure(const std::string& id_text, double gamma, double nbar, double v,
               bool v_given, int points, const std::string& format,
               const std::string& output) {
  const retroatom::scenarios::FigureId id = retroatom::scenarios::parse_figure_id(id_text);
  retroatom::scenarios::FigureParams params;
  params.gamma = gamma;
  params.nbar = nbar;
  params.v = v_given ? v : 4.0 * gamma;

  const std::vector<double> grid =
      retroatom::scenarios::default_tau_grid(id, gamma, points);
  const retroatom::scenarios::ScenarioCurve curve =
      retroatom::scenarios::figure_data(id, params, grid);

  std::string payload;
  if (format == "json") {
    Json j;
    j["figure"] = id_text;
    j["gamma"] = params.gamma;
    if (id_text[0] == '1') j["nbar"] = params.nbar;
    else j["v"] = params.v;
    j["tau"] = curve.tau_grid;
    j["series"] = Json::object();
    for (const auto& [name, values] : curve.series) j["series"][name] = values;
    payload = j.dump(2) + "\n";
  } else {
    payload = "tau";
    for (const auto& [name, values] : curve.series) payload += "," + name;
    payload += "\n";
    for (std::size_t row = 0; row < curve.tau_grid.size(); ++row) {
      payload += fmt12(curve.tau_grid[row]);
      for (const auto& [name, values] : curve.series) payload += "," + fmt12(values[row]);
      payload += "\n";
    }
  }
  emit(payload, output);
  return 0;
}

int run_check(bool as_json, bool corrupt_thermal, const std::string& output) {
  retroatom::selfcheck::CheckOptions options;
  options.corrupt_thermal_coherence = corrupt_thermal;
  const retroatom::selfcheck::CheckReport report =
      retroatom::selfcheck::run_self_check(options);

  std::string payload;
  if (as_json) {
    Json j;
    j["invariants"] = Json::array();
    for (const auto& item : report.invariants) {
      Json entry;
      entry["name"] = item.name;
      entry["pass"] = item.pass;
      entry["measured"] = item.measured;
      entry["tol"] = item.tol;
      j["invariants"].push_back(entry);
    }
    j["transcription_audit"] = Json::array();
    for (const auto& item : report.audit) {
      Json entry;
      entry["name"] = item.name;
      entry["within_tol"] = item.pass;
      entry["measured"] = item.measured;
      entry["tol"] = item.tol;
      j["transcription_audit"].push_back(entry);
    }
    j["all_pass"] = report.all_pass();
    payload = j.dump(2) + "\n";
  } else {
    char line[256];
    for (const auto& item : report.invariants) {
      std::snprintf(line, sizeof line, "[%s] %s (measured %.3g, tol %.3g)\n",
                    item.pass ? "PASS" : "FAIL", item.name.c_str(), item.measured,
                    item.tol);
      payload += line;
    }
    for (const auto& item : report.audit) {
      std::snprintf(line, sizeof line, "[%s] %s (measured %.3g, tol %.3g)\n",
                    item.pass ? "AUDIT OK" : "AUDIT FINDING", item.name.c_str(),
                    item.measured, item.tol);
      payload += line;
    }
    std::size_t passed = 0;
    for (const auto& item : report.invariants) passed += item.pass ? 1 : 0;
    std::snprintf(line, sizeof line, "RESULT: %s (%zu/%zu invariants)\n",
                  report.all_pass() ? "PASS" : "FAIL", passed,
                  report.invariants.size());
    payload += line;
  }
  emit(payload, output);
  return report.all_pass() ? 0 : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retrodictive state inference for a damped two-level atom"};
  app.require_subcommand(1);

  ChannelFlags flags;
  std::string pom_spec;
  std::string ensemble_spec;
  std::string format = "csv";
  std::string output = "-";

  const auto add_channel_flags = [&flags](CLI::App* cmd) {
    cmd->add_option("--channel", flags.name, "spontaneous | thermal | driven")
        ->required()
        ->check(CLI::IsMember({"spontaneous", "thermal", "driven"}));
    cmd->add_option("--gamma", flags.gamma, "decay rate (> 0)")->required();
    cmd->add_option("--nbar", flags.nbar, "mean thermal occupation (thermal only)");
    cmd->add_option("--v", flags.v, "drive strength (driven only)");
    cmd->add_option("--tau", flags.tau, "interval between preparation and measurement")
        ->required();
  };
  const auto add_io_flags = [&format, &output](CLI::App* cmd) {
    cmd->add_option("--format", format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output", output, "output path ('-' for stdout)");
  };

  CLI::App* retro_cmd =
      app.add_subcommand("retrodict", "Retrodictive density matrix for an outcome");
  add_channel_flags(retro_cmd);
  retro_cmd->add_option("--pom", pom_spec, "POM element preset or inline JSON")
      ->required();
  add_io_flags(retro_cmd);

  CLI::App* posterior_cmd =
      app.add_subcommand("posterior", "Preparation probabilities for an outcome");
  add_channel_flags(posterior_cmd);
  posterior_cmd->add_option("--pom", pom_spec, "POM element preset or inline JSON")
      ->required();
  posterior_cmd
      ->add_option("--ensemble", ensemble_spec, "ensemble preset or inline JSON")
      ->required();
  add_io_flags(posterior_cmd);

  std::string figure_id;
  double fig_gamma = 1.0;
  double fig_nbar = 1.0;
  double fig_v = 4.0;
  int fig_points = 200;
  CLI::App* figure_cmd = app.add_subcommand("figure", "Emit figure-data series");
  figure_cmd->add_option("id", figure_id, "figure id: 1a 1b 2a 2b 2c 2d 3a 3b 3c 3d 4a 4b")
      ->required();
  figure_cmd->add_option("--gamma", fig_gamma, "decay rate (> 0)");
  figure_cmd->add_option("--nbar", fig_nbar, "mean thermal occupation (thermal figures)");
  CLI::Option* fig_v_opt =
      figure_cmd->add_option("--v", fig_v, "drive strength (default 4*gamma)");
  figure_cmd->add_option("--points", fig_points, "grid points (default 200)");
  add_io_flags(figure_cmd);

  bool check_json = false;
  bool corrupt_thermal = false;
  CLI::App* check_cmd =
      app.add_subcommand("check", "Run the cross-route and oracle invariant suite");
  check_cmd->add_flag("--json", check_json, "machine-readable report");
  check_cmd->add_flag("--corrupt-thermal-coherence", corrupt_thermal)->group("");
  add_io_flags(check_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  flags.nbar_given = retro_cmd->count("--nbar") > 0 || posterior_cmd->count("--nbar") > 0;
  flags.v_given = retro_cmd->count("--v") > 0 || posterior_cmd->count("--v") > 0;

  try {
    if (*retro_cmd) return run_retrodict(flags, pom_spec, format, output);
    if (*posterior_cmd) {
      return run_posterior(flags, pom_spec, ensemble_spec, format, output);
    }
    if (*figure_cmd) {
      return run_figure(figure_id, fig_gamma, fig_nbar, fig_v, fig_v_opt->count() > 0,
                        fig_points, format, output);
    }
    if (*check_cmd) return run_check(check_json, corrupt_thermal, output);
  } catch (const retroatom::ImpossibleOutcomeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitImpossible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitConfig;
}
