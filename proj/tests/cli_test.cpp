#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <doctest.h>

#include "retroatom/cli_io.hpp"
#include "retroatom/scenarios.hpp"
#include "testutil.hpp"

using namespace retroatom;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string stdout_text;
};

CliResult run_cli(const std::string& args, const std::string& env_prefix = {}) {
  const std::string command =
      env_prefix + (env_prefix.empty() ? "" : " ") + std::string(RETROATOM_BIN) + " " +
      args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
    result.stdout_text.append(buf, n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

double cell(const std::vector<std::vector<std::string>>& rows, std::size_t r,
            std::size_t c) {
  return std::stod(rows.at(r).at(c));
}

}  // namespace

TEST_CASE("operator JSON round trips and rejects malformed input") {
  const Operator2 op(Complex(0.25, 0.0), Complex(0.1, -0.2), Complex(0.1, 0.2),
                     Complex(0.75, 0.0));
  const Operator2 back = cli::operator_from_json(cli::operator_to_json(op));
  CHECK(testutil::max_entry_diff(op, back) == 0.0);

  CHECK_THROWS_AS(cli::operator_from_json(cli::Json::parse("{\"ee\":[1,0]}")),
                  std::invalid_argument);
  CHECK_THROWS_AS(cli::operator_from_json(cli::Json::parse(
                      "{\"ee\":[1],\"eg\":[0,0],\"ge\":[0,0],\"gg\":[0,0]}")),
                  std::invalid_argument);
  CHECK_THROWS_AS(cli::operator_from_json(cli::Json::parse("[1,2]")),
                  std::invalid_argument);
}

TEST_CASE("pom and ensemble presets resolve to the documented operators") {
  CHECK(testutil::max_entry_diff(cli::resolve_pom("excited", std::nullopt).op(),
                                 testutil::excited_projector()) == 0.0);
  CHECK(testutil::max_entry_diff(cli::resolve_pom("ground", std::nullopt).op(),
                                 testutil::ground_projector()) == 0.0);
  CHECK(testutil::max_entry_diff(cli::resolve_pom("plus", std::nullopt).op(),
                                 testutil::plus_projector()) == 0.0);
  CHECK(testutil::max_entry_diff(cli::resolve_pom("sigma2-plus", std::nullopt).op(),
                                 testutil::sigma2_plus_projector()) == 0.0);
  CHECK(testutil::max_entry_diff(cli::resolve_pom("theta:0.8", std::nullopt).op(),
                                 projector_theta(0.8).op()) == 0.0);

  const ChannelParams driven = ChannelParams::driven(1.0, 4.0, 1.0);
  const PomElement steady = cli::resolve_pom("steady-state", driven);
  CHECK(testutil::max_entry_diff(steady.op(),
                                 from_bloch(driven_steady_state(1.0, 4.0)).op()) == 0.0);
  CHECK_THROWS_AS(cli::resolve_pom("steady-state", std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(cli::resolve_pom("steady-state", ChannelParams::thermal(1.0, 1.0, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(cli::resolve_pom("bogus", std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(cli::resolve_pom("theta:xyz", std::nullopt), std::invalid_argument);

  const PomElement inline_pom = cli::resolve_pom(
      R"({"ee":[0.5,0],"eg":[0,0],"ge":[0,0],"gg":[0.5,0]})", std::nullopt);
  CHECK(testutil::max_entry_diff(inline_pom.op(), 0.5 * Operator2::identity()) == 0.0);

  const PreparationEnsemble unbiased = cli::resolve_ensemble("unbiased-eg");
  CHECK(unbiased.items().size() == 2);
  CHECK(unbiased.items()[0].second.trace().real() == doctest::Approx(0.5));

  const PreparationEnsemble biased = cli::resolve_ensemble("biased-e-plus:0.3");
  CHECK(biased.items()[0].second.trace().real() == doctest::Approx(0.3));
  CHECK(biased.items()[1].second.trace().real() == doctest::Approx(0.7));
  CHECK_THROWS_AS(cli::resolve_ensemble("biased-e-plus:1.5"), std::invalid_argument);
  CHECK_THROWS_AS(cli::resolve_ensemble("nope"), std::invalid_argument);

  const PreparationEnsemble inline_ens = cli::resolve_ensemble(
      R"([{"label":"e","op":{"ee":[0.5,0],"eg":[0,0],"ge":[0,0],"gg":[0,0]}},)"
      R"({"label":"g","op":{"ee":[0,0],"eg":[0,0],"ge":[0,0],"gg":[0.5,0]}}])");
  CHECK(inline_ens.items().size() == 2);
  CHECK_THROWS_AS(cli::resolve_ensemble("[]"), std::invalid_argument);
}

TEST_CASE("fmt12 produces stable numeric text") {
  CHECK(cli::fmt12(0.0) == "0");
  CHECK(cli::fmt12(-0.0) == "0");
  CHECK(cli::fmt12(1.0) == "1");
  CHECK(cli::fmt12(1.0 / 3.0) == "0.333333333333");
  CHECK(cli::fmt12(0.135335283237) == "0.135335283237");
}

TEST_CASE("cli: retrodict at zero interval returns the normalized element") {
  const CliResult res =
      run_cli("retrodict --channel spontaneous --gamma 1 --tau 0 --pom ground");
  REQUIRE(res.exit_code == 0);
  const auto rows = parse_csv(res.stdout_text);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "tau");
  CHECK(cell(rows, 1, 1) == doctest::Approx(0.0));   // rho_ee_re
  CHECK(cell(rows, 1, 7) == doctest::Approx(1.0));   // rho_gg_re
  CHECK(cell(rows, 1, 9) == doctest::Approx(1.0));   // normalization
}

TEST_CASE("cli: retrodict reproduces the half-decay diagonal") {
  const CliResult res = run_cli(
      "retrodict --channel spontaneous --gamma 1 --tau 0.346573590279973 --pom ground");
  REQUIRE(res.exit_code == 0);
  const auto rows = parse_csv(res.stdout_text);
  CHECK(cell(rows, 1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(cell(rows, 1, 7) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("cli: retrodict driven outcome decays to the no-information level") {
  const CliResult res =
      run_cli("retrodict --channel driven --gamma 1 --v 4 --tau 30 --pom excited");
  REQUIRE(res.exit_code == 0);
  const auto rows = parse_csv(res.stdout_text);
  CHECK(cell(rows, 1, 1) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(cell(rows, 1, 7) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("cli: retrodict json output carries the operator schema") {
  const CliResult res = run_cli(
      "retrodict --channel thermal --gamma 1 --nbar 1 --tau 0.5 --pom excited "
      "--format json");
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.stdout_text);
  CHECK(j["channel"] == "thermal");
  CHECK(j["nbar"] == 1.0);
  CHECK(j["rho_retr"].contains("ee"));
  CHECK(j["rho_retr"]["ee"].size() == 2);
  CHECK(j["normalization"].get<double>() > 0.0);
}

TEST_CASE("cli: posterior agrees across routes and reports the deviation") {
  const CliResult res = run_cli(
      "posterior --channel spontaneous --gamma 1 --tau 0.346573590279973 "
      "--pom ground --ensemble unbiased-eg");
  REQUIRE(res.exit_code == 0);
  const auto rows = parse_csv(res.stdout_text);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][0] == "e");
  CHECK(cell(rows, 1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(cell(rows, 2, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(cell(rows, 1, 3) <= 1e-10);
  CHECK(cell(rows, 2, 3) <= 1e-10);
}

TEST_CASE("cli: posterior handles the biased superposition preset") {
  const CliResult res = run_cli(
      "posterior --channel spontaneous --gamma 1 --tau 0 --pom theta:1.0472 "
      "--ensemble biased-e-plus:0.5");
  REQUIRE(res.exit_code == 0);
  const auto rows = parse_csv(res.stdout_text);
  const double theta = 1.0472;
  const double w_e = 0.5 * std::pow(std::sin(theta / 2.0), 2);
  const double w_plus = 0.5 * 0.5 * (1.0 + std::sin(theta));
  CHECK(cell(rows, 1, 1) == doctest::Approx(w_e / (w_e + w_plus)).epsilon(1e-9));
  CHECK(cell(rows, 2, 1) == doctest::Approx(w_plus / (w_e + w_plus)).epsilon(1e-9));
}

TEST_CASE("cli: posterior pins the excited outcome") {
  const CliResult res = run_cli(
      "posterior --channel spontaneous --gamma 1 --tau 2.5 --pom excited "
      "--ensemble unbiased-eg");
  REQUIRE(res.exit_code == 0);
  const auto rows = parse_csv(res.stdout_text);
  CHECK(cell(rows, 1, 1) == doctest::Approx(1.0));
  CHECK(cell(rows, 2, 1) == doctest::Approx(0.0));
}

TEST_CASE("cli: figure output is well-formed deterministic CSV") {
  const CliResult res = run_cli("figure 1b --nbar 1 --gamma 1");
  REQUIRE(res.exit_code == 0);
  const auto rows = parse_csv(res.stdout_text);
  REQUIRE(rows.size() == 201);
  CHECK(rows[0] == std::vector<std::string>{"tau", "rho_ee", "rho_gg"});
  for (const auto& row : rows) CHECK(row.size() == 3);
  CHECK(cell(rows, 200, 0) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(cell(rows, 200, 1) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(res.stdout_text.find("\r") == std::string::npos);

  const CliResult again = run_cli("figure 1b --nbar 1 --gamma 1");
  CHECK(res.stdout_text == again.stdout_text);

  const CliResult fewer = run_cli("figure 2b --v 4 --gamma 1 --points 50");
  const auto rows2 = parse_csv(fewer.stdout_text);
  REQUIRE(rows2.size() == 51);

  const CliResult offdiag = run_cli("figure 4b --v 4 --gamma 1");
  const auto rows4 = parse_csv(offdiag.stdout_text);
  CHECK(rows4[0] == std::vector<std::string>{"tau", "re_rho_eg", "im_rho_eg",
                                             "re_rho_ge", "im_rho_ge"});
  bool nonzero_imag = false;
  for (std::size_t r = 1; r < rows4.size(); ++r) {
    nonzero_imag |= std::abs(cell(rows4, r, 2)) > 1e-3;
  }
  CHECK(nonzero_imag);
}

TEST_CASE("cli: --output writes the same bytes to a file") {
  const std::string path = "cli_test_output.csv";
  const CliResult direct = run_cli("figure 3b --gamma 1 --points 40");
  const CliResult to_file =
      run_cli("figure 3b --gamma 1 --points 40 --output " + path);
  REQUIRE(to_file.exit_code == 0);
  CHECK(to_file.stdout_text.empty());
  std::ifstream file(path, std::ios::binary);
  REQUIRE(file.good());
  std::stringstream content;
  content << file.rdbuf();
  CHECK(content.str() == direct.stdout_text);
  std::remove(path.c_str());
}

TEST_CASE("cli: exit codes follow the contract") {
  CHECK(run_cli("figure 9z").exit_code == 2);                       // unknown figure
  CHECK(run_cli("retrodict --channel warp --gamma 1 --tau 1 --pom ground").exit_code ==
        2);                                                         // bad enum
  CHECK(run_cli("retrodict --channel thermal --gamma 1 --tau 1 --pom ground").exit_code ==
        2);                                                         // missing --nbar
  CHECK(run_cli("retrodict --channel driven --gamma 1 --tau 1 --pom ground").exit_code ==
        2);                                                         // missing --v
  CHECK(run_cli("retrodict --channel spontaneous --gamma 1 --tau 1 --nbar 2 "
                "--pom ground")
            .exit_code == 2);                                       // stray flag
  CHECK(run_cli("retrodict --channel spontaneous --gamma 1 --tau 1").exit_code == 2);
  CHECK(run_cli("retrodict --channel spontaneous --gamma -1 --tau 1 --pom ground")
            .exit_code == 2);                                       // invalid params
  CHECK(run_cli("nonsense").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);

  // Impossible outcome: a null POM element has zero retrodictive weight.
  const std::string null_pom =
      R"('{"ee":[0,0],"eg":[0,0],"ge":[0,0],"gg":[0,0]}')";
  CHECK(run_cli("retrodict --channel spontaneous --gamma 1 --tau 1 --pom " + null_pom)
            .exit_code == 3);

  // Non-physical POM element: internal validation failure.
  const std::string bad_pom = R"('{"ee":[1,0],"eg":[0,0],"ge":[0,0],"gg":[-1,0]}')";
  CHECK(run_cli("retrodict --channel spontaneous --gamma 1 --tau 1 --pom " + bad_pom)
            .exit_code == 1);
}

TEST_CASE("cli: tolerance override relaxes validation for testing") {
  // Slightly non-Hermitian POM element: rejected under the default
  // tolerances, accepted when RETROATOM_TOL_OVERRIDE loosens them.
  const std::string skewed_pom =
      R"('{"ee":[1,0],"eg":[0.001,0],"ge":[0,0],"gg":[0,0]}')";
  const std::string args =
      "retrodict --channel spontaneous --gamma 1 --tau 0.5 --pom " + skewed_pom;
  CHECK(run_cli(args).exit_code == 1);
  CHECK(run_cli(args, "RETROATOM_TOL_OVERRIDE=1e-2").exit_code == 0);
}

TEST_CASE("cli: figure json format mirrors the csv payload") {
  const CliResult res = run_cli("figure 2c --gamma 1 --points 20 --format json");
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.stdout_text);
  CHECK(j["figure"] == "2c");
  CHECK(j["v"] == 4.0);
  CHECK(j["tau"].size() == 20);
  CHECK(j["series"]["im_rho_eg"].size() == 20);
}
