#include "doctest.h"

#include <cmath>
#include <sstream>

#include "cglab/io.hpp"

using namespace cglab;
using nlohmann::json;

namespace {

std::string run_text(Command cmd, const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::ostringstream os;
  run(config_from_pairs(cmd, pairs), os);
  return os.str();
}

}  // namespace

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3, 6.02214076e23, -2.5e-300, 0.0, 1.0 - 1e-16}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("csv emission") {
  const Table empty{{"r", "pdf"}, {}};
  CHECK(emit_csv({}, empty) == "r,pdf\n");
  const std::string with_meta = emit_csv({{"seed", "7"}}, empty);
  CHECK(with_meta == "# seed=7\nr,pdf\n");

  Table t{{"r", "pdf", "cdf"}, {{0.0, 0.0, 0.0}, {0.1, 1.0 / 3, 2e-17}, {1.0, 0.0, 1.0}}};
  const Metadata meta{{"tool", "cglab"}, {"version", kVersion}, {"p", "0.4,0.6"}};
  const std::string text = emit_csv(meta, t);
  const auto [m2, t2] = parse_csv(text);
  CHECK(m2 == meta);
  CHECK(t2.columns == t.columns);
  CHECK(t2.rows == t.rows);
  CHECK(emit_csv(m2, t2) == text);
  CHECK_THROWS_AS(parse_csv("# only=meta\n"), ValidationError);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), ValidationError);
}

TEST_CASE("json emission") {
  FitResult r;
  r.p_fit = 0.2625;
  r.residual_sum = 1.5;
  r.eps_used = 0.04;
  r.n_used = 10000;
  r.seed = {7, 0};
  const json j = to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"eps_used", "n_used", "p_fit", "residual_sum", "seed"});
  CHECK(j["seed"]["seed"] == 7);

  const std::string text = emit_json({{"version", kVersion}}, j);
  const json back = json::parse(text);
  CHECK(back["metadata"]["version"] == kVersion);
  CHECK(back["result"]["p_fit"] == 0.2625);
  CHECK(emit_json({{"version", kVersion}}, back["result"]) == text);
}

TEST_CASE("config text") {
  const auto kv = parse_config_text("# comment\n\nN = 3\n p=0.4,0.35,0.25 \n");
  REQUIRE(kv.size() == 2);
  CHECK(kv[0] == std::pair<std::string, std::string>{"N", "3"});
  CHECK(kv[1].second == "0.4,0.35,0.25");
  CHECK_THROWS_AS(parse_config_text("just words\n"), ValidationError);
}

TEST_CASE("config validation") {
  // later pairs win (flags come after file values)
  const RunConfig c = config_from_pairs(Command::pdf, {{"h", "0.3"}, {"h", "0.5"}});
  CHECK(*c.h == 0.5);
  CHECK(c.prob_vector == std::vector<double>{0.25, 0.75});
  CHECK(c.format == "csv");

  CHECK_THROWS_AS(config_from_pairs(Command::pdf, {{"h", "0"}}), ValidationError);
  CHECK_THROWS_AS(config_from_pairs(Command::pdf, {{"h", "0.2"}, {"p", "0.4,0.6"}}), ValidationError);
  CHECK_THROWS_AS(config_from_pairs(Command::pdf, {{"bogus", "1"}}), ValidationError);
  CHECK_THROWS_AS(config_from_pairs(Command::pdf, {{"N", "3"}, {"p", "0.5,0.5"}}), ValidationError);
  CHECK_THROWS_AS(config_from_pairs(Command::fit, {{"eps", "1.5"}}), ValidationError);
  CHECK_THROWS_AS(config_from_pairs(Command::fit, {{"p-test", "0.7"}}), ValidationError);
  CHECK_THROWS_AS(config_from_pairs(Command::avg_state, {{"h", "0.5"}}), ValidationError);
  CHECK_THROWS_AS(config_from_pairs(Command::avg_state, {{"h", "0.5"}, {"r-ts", "0.2"}, {"ensemble", "separable"}}),
                  ValidationError);
  CHECK_THROWS_AS(config_from_pairs(Command::fit, {{"n", "ten"}}), ValidationError);

  // the origin volume accepts h = 0
  CHECK_NOTHROW(config_from_pairs(Command::volume, {{"h", "0"}, {"eps", "0.1"}}));

  // seed precedence: key, then environment, then 0
  CHECK(config_from_pairs(Command::fit, {}).seed.seed == 0);
  CHECK(config_from_pairs(Command::fit, {}, std::string("42")).seed.seed == 42);
  CHECK(config_from_pairs(Command::fit, {{"seed", "9"}}, std::string("42")).seed.seed == 9);
  CHECK(to_string(parse_command("sweep-eps")) == "sweep-eps");
  CHECK_THROWS_AS(parse_command("plot"), ValidationError);
}

TEST_CASE("pdf command output") {
  const std::string text = run_text(Command::pdf, {{"N", "3"}, {"p", "0.4,0.35,0.25"}, {"grid", "200"}});
  const auto [meta, table] = parse_csv(text);
  CHECK(table.columns == std::vector<std::string>{"r", "pdf", "cdf"});
  REQUIRE(table.rows.size() == 200);
  CHECK(table.rows.front()[0] == 0.0);
  CHECK(table.rows.back()[0] == 1.0);
  const PnLaw law(ProbVector({0.4, 0.35, 0.25}));
  for (const auto& row : table.rows) CHECK(row[1] == doctest::Approx(law.pdf(row[0])).epsilon(1e-15));
  bool has_version = false;
  for (const auto& [k, v] : meta) has_version |= k == "version" && v == kVersion;
  CHECK(has_version);
}

TEST_CASE("commands are reproducible") {
  const std::vector<std::pair<std::string, std::string>> fit{
      {"p-test", "0.26"}, {"eps", "0.04"}, {"n", "10000"}, {"seed", "7"}};
  const std::string a = run_text(Command::fit, fit);
  CHECK(a == run_text(Command::fit, fit));
  const json j = json::parse(a);
  CHECK(std::abs(j["result"]["p_fit"].get<double>() - 0.26) <= 0.01);
  CHECK(j["metadata"]["seed"] == "7");

  const std::vector<std::pair<std::string, std::string>> sample{{"h", "0.4"}, {"n", "300"}, {"seed", "3"}};
  CHECK(run_text(Command::sample, sample) == run_text(Command::sample, sample));
  const std::vector<std::pair<std::string, std::string>> pre{
      {"h", "0.4"}, {"r-ts", "0.5"}, {"n", "50"}, {"seed", "3"}};
  CHECK(run_text(Command::sample, pre) == run_text(Command::sample, pre));
}

TEST_CASE("other commands") {
  const json v = json::parse(run_text(Command::volume, {{"h", "0"}, {"eps", "0.1"}}));
  CHECK(v["result"]["volume"].get<double>() == doctest::Approx(0.028));

  const json a = json::parse(run_text(Command::avg_state, {{"h", "0.5"}, {"r-ts", "0"}}));
  CHECK(a["result"]["c4"].get<double>() == doctest::Approx(-1.0 / 36));

  const json cov = json::parse(run_text(Command::covariance_check, {{"N", "3"}, {"p", "0.5,0.3,0.2"}}));
  CHECK(cov["result"]["within_bound"] == true);

  const auto [m, t] = parse_csv(run_text(Command::sweep_eps, {{"n", "3000"}, {"seed", "1"}}));
  CHECK(t.rows.size() == 3);
}

TEST_CASE("summary line regenerates the run") {
  std::ostringstream os;
  const std::string line = run(config_from_pairs(Command::pdf, {{"h", "0.3"}, {"grid", "5"}}), os);
  CHECK(line.rfind("cglab pdf", 0) == 0);
  CHECK(line.find("--h 0.29999999999999999") != std::string::npos);
  CHECK(line.find("--grid 5") != std::string::npos);
}
