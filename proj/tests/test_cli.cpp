#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FFIRE_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/ffire_test_" + name;
  std::ofstream(path) << content;
  return path;
}

// Drops the leading '#' header line.
std::string body(const std::string& s) { return s.substr(s.find('\n') + 1); }

}  // namespace

TEST_CASE("moments table reproduces mu = 1, 2, 8/3") {
  const auto r = run("moments --n 0..2");
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("# ffire moments config_hash=", 0) == 0);
  CHECK(r.out.find("seed=1") != std::string::npos);
  std::istringstream lines(body(r.out));
  std::string header, l0, l1, l2;
  std::getline(lines, header);
  std::getline(lines, l0);
  std::getline(lines, l1);
  std::getline(lines, l2);
  CHECK(header == "n,mu,mu_exact,var,var_exact,A_n,A_n_minus_loglog_n");
  CHECK(l0.rfind("0,1,1,1,1,", 0) == 0);
  CHECK(l1.rfind("1,2,2,2,2,", 0) == 0);
  CHECK(l2.find(",8/3,") != std::string::npos);
  CHECK(l2.rfind("2,2.666666666666666666666666", 0) == 0);
}

TEST_CASE("same seed gives byte-identical output") {
  const auto a = run("--seed 42 --streams 3 --workers 1 simulate --site 5 --samples 200");
  const auto b = run("--seed 42 --streams 3 --workers 3 simulate --site 5 --samples 200");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("site,replica,gap") != std::string::npos);
  const auto c = run("--seed 43 --streams 3 simulate --site 5 --samples 200");
  CHECK(c.out != a.out);
}

TEST_CASE("config hash tracks the effective configuration") {
  const auto a = run("moments --n 1");
  const auto b = run("moments --n 2");
  const auto first_line = [](const std::string& s) { return s.substr(0, s.find('\n')); };
  CHECK(first_line(a.out) != first_line(b.out));
  const auto cfg = write_temp("moments.json", R"({"subcommand": "moments", "n": "1"})");
  const auto c = run("--config " + cfg);
  REQUIRE(c.status == 0);
  CHECK(first_line(c.out) == first_line(a.out));
}

TEST_CASE("invalid configurations exit nonzero with a JSON error") {
  const auto unknown = write_temp("unknown.json", R"({"subcommand": "moments", "bogus": 3})");
  auto r = run("--config " + unknown);
  CHECK(r.status != 0);
  auto err = nlohmann::json::parse(r.out);
  CHECK(err["error"]["type"] == "invalid_config");
  CHECK(err["error"]["message"].get<std::string>().find("bogus") != std::string::npos);

  r = run("simulate --reference nonsense");
  CHECK(r.status != 0);
  CHECK(nlohmann::json::parse(r.out).contains("error"));

  const auto broken = write_temp("broken.json", "{ not json");
  r = run("--config " + broken);
  CHECK(r.status != 0);
  CHECK(nlohmann::json::parse(r.out)["error"]["type"] == "invalid_config");

  r = run("--precision-bits 10 moments --n 50");
  CHECK(r.status != 0);
  CHECK(nlohmann::json::parse(r.out)["error"]["type"] == "budget_exceeded");
}

TEST_CASE("simulate JSON summary with a reference law") {
  const auto r = run("--format json --seed 5 simulate --site 1 --samples 50000 --reference tau1");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["header"]["seed"] == 5);
  CHECK(j["summary"]["count"] == 50000);
  CHECK(j["summary"]["mean"].get<double>() == doctest::Approx(2.0).epsilon(0.03));
  CHECK(j["ks"]["statistic"].get<double>() < 0.01);
}

TEST_CASE("simulate on a graph") {
  const auto r = run("--format json simulate --graph path --length 3 --samples 20000");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["censored"] == 0);
  CHECK(j["summary"]["mean"].get<double>() == doctest::Approx(8.0 / 3.0).epsilon(0.03));
}

TEST_CASE("dickman and gd1 subcommands") {
  auto r = run("dickman --eval 2");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("x,rho,f,F,gd1_cdf") != std::string::npos);
  CHECK(r.out.find("\n2,0.3068528194400") != std::string::npos);

  r = run("dickman --table 3 0.5");
  REQUIRE(r.status == 0);
  int rows = 0;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) rows += line.empty() || line[0] == '#' ? 0 : 1;
  CHECK(rows == 1 + 7);

  r = run("--format json --seed 9 gd1 --sample 20000");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["summary"]["mean"].get<double>() == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("tailbound subcommand") {
  auto r = run("tailbound --p 0.8 --theta 0.6 --x 10:20:5");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("x,bound,empirical_survival,empirical_se") != std::string::npos);
  CHECK(r.out.find("lambda=") != std::string::npos);

  r = run("--format json tailbound --p 0.75 --theta-from-sim --grid 16 --replicas 300 --x 0:10:1");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["curve"].size() == 11);
  CHECK(j["theta_estimate"]["replicas"] == 300);
  for (const auto& row : j["curve"]) CHECK(row["empirical_survival"].get<double>() <= row["bound"].get<double>());

  r = run("tailbound --p 0.8");
  CHECK(r.status != 0);
}

TEST_CASE("verify --quick passes") {
  const auto r = run("verify --quick");
  CHECK(r.status == 0);
  CHECK(r.out.find("ALL PASSED") != std::string::npos);
  CHECK(r.out.find("[FAIL]") == std::string::npos);
}
