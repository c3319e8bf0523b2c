#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "keli/lambda_series.hpp"
#include "keli/nodes.hpp"

using namespace keli;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(KELI_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  CliResult r;
  while (fgets(buf, sizeof buf, pipe)) r.output += buf;
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// value of the first CSV row whose first field equals `name`
std::string row_value(const std::string& out, const std::string& name) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(name + ",", 0) == 0) return line.substr(name.size() + 1);
  return "";
}

const std::string& nodes14() {
  static std::string path = [] {
    std::string p = "/tmp/keli_cli_nodes14.knt";
    auto r = run_cli("nodes --count 14 --digits 130 --out " + p +
                     " --threads 2");
    REQUIRE(r.exit_code == 0);
    REQUIRE(contains(r.output, "# command: keli nodes"));
    return p;
  }();
  return path;
}

std::string fixture_path() {
  return std::string(KELI_SOURCE_DIR) + "/data/paper_zeros.csv";
}

std::string gammas_path() {
  return std::string(KELI_SOURCE_DIR) + "/data/gamma.txt";
}

}  // namespace

TEST_CASE("cli: node cache report matches the file") {
  const std::string& p = nodes14();
  auto table = load_node_table(p);
  CHECK(table.count() == 14);
  CHECK(table.digits == 140);

  auto r = run_cli("nodes --count 14 --digits 130 --out " + p);
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.output, "sha256," + sha256_file(p)));
  CHECK(contains(r.output, "stored_digits,140"));
}

TEST_CASE("cli: half-point evaluation prints the published digits") {
  auto r = run_cli("eval --s 0.5 --nodes " + nodes14() + " --digits 15");
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.output, "# config: route = poly"));
  CHECK(contains(r.output, "# config: achieved_digits = 15"));
  CHECK(row_value(r.output, "lambda") == "0.00577450721979695");

  auto series = run_cli("eval --s 0.5 --nodes " + nodes14() +
                        " --digits 15 --route series");
  REQUIRE(series.exit_code == 0);
  CHECK(row_value(series.output, "lambda") == "0.00577450721979695");
}

TEST_CASE("cli: complex evaluation round-trips against the library") {
  auto r = run_cli("eval --s 1+1i --nodes " + nodes14() + " --digits 13");
  REQUIRE(r.exit_code == 0);
  std::string exact = row_value(r.output, "lambda_exact");
  REQUIRE(!exact.empty());
  BigComplex cli_value = from_string_complex(exact, bits_for_digits(60));

  auto table = load_node_table(nodes14());
  LambdaEvaluator ev(solve_alphas(table, 14), 28, 13);
  BigComplex lib_value =
      ev.lambda_at(from_string_complex("1+1i", bits_for_digits(38)));
  CHECK(agreement_digits(cli_value.re, lib_value.re) >= 12);
  CHECK(agreement_digits(cli_value.im, lib_value.im) >= 12);
  CHECK(contains(row_value(r.output, "lambda"), " + "));
  CHECK(contains(row_value(r.output, "lambda"), "i"));
}

TEST_CASE("cli: alpha output is byte-identical across reruns") {
  std::string cmd = "alphas --nodes " + nodes14() + " --k-max 14";
  auto a = run_cli(cmd);
  auto b = run_cli(cmd);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(contains(a.output, "# command: keli alphas --nodes"));
  CHECK(contains(a.output, "# config: k_max = 14"));
  CHECK(contains(a.output, "k,alpha,significance"));

  int data_rows = 0;
  std::istringstream in(a.output);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] >= '1' && line[0] <= '9') ++data_rows;
  CHECK(data_rows == 14);
}

TEST_CASE("cli: json mirrors the csv report") {
  auto r = run_cli("nu --nodes " + nodes14() + " --q-max 4 --format json");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j["command"].get<std::string>().rfind("keli nu", 0) == 0);
  CHECK(j["config"]["q_max"] == "4");
  CHECK(j["columns"] == nlohmann::json({"m", "nu"}));
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0][0] == "2");

  auto csv = run_cli("nu --nodes " + nodes14() + " --q-max 4");
  CHECK(contains(csv.output, j["rows"][0][1].get<std::string>()));
}

TEST_CASE("cli: integer coefficients agree with the closed form") {
  auto r = run_cli("lambda --nodes " + nodes14() +
                   " --n-max 2 --target-digits 15");
  REQUIRE(r.exit_code == 0);
  std::string lam1 = row_value(r.output, "1");
  REQUIRE(!lam1.empty());
  BigReal v = from_string(lam1.substr(0, lam1.find(',')), bits_for_digits(40));
  BigReal closed = lambda1_closed(make_context(40));
  CHECK(agreement_digits(v, closed) >= 14);
}

TEST_CASE("cli: usage errors exit 1") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("frobnicate --x 1").exit_code == 1);
  CHECK(run_cli("alphas").exit_code == 1);  // missing required --nodes
  CHECK(run_cli("eval --s 0.5 --nodes x --route bogus").exit_code == 1);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("cli: domain failures exit 2 with a machine-readable line") {
  auto r = run_cli("zeros --nodes " + nodes14() +
                   " --k-from 1 --k-to 1 --out /tmp/keli_cli_z.csv");
  CHECK(r.exit_code == 2);
  CHECK(contains(r.output, "error,domain,"));

  auto bad_delta = run_cli("rhsim --gammas " + gammas_path() +
                           " --delta 0.75 --deviate-index 1");
  CHECK(bad_delta.exit_code == 2);
  CHECK(contains(bad_delta.output, "error,domain,"));

  auto bad_file = run_cli("alphas --nodes /tmp/keli_no_such_cache.knt");
  CHECK(bad_file.exit_code == 2);
  CHECK(contains(bad_file.output, "error,"));
}

TEST_CASE("cli: verify passes on a faithful table and fails on a forgery") {
  // clone the first two fixture rows verbatim
  std::ifstream fx(fixture_path());
  std::string header, row1, row2;
  std::getline(fx, header);
  std::getline(fx, row1);
  std::getline(fx, row2);

  std::string good_path = "/tmp/keli_cli_verify_good.csv";
  {
    std::ofstream out(good_path);
    out << header << "\n" << row1 << "\n" << row2 << "\n";
  }
  auto good = run_cli("verify --fixture " + fixture_path() +
                      " --k 1..2 --computed " + good_path);
  REQUIRE(good.exit_code == 0);
  CHECK(contains(good.output, "# config: pass = true"));
  CHECK(contains(good.output, "# config: compared = 2"));

  // same rows with one digit of sigma_1's re nudged
  std::string bad_path = "/tmp/keli_cli_verify_bad.csv";
  {
    std::string forged = row1;
    auto comma = forged.find(',');
    forged[comma + 5] = forged[comma + 5] == '5' ? '6' : '5';
    std::ofstream out(bad_path);
    out << header << "\n" << forged << "\n" << row2 << "\n";
  }
  auto bad = run_cli("verify --fixture " + fixture_path() +
                     " --k 1..2 --computed " + bad_path);
  CHECK(bad.exit_code == 2);
  CHECK(contains(bad.output, "# config: pass = false"));
  CHECK(contains(bad.output, "error,verify,"));

  std::remove(good_path.c_str());
  std::remove(bad_path.c_str());
}

TEST_CASE("cli: zero-product tracks the half-point value") {
  auto r = run_cli("product --fixture " + fixture_path() + " --s 0.5 --nodes " +
                   nodes14() + " --digits 10");
  REQUIRE(r.exit_code == 0);
  // leading digits of lambda(1/2); the finite product carries ~8 digits
  CHECK(row_value(r.output, "product").rfind("0.0057745073", 0) == 0);
  CHECK(contains(row_value(r.output, "constant"), "2.3098802283424104"));
}

TEST_CASE("cli: growth-law fit and plot table") {
  std::string plot_path = "/tmp/keli_cli_plot.csv";
  auto r = run_cli("fit --fixture " + fixture_path() +
                   " --k-min 100 --plot-out " + plot_path);
  REQUIRE(r.exit_code == 0);
  CHECK(row_value(r.output, "slope").rfind("16.008", 0) == 0);

  std::ifstream plot(plot_path);
  REQUIRE(plot.good());
  std::string line;
  std::getline(plot, line);
  CHECK(line.rfind("# command: keli fit", 0) == 0);
  while (std::getline(plot, line) && line.rfind("#", 0) == 0) {
  }
  CHECK(line == "k,re,rescaled_im");
  long rows = 0;
  while (std::getline(plot, line)) ++rows;
  CHECK(rows == 3520);
  std::remove(plot_path.c_str());
}

TEST_CASE("cli: difference table reports order and norm") {
  auto r = run_cli("fdiff --fixture " + fixture_path() +
                   " --order 3 --stride 4 --normalize pow2");
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.output, "# config: order = 3"));
  CHECK(contains(r.output, "# config: stride = 4"));
  CHECK(contains(r.output, "# config: norm = "));
  CHECK(contains(r.output, "i,re,im"));

  // perturbed run is reproducible for a fixed seed
  std::string cmd = "fdiff --fixture " + fixture_path() +
                    " --order 3 --stride 4 --perturb 1e-6 --seed 7";
  auto a = run_cli(cmd);
  auto b = run_cli(cmd);
  CHECK(a.output == b.output);
  CHECK(a.output != r.output);
}

TEST_CASE("cli: deviation scan matches the measured crossing") {
  auto r = run_cli("rhsim --gammas " + gammas_path() +
                   " --delta 0.25 --deviate-index 1 --n-max 5000 --threads 2");
  REQUIRE(r.exit_code == 0);
  CHECK(row_value(r.output, "first_negative") == "3729");

  auto clean = run_cli("rhsim --gammas " + gammas_path() +
                       " --delta 0 --n-max 2000");
  REQUIRE(clean.exit_code == 0);
  CHECK(row_value(clean.output, "first_negative") == "none");
}
