// Command-line surface over the pipeline: staged subcommands with file
// handoffs, explicit precision controls, and machine-readable CSV/JSON
// output. Every output carries a header that reconstructs the command line,
// so a result file documents how to regenerate itself.
//
// Exit codes: 0 success, 1 usage error, 2 validation/verification/precision
// failure (with a single machine-readable line on stderr).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "keli/analysis.hpp"
#include "keli/lambda_series.hpp"
#include "keli/nodes.hpp"
#include "keli/special.hpp"
#include "keli/zeros.hpp"

namespace {

using keli::BigComplex;
using keli::BigReal;

// ---------------------------------------------------------------------------
// report plumbing

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> warnings;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(const std::string& key, const std::string& value) {
    config.emplace_back(key, value);
  }
  void add(const std::string& key, long value) {
    config.emplace_back(key, std::to_string(value));
  }
};

std::string shell_quote(const std::string& arg) {
  const std::string safe =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
      "0123456789._+=/:,@^-";
  if (!arg.empty() && arg.find_first_not_of(safe) == std::string::npos)
    return arg;
  std::string out = "'";
  for (char c : arg) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  out += "'";
  return out;
}

// Reconstructed invocation. argv[0] is normalized to the tool name so the
// echo does not depend on where the binary happens to live.
std::string command_echo(int argc, char** argv) {
  std::string out = "keli";
  for (int i = 1; i < argc; ++i) out += " " + shell_quote(argv[i]);
  return out;
}

void write_csv(const Report& r, std::ostream& out) {
  out << "# command: " << r.command << "\n";
  for (const auto& [k, v] : r.config) out << "# config: " << k << " = " << v << "\n";
  for (const auto& w : r.warnings) out << "# warning: " << w << "\n";
  for (std::size_t i = 0; i < r.columns.size(); ++i)
    out << (i ? "," : "") << r.columns[i];
  out << "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

void write_json(const Report& r, std::ostream& out) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = std::move(cfg);
  j["warnings"] = r.warnings;
  j["columns"] = r.columns;
  j["rows"] = r.rows;
  out << j.dump(2) << "\n";
}

void emit(const Report& r, const std::string& format,
          const std::string& out_path) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw keli::Error("cannot write output file: " + out_path);
    out = &file;
  }
  if (format == "json")
    write_json(r, *out);
  else
    write_csv(r, *out);
}

// ---------------------------------------------------------------------------
// small helpers

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("KELI_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

// Positional rendering ("0.00577...") for moderate exponents; values far
// from unity stay in scientific notation.
std::string plain_decimal(const BigReal& v, int digits) {
  std::string s = keli::to_string_digits(v, digits);
  if (s == "0") return s;
  auto epos = s.find('e');
  if (epos == std::string::npos) return s;
  std::string mant = s.substr(0, epos);
  int e10 = std::stoi(s.substr(epos + 1));
  bool negative = !mant.empty() && mant[0] == '-';
  if (negative) mant.erase(0, 1);
  auto dot = mant.find('.');
  std::string ds = (dot == std::string::npos)
                       ? mant
                       : mant.substr(0, dot) + mant.substr(dot + 1);
  if (e10 <= -7 || e10 >= 21) return s;
  std::string out;
  if (e10 >= 0) {
    std::size_t point = static_cast<std::size_t>(e10) + 1;
    if (point >= ds.size())
      out = ds + std::string(point - ds.size(), '0');
    else
      out = ds.substr(0, point) + "." + ds.substr(point);
  } else {
    out = "0." + std::string(static_cast<std::size_t>(-e10) - 1, '0') + ds;
  }
  return negative ? "-" + out : out;
}

std::string plain_complex(const BigComplex& v, int digits) {
  if (v.im.is_zero()) return plain_decimal(v.re, digits);
  std::string im = plain_decimal(keli::abs(v.im), digits);
  return plain_decimal(v.re, digits) + (v.im.sign() < 0 ? " - " : " + ") +
         im + "i";
}

const char* error_kind(const keli::Error& e) {
  if (dynamic_cast<const keli::UnwrapError*>(&e)) return "unwrap";
  if (dynamic_cast<const keli::AliasingError*>(&e)) return "aliasing";
  if (dynamic_cast<const keli::BranchError*>(&e)) return "branch";
  if (dynamic_cast<const keli::VersionError*>(&e)) return "version";
  if (dynamic_cast<const keli::TruncationError*>(&e)) return "truncation";
  if (dynamic_cast<const keli::ParseError*>(&e)) return "parse";
  if (dynamic_cast<const keli::FormatError*>(&e)) return "format";
  if (dynamic_cast<const keli::InsufficientDataError*>(&e))
    return "insufficient-data";
  if (dynamic_cast<const keli::DomainError*>(&e)) return "domain";
  if (dynamic_cast<const keli::PrecisionError*>(&e)) return "precision";
  if (dynamic_cast<const keli::ConvergenceError*>(&e)) return "convergence";
  return "error";
}

std::pair<long, long> parse_range(const std::string& text) {
  auto sep = text.find("..");
  try {
    if (sep == std::string::npos) {
      long k = std::stol(text);
      return {k, k};
    }
    return {std::stol(text.substr(0, sep)), std::stol(text.substr(sep + 2))};
  } catch (const std::exception&) {
    throw keli::DomainError("bad index range: " + text);
  }
}

keli::AlphaSeries alphas_from_file(const std::string& nodes_path, int k_max) {
  keli::NodeValueTable table = keli::load_node_table(nodes_path);
  if (k_max <= 0) k_max = table.count();
  return keli::solve_alphas(table, k_max);
}

// ---------------------------------------------------------------------------
// per-subcommand option bags

struct CommonOpts {
  std::string format = "csv";
  std::string out;
  int threads = 0;
};

struct NodesOpts : CommonOpts {
  int count = 60;
  int digits = 600;
};

struct AlphasOpts : CommonOpts {
  std::string nodes;
  int k_max = 0;
};

struct NuOpts : AlphasOpts {
  int q_max = 0;
};

struct LambdaOpts : NuOpts {
  long n_max = 8;
  int target = 20;
};

struct EvalOpts : NuOpts {
  std::string s;
  std::string route = "poly";
  int digits = 19;
};

struct ZerosOpts : NuOpts {
  long k_from = 1;
  long k_to = 1;
  std::string tol = "1e-30";
  int target = 50;
};

struct VerifyOpts : NuOpts {
  std::string fixture;
  std::string computed;
  std::string range = "1..2";
  int count = 0;
  int digits = 600;
  std::string tol = "1e-30";
  int target = 50;
};

struct ProductOpts : NuOpts {
  std::string fixture;
  std::string s = "0.5";
  long n_factors = -1;
  std::string constant;
  int digits = 20;
};

struct FitOpts : CommonOpts {
  std::string fixture;
  long k_min = 100;
  std::string plot_out;
};

struct FdiffOpts : CommonOpts {
  std::string fixture;
  int order = 2;
  int stride = 1;
  std::string normalize = "pow2";
  std::string perturb;
  unsigned long seed = 1;
};

struct RhsimOpts : CommonOpts {
  std::string gammas;
  double delta = 0.0;
  long deviate_index = -1;
  long n_max = 5000;
};

// ---------------------------------------------------------------------------
// handlers (return exit code)

int run_nodes(const NodesOpts& o, Report& r) {
  if (o.out.empty()) throw keli::DomainError("nodes requires --out");
  auto table = keli::build_node_table(o.count, keli::make_context(o.digits),
                                      resolve_threads(o.threads));
  keli::save_node_table(table, o.out);
  r.add("count", o.count);
  r.add("digits", o.digits);
  r.columns = {"name", "value"};
  r.rows.push_back({"file", o.out});
  r.rows.push_back({"sha256", keli::sha256_file(o.out)});
  r.rows.push_back({"stored_digits", std::to_string(table.digits)});
  // the node cache has its own fixed versioned header, so the config echo
  // for this stage lives in the stdout report, not in the cache file
  emit(r, o.format, "");
  return 0;
}

int run_alphas(const AlphasOpts& o, Report& r) {
  auto a = alphas_from_file(o.nodes, o.k_max);
  r.add("nodes", o.nodes);
  r.add("k_max", a.k_max());
  r.add("source_digits", a.source_digits);
  r.columns = {"k", "alpha", "significance"};
  for (int k = 1; k <= a.k_max(); ++k)
    r.rows.push_back({std::to_string(k), keli::to_string(a.a[k - 1]),
                      std::to_string(a.significance[k - 1])});
  emit(r, o.format, o.out);
  return 0;
}

int run_nu(const NuOpts& o, Report& r) {
  auto a = alphas_from_file(o.nodes, o.k_max);
  int q_max = o.q_max > 0 ? o.q_max : 2 * a.k_max();
  auto nu = keli::nu_coeffs(a, q_max);
  r.add("nodes", o.nodes);
  r.add("k_max", a.k_max());
  r.add("q_max", nu.q_max());
  r.warnings = nu.warnings;
  r.columns = {"m", "nu"};
  for (std::size_t i = 0; i < nu.nu.size(); ++i)
    r.rows.push_back(
        {std::to_string(2 * (i + 1)), keli::to_string(nu.nu[i])});
  emit(r, o.format, o.out);
  return 0;
}

int run_lambda(const LambdaOpts& o, Report& r) {
  auto a = alphas_from_file(o.nodes, o.k_max);
  int q_max = o.q_max > 0 ? o.q_max : 2 * a.k_max();
  keli::LambdaEvaluator ev(a, q_max, o.target);
  r.add("nodes", o.nodes);
  r.add("k_max", a.k_max());
  r.add("q_max", q_max);
  r.add("target_digits", o.target);
  r.columns = {"n", "lambda", "lambda_decimal"};
  for (long n = 1; n <= o.n_max; ++n) {
    BigReal v = ev.lambda_int(n);
    r.rows.push_back(
        {std::to_string(n), keli::to_string(v), plain_decimal(v, o.target)});
  }
  emit(r, o.format, o.out);
  return 0;
}

int run_eval(const EvalOpts& o, Report& r) {
  if (o.digits < 10)
    throw keli::DomainError("display significance below 10 is not supported");
  auto a = alphas_from_file(o.nodes, o.k_max);
  int q_max = o.q_max > 0 ? o.q_max : 2 * a.k_max();
  BigComplex s = keli::from_string_complex(
      o.s, keli::bits_for_digits(o.digits + 25));

  // honor "to available significance": back off the digit target until the
  // truncation rule can fire, rather than refusing outright
  std::optional<BigComplex> value;
  int achieved = 0;
  std::string exhausted;
  for (int t = o.digits; t >= 10; t -= 5) {
    try {
      keli::LambdaEvaluator ev(a, q_max, t);
      value = (o.route == "series") ? ev.lambda_series_at(s)
                                    : ev.lambda_at(s);
      achieved = t;
      break;
    } catch (const keli::ConvergenceError& e) {
      exhausted = e.what();
    }
  }
  if (!value) throw keli::ConvergenceError(exhausted);

  r.add("nodes", o.nodes);
  r.add("k_max", a.k_max());
  r.add("q_max", q_max);
  r.add("route", o.route);
  r.add("requested_digits", o.digits);
  r.add("achieved_digits", achieved);
  if (achieved < o.digits)
    r.warnings.push_back("digit target lowered to available significance");
  r.columns = {"name", "value"};
  r.rows.push_back({"s", o.s});
  r.rows.push_back({"lambda", plain_complex(*value, achieved)});
  r.rows.push_back({"lambda_exact", keli::to_string(*value)});
  emit(r, o.format, o.out);
  return 0;
}

int run_zeros(const ZerosOpts& o, Report& r) {
  if (o.out.empty()) throw keli::DomainError("zeros requires --out");
  auto a = alphas_from_file(o.nodes, o.k_max);
  int q_max = o.q_max > 0 ? o.q_max : 2 * a.k_max();
  keli::LambdaEvaluator ev(a, q_max, o.target);
  keli::LambdaEvaluator cert(a, q_max, o.target + 30);
  BigReal tol = keli::from_string(o.tol, 128);
  auto table = keli::compute_zeros(o.k_from, o.k_to, ev, cert, tol,
                                   resolve_threads(o.threads));
  keli::save_zero_table(table, o.out);
  r.add("nodes", o.nodes);
  r.add("k_max", a.k_max());
  r.add("target_digits", o.target);
  r.add("tol", o.tol);
  r.add("file", o.out);
  r.columns = {"k", "re", "im", "residual", "newton_steps"};
  for (const auto& e : table.entries)
    r.rows.push_back({std::to_string(e.k), keli::to_string(e.re),
                      keli::to_string(e.im), keli::to_string(e.residual),
                      std::to_string(e.newton_steps)});
  emit(r, o.format, "");
  return 0;
}

int run_verify(const VerifyOpts& o, Report& r) {
  auto fixture = keli::load_zero_table(o.fixture);
  auto [k_from, k_to] = parse_range(o.range);

  keli::ZeroTable computed;
  if (!o.computed.empty()) {
    computed = keli::load_zero_table(o.computed);
  } else {
    keli::NodeValueTable table;
    if (!o.nodes.empty()) {
      table = keli::load_node_table(o.nodes);
    } else {
      // rule of thumb from the significance-loss model: about 7 digits of
      // node precision buy one usable coefficient
      int count = o.count > 0 ? o.count : o.digits / 7;
      table = keli::build_node_table(count, keli::make_context(o.digits),
                                     resolve_threads(o.threads));
    }
    int k_max = o.k_max > 0 ? o.k_max : table.count();
    auto a = keli::solve_alphas(table, k_max);
    int q_max = o.q_max > 0 ? o.q_max : 2 * a.k_max();
    keli::LambdaEvaluator ev(a, q_max, o.target);
    keli::LambdaEvaluator cert(a, q_max, o.target + 30);
    computed = keli::compute_zeros(k_from, k_to, ev, cert,
                                   keli::from_string(o.tol, 128),
                                   resolve_threads(o.threads));
  }

  auto report = keli::verify_against_fixture(computed, fixture);
  r.add("fixture", o.fixture);
  r.add("k", o.range);
  r.add("compared", static_cast<long>(report.compared));
  {
    std::ostringstream m;
    m << report.max_rel;
    r.add("max_rel", m.str());
  }
  r.add("pass", report.pass ? "true" : "false");
  r.columns = {"k", "rel_re", "rel_im", "index_matched"};
  for (const auto& row : report.rows) {
    std::ostringstream a, b;
    a << row.rel_re;
    b << row.rel_im;
    r.rows.push_back({std::to_string(row.k), a.str(), b.str(),
                      row.index_matched ? "true" : "false"});
  }
  emit(r, o.format, o.out);
  if (!report.pass) {
    std::cerr << "error,verify,fixture comparison failed (compared="
              << report.compared << " max_rel=" << report.max_rel << ")\n";
    return 2;
  }
  return 0;
}

int run_product(const ProductOpts& o, Report& r) {
  auto fixture = keli::load_zero_table(o.fixture);
  BigReal constant(64);
  std::string constant_origin;
  if (!o.constant.empty()) {
    constant = keli::from_string(o.constant, keli::bits_for_digits(80));
    constant_origin = "explicit";
  } else if (!o.nodes.empty()) {
    auto a = alphas_from_file(o.nodes, o.k_max);
    constant = keli::nu_coeffs(a, 2).nu[0];
    constant_origin = "nu_2 from " + o.nodes;
  } else {
    throw keli::DomainError("product needs --constant or --nodes");
  }
  long n = o.n_factors >= 0 ? o.n_factors
                            : static_cast<long>(fixture.count());
  BigComplex s = keli::from_string_complex(o.s, keli::bits_for_digits(60));
  BigComplex value = keli::product_partial(s, fixture, n, constant);
  r.add("fixture", o.fixture);
  r.add("n_factors", n);
  r.add("constant_origin", constant_origin);
  r.columns = {"name", "value"};
  r.rows.push_back({"s", o.s});
  r.rows.push_back({"constant", keli::to_string(constant)});
  r.rows.push_back({"product", plain_complex(value, o.digits)});
  r.rows.push_back({"product_exact", keli::to_string(value)});
  emit(r, o.format, o.out);
  return 0;
}

int run_fit(const FitOpts& o, Report& r) {
  auto fixture = keli::load_zero_table(o.fixture);
  BigReal slope = keli::fit_log_factor(fixture, o.k_min);
  r.add("fixture", o.fixture);
  r.add("k_min", o.k_min);
  r.columns = {"name", "value"};
  r.rows.push_back({"slope", plain_decimal(slope, 12)});
  r.rows.push_back({"slope_exact", keli::to_string(slope)});
  emit(r, o.format, o.out);

  if (!o.plot_out.empty()) {
    Report plot;
    plot.command = r.command;
    plot.add("fixture", o.fixture);
    plot.columns = {"k", "re", "rescaled_im"};
    auto rows = keli::rescale_for_plot(fixture);
    for (std::size_t i = 0; i < rows.size(); ++i)
      plot.rows.push_back({std::to_string(fixture.entries[i].k),
                           keli::to_string(rows[i].first),
                           keli::to_string(rows[i].second)});
    emit(plot, o.format, o.plot_out);
  }
  return 0;
}

int run_fdiff(const FdiffOpts& o, Report& r) {
  auto fixture = keli::load_zero_table(o.fixture);
  auto seq = keli::table_to_sequence(fixture);
  if (o.stride > 1) seq = keli::stride_sequence(seq, o.stride);
  if (!o.perturb.empty())
    seq = keli::perturb_zeros(seq, keli::from_string(o.perturb, 64), o.seed);
  auto norm_mode = o.normalize == "none" ? keli::DiffNormalization::none
                                         : keli::DiffNormalization::pow2;
  auto d = keli::finite_difference(seq, o.order, norm_mode);
  r.add("fixture", o.fixture);
  r.add("order", o.order);
  r.add("stride", o.stride);
  r.add("normalize", o.normalize);
  if (!o.perturb.empty()) {
    r.add("perturb", o.perturb);
    r.add("seed", static_cast<long>(o.seed));
  }
  r.add("norm", keli::to_string(keli::diff_norm(d)));
  r.columns = {"i", "re", "im"};
  for (std::size_t i = 0; i < d.values.size(); ++i)
    r.rows.push_back({std::to_string(i), keli::to_string(d.values[i].re),
                      keli::to_string(d.values[i].im)});
  emit(r, o.format, o.out);
  return 0;
}

int run_rhsim(const RhsimOpts& o, Report& r) {
  auto gs = keli::load_zeta_zeros(o.gammas);
  auto hit = keli::rh_first_negative(gs, o.deviate_index, o.delta, o.n_max,
                                     resolve_threads(o.threads));
  r.add("gammas", o.gammas);
  r.add("ordinates", static_cast<long>(gs.size()));
  {
    std::ostringstream d;
    d << o.delta;
    r.add("delta", d.str());
  }
  r.add("deviate_index", o.deviate_index);
  r.add("n_max", o.n_max);
  r.columns = {"name", "value"};
  r.rows.push_back(
      {"first_negative", hit ? std::to_string(*hit) : "none"});
  emit(r, o.format, o.out);
  return 0;
}

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", o.out, "write the report to a file");
  sub->add_option("--threads", o.threads,
                  "worker cap (default: KELI_THREADS or 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"high-precision toolkit for the completed-zeta coefficient "
               "pipeline: nodes, interpolation, entire-function evaluation, "
               "zeros, and diagnostics"};
  app.name("keli");
  app.require_subcommand(1);

  NodesOpts nodes_o;
  auto* nodes = app.add_subcommand("nodes", "build and cache node values");
  nodes->add_option("--count", nodes_o.count, "number of nodes j/(j+1)");
  nodes->add_option("--digits", nodes_o.digits, "working digits");
  add_common(nodes, nodes_o);

  AlphasOpts alphas_o;
  auto* alphas =
      app.add_subcommand("alphas", "interpolation coefficients from nodes");
  alphas->add_option("--nodes", alphas_o.nodes, "node cache file")
      ->required();
  alphas->add_option("--k-max", alphas_o.k_max, "coefficient count");
  add_common(alphas, alphas_o);

  NuOpts nu_o;
  auto* nu = app.add_subcommand("nu", "even Taylor coefficients");
  nu->add_option("--nodes", nu_o.nodes)->required();
  nu->add_option("--k-max", nu_o.k_max);
  nu->add_option("--q-max", nu_o.q_max, "highest even power");
  add_common(nu, nu_o);

  LambdaOpts lambda_o;
  auto* lambda = app.add_subcommand("lambda", "integer-index coefficients");
  lambda->add_option("--nodes", lambda_o.nodes)->required();
  lambda->add_option("--k-max", lambda_o.k_max);
  lambda->add_option("--q-max", lambda_o.q_max);
  lambda->add_option("--n-max", lambda_o.n_max, "compute lambda_1..n");
  lambda->add_option("--target-digits", lambda_o.target);
  add_common(lambda, lambda_o);

  EvalOpts eval_o;
  auto* eval = app.add_subcommand("eval", "evaluate the entire function");
  eval->add_option("--s", eval_o.s, "point, e.g. 0.5 or 1+1i")->required();
  eval->add_option("--nodes", eval_o.nodes)->required();
  eval->add_option("--k-max", eval_o.k_max);
  eval->add_option("--q-max", eval_o.q_max);
  eval->add_option("--route", eval_o.route, "poly or series")
      ->check(CLI::IsMember({"poly", "series"}));
  eval->add_option("--digits", eval_o.digits, "display significance");
  add_common(eval, eval_o);

  ZerosOpts zeros_o;
  auto* zeros = app.add_subcommand("zeros", "locate complex zeros");
  zeros->add_option("--nodes", zeros_o.nodes)->required();
  zeros->add_option("--k-max", zeros_o.k_max);
  zeros->add_option("--q-max", zeros_o.q_max);
  zeros->add_option("--k-from", zeros_o.k_from);
  zeros->add_option("--k-to", zeros_o.k_to);
  zeros->add_option("--tol", zeros_o.tol, "residual gate");
  zeros->add_option("--target-digits", zeros_o.target);
  add_common(zeros, zeros_o);

  VerifyOpts verify_o;
  auto* verify =
      app.add_subcommand("verify", "recompute zeros and compare to a fixture");
  verify->add_option("--fixture", verify_o.fixture)->required();
  verify->add_option("--k", verify_o.range, "index range, e.g. 1..2");
  verify->add_option("--computed", verify_o.computed,
                     "compare an existing zero table instead of recomputing");
  verify->add_option("--nodes", verify_o.nodes);
  verify->add_option("--count", verify_o.count);
  verify->add_option("--digits", verify_o.digits);
  verify->add_option("--k-max", verify_o.k_max);
  verify->add_option("--q-max", verify_o.q_max);
  verify->add_option("--tol", verify_o.tol);
  verify->add_option("--target-digits", verify_o.target);
  add_common(verify, verify_o);

  ProductOpts product_o;
  auto* product =
      app.add_subcommand("product", "partial zero product of the function");
  product->add_option("--fixture", product_o.fixture)->required();
  product->add_option("--s", product_o.s);
  product->add_option("--n-factors", product_o.n_factors);
  product->add_option("--constant", product_o.constant,
                      "quadratic coefficient (decimal)");
  product->add_option("--nodes", product_o.nodes,
                      "derive the constant from a node cache");
  product->add_option("--k-max", product_o.k_max);
  product->add_option("--digits", product_o.digits);
  add_common(product, product_o);

  FitOpts fit_o;
  auto* fit = app.add_subcommand("fit", "log-growth fit of zero heights");
  fit->add_option("--fixture", fit_o.fixture)->required();
  fit->add_option("--k-min", fit_o.k_min);
  fit->add_option("--plot-out", fit_o.plot_out, "also write rescaled rows");
  add_common(fit, fit_o);

  FdiffOpts fdiff_o;
  auto* fdiff = app.add_subcommand("fdiff", "finite differences of zeros");
  fdiff->add_option("--fixture", fdiff_o.fixture)->required();
  fdiff->add_option("--order", fdiff_o.order);
  fdiff->add_option("--stride", fdiff_o.stride, "take every stride-th zero");
  fdiff->add_option("--normalize", fdiff_o.normalize)
      ->check(CLI::IsMember({"pow2", "none"}));
  fdiff->add_option("--perturb", fdiff_o.perturb, "disk radius (decimal)");
  fdiff->add_option("--seed", fdiff_o.seed);
  add_common(fdiff, fdiff_o);

  RhsimOpts rhsim_o;
  auto* rhsim =
      app.add_subcommand("rhsim", "first negative coefficient under deviation");
  rhsim->add_option("--gammas", rhsim_o.gammas, "ordinate file")->required();
  rhsim->add_option("--delta", rhsim_o.delta, "deviation off the line");
  rhsim->add_option("--deviate-index", rhsim_o.deviate_index);
  rhsim->add_option("--n-max", rhsim_o.n_max);
  add_common(rhsim, rhsim_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  Report r;
  r.command = command_echo(argc, argv);
  try {
    if (nodes->parsed()) return run_nodes(nodes_o, r);
    if (alphas->parsed()) return run_alphas(alphas_o, r);
    if (nu->parsed()) return run_nu(nu_o, r);
    if (lambda->parsed()) return run_lambda(lambda_o, r);
    if (eval->parsed()) return run_eval(eval_o, r);
    if (zeros->parsed()) return run_zeros(zeros_o, r);
    if (verify->parsed()) return run_verify(verify_o, r);
    if (product->parsed()) return run_product(product_o, r);
    if (fit->parsed()) return run_fit(fit_o, r);
    if (fdiff->parsed()) return run_fdiff(fdiff_o, r);
    if (rhsim->parsed()) return run_rhsim(rhsim_o, r);
  } catch (const keli::Error& e) {
    std::cerr << "error," << error_kind(e) << "," << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error,internal," << e.what() << "\n";
    return 2;
  }
  return 1;
}
