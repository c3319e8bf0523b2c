// Python surface over the C++ core. All numeric traffic crosses the
// boundary as decimal strings in the library's exact round-trip format, so
// no MPFR type leaks into Python and no precision is silently lost through
// doubles. Handles (node tables, coefficient series, evaluators, zero
// tables) stay opaque.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "keli/analysis.hpp"
#include "keli/lambda_series.hpp"
#include "keli/nodes.hpp"
#include "keli/zeros.hpp"

namespace py = pybind11;
using namespace keli;

namespace {

// parse precision generous enough for the digits actually present
mpfr_prec_t prec_for(const std::string& text) {
  return bits_for_digits(std::max<int>(40, static_cast<int>(text.size())));
}

BigReal real_arg(const std::string& text) {
  return from_string(text, prec_for(text));
}

BigComplex complex_arg(const std::string& text) {
  return from_string_complex(text, prec_for(text));
}

std::vector<BigReal> gamma_args(const std::vector<std::string>& texts) {
  std::vector<BigReal> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(real_arg(t));
  return out;
}

py::dict zero_row(const ComplexZero& e) {
  py::dict d;
  d["k"] = e.k;
  d["re"] = to_string(e.re);
  d["im"] = to_string(e.im);
  d["residual"] = to_string(e.residual);
  d["newton_steps"] = e.newton_steps;
  d["derivative_underflow"] = e.derivative_underflow;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "high-precision pipeline core: node values of the completed-zeta log, "
      "interpolation coefficients, the entire function and its zeros";

  py::register_exception<Error>(m, "KeliError");

  // ---- node pipeline ----
  py::class_<NodeValueTable>(m, "NodeTable")
      .def_property_readonly("count", &NodeValueTable::count)
      .def_readonly("digits", &NodeValueTable::digits)
      .def("value",
           [](const NodeValueTable& t, int j) {
             if (j < 1 || j > t.count())
               throw DomainError("node index out of range");
             return to_string(t.values[j - 1]);
           },
           py::arg("j"), "f(j/(j+1)) as a decimal string")
      .def("save", [](const NodeValueTable& t,
                      const std::string& path) { save_node_table(t, path); });

  m.def(
      "build_nodes",
      [](int count, int digits, int threads) {
        return build_node_table(count, make_context(digits), threads);
      },
      py::arg("count"), py::arg("digits"), py::arg("threads") = 1);
  m.def("load_nodes", &load_node_table, py::arg("path"));

  // ---- coefficients ----
  py::class_<AlphaSeries>(m, "AlphaSeries")
      .def_property_readonly("k_max", &AlphaSeries::k_max)
      .def_readonly("source_digits", &AlphaSeries::source_digits)
      .def_readonly("significance", &AlphaSeries::significance)
      .def("alpha",
           [](const AlphaSeries& a, int k) {
             if (k < 1 || k > a.k_max())
               throw DomainError("alpha index out of range");
             return to_string(a.a[k - 1]);
           },
           py::arg("k"));
  m.def("solve_alphas", &solve_alphas, py::arg("nodes"), py::arg("k_max"));

  py::class_<NuSeries>(m, "NuSeries")
      .def_property_readonly("q_max", &NuSeries::q_max)
      .def_readonly("warnings", &NuSeries::warnings)
      .def("values",
           [](const NuSeries& n) {
             std::vector<std::string> out;
             for (const auto& v : n.nu) out.push_back(to_string(v));
             return out;
           })
      .def("at",
           [](const NuSeries& n, int even_m) { return to_string(n.at(even_m)); },
           py::arg("m"));
  m.def("nu_coeffs", &nu_coeffs, py::arg("alphas"), py::arg("q_max"));

  // ---- evaluation ----
  py::class_<LambdaEvaluator>(m, "Evaluator")
      .def(py::init([](const AlphaSeries& a, int q_max, int target_digits) {
             return std::make_unique<LambdaEvaluator>(a, q_max, target_digits);
           }),
           py::arg("alphas"), py::arg("q_max"), py::arg("target_digits"))
      .def_property_readonly("target_digits", &LambdaEvaluator::target_digits)
      .def("lambda_at",
           [](const LambdaEvaluator& ev, const std::string& s) {
             return to_string(ev.lambda_at(complex_arg(s)));
           },
           py::arg("s"))
      .def("lambda_series_at",
           [](const LambdaEvaluator& ev, const std::string& s) {
             return to_string(ev.lambda_series_at(complex_arg(s)));
           },
           py::arg("s"))
      .def("lambda_prime",
           [](const LambdaEvaluator& ev, const std::string& s) {
             return to_string(ev.lambda_prime(complex_arg(s)));
           },
           py::arg("s"))
      .def("lambda_int",
           [](const LambdaEvaluator& ev, long n) {
             return to_string(ev.lambda_int(n));
           },
           py::arg("n"));

  m.def(
      "lambda1_closed",
      [](int digits) { return to_string(lambda1_closed(make_context(digits))); },
      py::arg("digits"));
  m.def(
      "lambda_sum_zeros",
      [](long n, const std::vector<std::string>& gammas, long deviate_index,
         double delta, int digits) {
        ZeroDeviation dev;
        dev.index = deviate_index;
        dev.delta = delta;
        return to_string(
            lambda_sum_zeros(n, gamma_args(gammas), dev, make_context(digits)));
      },
      py::arg("n"), py::arg("gammas"), py::arg("deviate_index") = -1,
      py::arg("delta") = 0.0, py::arg("digits") = 40);

  // ---- zeros ----
  py::class_<ZeroTable>(m, "ZeroTable")
      .def_property_readonly("count", &ZeroTable::count)
      .def("row",
           [](const ZeroTable& t, std::size_t i) {
             if (i >= t.entries.size())
               throw DomainError("row index out of range");
             return zero_row(t.entries[i]);
           },
           py::arg("i"))
      .def("save", [](const ZeroTable& t, const std::string& path) {
        save_zero_table(t, path);
      });
  m.def("load_zero_table", &load_zero_table, py::arg("path"));
  m.def(
      "seed_zero",
      [](long k) { return to_string(seed_zero(k)); },
      py::arg("k"), "extrapolated starting point for zero k");
  m.def(
      "refine_zero",
      [](const std::string& seed, const LambdaEvaluator& ev,
         const LambdaEvaluator& cert, const std::string& tol) {
        return zero_row(refine_zero(complex_arg(seed), ev, cert, real_arg(tol)));
      },
      py::arg("seed"), py::arg("evaluator"), py::arg("certifier"),
      py::arg("tol"));
  m.def(
      "compute_zeros",
      [](long k_from, long k_to, const LambdaEvaluator& ev,
         const LambdaEvaluator& cert, const std::string& tol, int threads) {
        return compute_zeros(k_from, k_to, ev, cert, real_arg(tol), threads);
      },
      py::arg("k_from"), py::arg("k_to"), py::arg("evaluator"),
      py::arg("certifier"), py::arg("tol"), py::arg("threads") = 1);
  m.def(
      "verify",
      [](const ZeroTable& computed, const ZeroTable& fixture) {
        auto r = verify_against_fixture(computed, fixture);
        py::dict d;
        d["compared"] = r.compared;
        d["max_rel"] = r.max_rel;
        d["index_mismatch"] = r.index_mismatch;
        d["empty_overlap"] = r.empty_overlap;
        d["pass"] = r.pass;
        return d;
      },
      py::arg("computed"), py::arg("fixture"));
  m.def(
      "product_partial",
      [](const std::string& s, const ZeroTable& table, long n_factors,
         const std::string& constant) {
        return to_string(
            product_partial(complex_arg(s), table, n_factors,
                            real_arg(constant)));
      },
      py::arg("s"), py::arg("table"), py::arg("n_factors"),
      py::arg("constant"));

  // ---- analyses ----
  m.def(
      "load_zeta_zeros",
      [](const std::string& path) {
        std::vector<std::string> out;
        for (const auto& g : load_zeta_zeros(path)) out.push_back(to_string(g));
        return out;
      },
      py::arg("path"));
  m.def(
      "rh_first_negative",
      [](const std::vector<std::string>& gammas, long deviate_index,
         double delta, long n_max, int threads) {
        return rh_first_negative(gamma_args(gammas), deviate_index, delta,
                                 n_max, threads);
      },
      py::arg("gammas"), py::arg("deviate_index"), py::arg("delta"),
      py::arg("n_max"), py::arg("threads") = 1);
  m.def(
      "fit_log_factor",
      [](const ZeroTable& t, long k_min) {
        return to_string(fit_log_factor(t, k_min));
      },
      py::arg("table"), py::arg("k_min"));
  m.def(
      "rescale_for_plot",
      [](const ZeroTable& t) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& [re, scaled] : rescale_for_plot(t))
          out.emplace_back(to_string(re), to_string(scaled));
        return out;
      },
      py::arg("table"));
  m.def(
      "fdiff_norm",
      [](const ZeroTable& t, int order, int stride, bool pow2,
         const std::string& perturb, unsigned long seed) {
        auto seq = table_to_sequence(t);
        if (stride > 1) seq = stride_sequence(seq, stride);
        if (!perturb.empty()) seq = perturb_zeros(seq, real_arg(perturb), seed);
        auto d = finite_difference(seq, order,
                                   pow2 ? DiffNormalization::pow2
                                        : DiffNormalization::none);
        return to_string(diff_norm(d));
      },
      py::arg("table"), py::arg("order"), py::arg("stride") = 1,
      py::arg("pow2") = true, py::arg("perturb") = std::string(),
      py::arg("seed") = 1,
      "rms of the order-m differences of the zero sequence");

  // ---- utilities ----
  m.def(
      "agreement_digits",
      [](const std::string& a, const std::string& b) {
        mpfr_prec_t prec = std::max(prec_for(a), prec_for(b));
        return agreement_digits(from_string(a, prec), from_string(b, prec));
      },
      py::arg("a"), py::arg("b"),
      "matching leading decimal digits of two decimal strings");
}
