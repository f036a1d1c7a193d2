#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "roughalg/cli.hpp"
#include "roughalg/effects.hpp"
#include "roughalg/paths.hpp"
#include "roughalg/runtime.hpp"
#include "roughalg/serialization.hpp"
#include "roughalg/verify_suites.hpp"

using json = nlohmann::ordered_json;
using roughalg::cli::execute;
using roughalg::cli::RunConfig;
using roughalg::paths::PiecewiseLinearPath;
using roughalg::words::Int;
using roughalg::words::Permutation;
using roughalg::words::Word;
using roughalg::words::WordPolynomial;
namespace ser = roughalg::serialization;

namespace {

// Runs fn, which must throw; checks the message mentions `needle`.
template <class Fn>
void expect_error(Fn&& fn, const std::string& needle) {
  try {
    fn();
    FAIL_CHECK("expected an exception mentioning '" << needle << "'");
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    CHECK_MESSAGE(msg.find(needle) != std::string::npos,
                  "message '" << msg << "' lacks '" << needle << "'");
  }
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "roughalg_cli";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  return path.string();
}

PiecewiseLinearPath random_polygon(int dim, int segments,
                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::vector<double> times;
  std::vector<std::vector<double>> pts;
  for (int i = 0; i <= segments; ++i) {
    times.push_back(static_cast<double>(i));
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (auto& x : p) x = coord(rng);
    pts.push_back(std::move(p));
  }
  return PiecewiseLinearPath(std::move(times), std::move(pts));
}

// CSV text for a smooth planar curve sampled on `rows` points of [0, 1].
std::string curve_csv(int rows) {
  std::ostringstream out;
  out.precision(17);
  out << "t,x1,x2\n";
  for (int i = 0; i < rows; ++i) {
    const double t = static_cast<double>(i) / (rows - 1);
    out << t << ',' << 0.4 * std::sin(3.0 * t) << ','
        << 0.3 * std::cos(2.0 * t) - 0.3 << '\n';
  }
  return out.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("word polynomial json is canonical and exact") {
  const WordPolynomial sh =
      roughalg::words::shuffle(Word({1}), Word({2}));
  const json doc = ser::word_polynomial_to_json(sh);
  CHECK(doc.dump() ==
        R"({"terms":[{"word":[1,2],"coeff":"1"},{"word":[2,1],"coeff":"1"}]})");
  CHECK(ser::word_polynomial_from_json(doc) == sh);

  // Coefficients survive as decimal strings regardless of magnitude.
  WordPolynomial big;
  big.add(Word({1}), Int(7));
  big.add(Word({2, 1, 1}), Int("-123456789012345678901234567890"));
  const json big_doc = ser::word_polynomial_to_json(big);
  CHECK(big_doc.dump() ==
        R"({"terms":[{"word":[1],"coeff":"7"},)"
        R"({"word":[2,1,1],"coeff":"-123456789012345678901234567890"}]})");
  CHECK(ser::word_polynomial_from_json(big_doc) == big);

  const json zero = ser::word_polynomial_to_json(WordPolynomial::zero());
  CHECK(zero.dump() == R"({"terms":[]})");
  CHECK(ser::word_polynomial_from_json(zero).is_zero());

  expect_error([] { ser::word_polynomial_from_json(json::parse(R"({})")); },
               "terms");
  expect_error(
      [] {
        ser::word_polynomial_from_json(
            json::parse(R"({"terms":[{"word":"ab","coeff":"1"}]})"));
      },
      "word");
  expect_error(
      [] {
        ser::word_polynomial_from_json(
            json::parse(R"({"terms":[{"word":[1],"coeff":"12x"}]})"));
      },
      "coeff");
  expect_error(
      [] {
        ser::word_polynomial_from_json(
            json::parse(R"({"terms":[{"word":[1],"coeff":3}]})"));
      },
      "coeff");
}

TEST_CASE("permutation sum json round trips") {
  const auto prod =
      roughalg::words::perm_product(Permutation({1}), Permutation({2, 1}));
  const json doc = ser::permutation_sum_to_json(prod);
  CHECK(doc.dump() ==
        R"({"terms":[{"word":[1,3,2],"coeff":"1"},)"
        R"({"word":[3,1,2],"coeff":"1"},{"word":[3,2,1],"coeff":"1"}]})");
  CHECK(ser::permutation_sum_from_json(doc) == prod);

  expect_error(
      [] {
        ser::permutation_sum_from_json(
            json::parse(R"({"terms":[{"word":[1,3],"coeff":"1"}]})"));
      },
      "bijection");
}

TEST_CASE("tensor series json matches the wire format") {
  roughalg::tensor::TruncatedTensorSeries ts(2, 2);
  ts.level(0)[0] = 1.0;
  ts.level(1) = {0.5, -0.25};
  ts.level(2) = {0.0, 0.0, 0.125, 0.0};
  const json doc = ser::tensor_to_json(ts);
  CHECK(doc.dump() ==
        R"({"dim":2,"depth":2,"levels":[[1.0],[0.5,-0.25],)"
        R"([0.0,0.0,0.125,0.0]]})");

  const auto back = ser::tensor_from_json(doc);
  CHECK(back.dim() == 2);
  CHECK(back.depth() == 2);
  CHECK(roughalg::tensor::max_abs_diff(back, ts) == 0.0);

  expect_error(
      [] {
        ser::tensor_from_json(
            json::parse(R"({"dim":2,"depth":1,"levels":[[1.0]]})"));
      },
      "levels");
  expect_error(
      [] {
        ser::tensor_from_json(json::parse(
            R"({"dim":2,"depth":1,"levels":[[1.0],[0.5,0.5,0.5]]})"));
      },
      "levels[1]");
  expect_error(
      [] {
        ser::tensor_from_json(
            json::parse(R"({"dim":0,"depth":1,"levels":[[1.0],[]]})"));
      },
      "dim");
  expect_error(
      [] {
        ser::tensor_from_json(json::parse(
            R"({"dim":1,"depth":1,"levels":[[1.0],["x"]]})"));
      },
      "number");
}

TEST_CASE("one form json round trips") {
  const roughalg::oneforms::PolynomialOneForm form(
      2, 1, 1, {{2.0, -1.0}, {0.5, 3.0, 0.0, 1.5}});
  const json doc = ser::one_form_to_json(form);
  CHECK(doc.dump() ==
        R"({"dim_in":2,"dim_out":1,"degree":1,)"
        R"("coeffs":[[2.0,-1.0],[0.5,3.0,0.0,1.5]]})");

  const auto back = ser::one_form_from_json(doc);
  CHECK(back.dim_in() == 2);
  CHECK(back.degree() == 1);
  const auto lhs = form.evaluate({0.3, -0.6}, {1.0, 2.0});
  const auto rhs = back.evaluate({0.3, -0.6}, {1.0, 2.0});
  CHECK(lhs == rhs);

  expect_error(
      [] {
        ser::one_form_from_json(
            json::parse(R"({"dim_in":2,"dim_out":1,"coeffs":[]})"));
      },
      "degree");
  expect_error(
      [] {
        ser::one_form_from_json(json::parse(
            R"({"dim_in":2,"dim_out":1,"degree":1,"coeffs":[[1.0,2.0]]})"));
      },
      "coeffs");
  expect_error(
      [] {
        ser::one_form_from_json(json::parse(
            R"({"dim_in":2,"dim_out":1,"degree":0,"coeffs":[[1.0]]})"));
      },
      "coeffs[0]");
}

TEST_CASE("csv paths parse with line numbered diagnostics") {
  const auto path = ser::path_from_csv_text(
      "t,x1,x2\n0,0,0\n0.5,1,-0.25\n1,0.5,0.75\n");
  CHECK(path.dim() == 2);
  CHECK(path.times() == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(path.points()[1] == std::vector<double>{1.0, -0.25});
  CHECK(path.points()[2] == std::vector<double>{0.5, 0.75});

  // Carriage returns and a missing final newline are both tolerated.
  const auto crlf = ser::path_from_csv_text("t,x1\r\n0,1\r\n1,2");
  CHECK(crlf.dim() == 1);
  CHECK(crlf.points()[1] == std::vector<double>{2.0});

  expect_error([] { ser::path_from_csv_text("time,x\n0,1\n1,2\n"); },
               "header");
  expect_error([] { ser::path_from_csv_text(""); }, "header");
  expect_error([] { ser::path_from_csv_text("t,x1\n0,1\n1\n"); }, "line 3");
  expect_error([] { ser::path_from_csv_text("t,x1\n0,abc\n1,2\n"); },
               "line 2");
  expect_error([] { ser::path_from_csv_text("t,x1\n0,1\n0,2\n"); }, "line 3");
  expect_error([] { ser::path_from_csv_text("t,x1\n0,1\n"); }, "two");
  expect_error([] { ser::path_from_csv_text("t,x1\n0,1\n\n1,2\n"); },
               "line 3");
}

TEST_CASE("run config is validated before any work") {
  RunConfig cfg;
  cfg.command = "signature";
  cfg.path_file = "/nonexistent/definitely_missing.csv";
  cfg.depth = 2;
  auto res = execute(cfg);
  CHECK(res.exit_code == 2);
  CHECK(res.doc.contains("error"));

  cfg.depth = 0;
  CHECK(execute(cfg).exit_code == 2);
  cfg.depth = 2;

  cfg.command = "integrate";
  cfg.p = 0.5;
  CHECK(execute(cfg).exit_code == 2);
  cfg.p = 1.0;
  cfg.tol = -1.0;
  CHECK(execute(cfg).exit_code == 2);
  cfg.tol = 1e-9;

  cfg.command = "nonsense";
  CHECK(execute(cfg).exit_code == 2);

  cfg.command = "verify";
  cfg.suite = "nonsense";
  const auto bad_suite = execute(cfg);
  CHECK(bad_suite.exit_code == 2);
  CHECK(bad_suite.doc.contains("error"));

  cfg.command = "signature";
  cfg.suite.clear();
  cfg.has_interval = true;
  cfg.interval_lo = 1.0;
  cfg.interval_hi = 0.0;
  CHECK(execute(cfg).exit_code == 2);
}

TEST_CASE("signature command wraps the library exactly") {
  const std::string csv_file =
      temp_file("ell.csv", "t,x1,x2\n0,0,0\n1,1,0\n2,1,1\n");
  RunConfig cfg;
  cfg.command = "signature";
  cfg.path_file = csv_file;
  cfg.depth = 2;

  const auto res = execute(cfg);
  REQUIRE(res.exit_code == 0);
  const PiecewiseLinearPath ell({0.0, 1.0, 2.0}, {{0, 0}, {1, 0}, {1, 1}});
  const auto sig = roughalg::paths::signature(ell, 2);
  CHECK(res.doc["levels"] == ser::tensor_to_json(sig.series())["levels"]);
  CHECK(res.doc["group_like_defect"].get<double>() ==
        roughalg::tensor::group_like_defect(sig.series()));

  // Restriction to a window matches the library's windowed evaluation.
  cfg.has_interval = true;
  cfg.interval_lo = 0.0;
  cfg.interval_hi = 1.5;
  const auto windowed = execute(cfg);
  REQUIRE(windowed.exit_code == 0);
  const auto wsig = roughalg::paths::signature(ell, 2, 0.0, 1.5);
  CHECK(windowed.doc["levels"] ==
        ser::tensor_to_json(wsig.series())["levels"]);
  cfg.has_interval = false;

  // Two-point segment: the whole output is a frozen byte string.
  cfg.path_file = temp_file("segment.csv", "t,x1\n0,0\n1,0.5\n");
  const auto frozen = execute(cfg);
  REQUIRE(frozen.exit_code == 0);
  CHECK(frozen.doc.dump() ==
        R"({"dim":1,"depth":2,"levels":[[1.0],[0.5],[0.125]],)"
        R"("group_like_defect":0.0})");

  cfg.path_file = temp_file("broken.csv", "t,x1\n0,0\nnope,1\n");
  const auto broken = execute(cfg);
  CHECK(broken.exit_code == 2);
  const auto msg = broken.doc["error"].get<std::string>();
  CHECK(msg.find("line 3") != std::string::npos);
}

TEST_CASE("integrate command: exact values, oracle values, warning flag") {
  // Constant form: the integral is A applied to the total increment, and the
  // declared smoothness (degree + 1 = 1) does not exceed p = 1, so the
  // command pads the stack and says so.
  const std::string poly_csv =
      temp_file("poly.csv", "t,x1,x2\n0,0,0\n1,0.5,-0.25\n2,0.75,0.25\n");
  const json const_doc = ser::one_form_to_json(
      roughalg::oneforms::PolynomialOneForm(2, 1, 0, {{2.0, -1.0}}));
  RunConfig cfg;
  cfg.command = "integrate";
  cfg.path_file = poly_csv;
  cfg.one_form_file = temp_file("const_form.json", const_doc.dump());
  cfg.depth = 1;
  cfg.p = 1.0;
  cfg.tol = 1e-9;

  const auto constant = execute(cfg);
  REQUIRE(constant.exit_code == 0);
  CHECK(constant.doc.contains("warning"));
  const double expected = 2.0 * 0.75 - 1.0 * 0.25;
  CHECK(std::abs(constant.doc["level1"][0].get<double>() - expected) <
        1e-10);

  // Identity scalar form along x_t = t gives the calculus value 1/2; the
  // degree-1 stack clears p = 1, so no warning appears.
  const json id_doc = ser::one_form_to_json(
      roughalg::oneforms::PolynomialOneForm(1, 1, 1, {{0.0}, {1.0}}));
  cfg.path_file = temp_file("line.csv", "t,x1\n0,0\n0.5,0.5\n1,1\n");
  cfg.one_form_file = temp_file("id_form.json", id_doc.dump());
  const auto half = execute(cfg);
  REQUIRE(half.exit_code == 0);
  CHECK(!half.doc.contains("warning"));
  CHECK(std::abs(half.doc["level1"][0].get<double>() - 0.5) < 1e-9);
  CHECK(half.doc["sewing_report"]["levels_used"].get<int>() >= 1);
  CHECK(half.doc["sewing_report"]["estimated_constant"].get<double>() >=
        0.0);

  // Quadratic form on a polygon against the classical quadrature oracle,
  // plus byte-level determinism of the rendered result.
  std::mt19937_64 rng(91);
  const auto polygon = random_polygon(2, 4, rng);
  std::ostringstream csv;
  csv.precision(17);
  csv << "t,x1,x2\n";
  for (std::size_t i = 0; i < polygon.times().size(); ++i) {
    csv << polygon.times()[i] << ',' << polygon.points()[i][0] << ','
        << polygon.points()[i][1] << '\n';
  }
  const auto quad = testoracles::random_one_form(2, 1, 2, rng);
  cfg.path_file = temp_file("quad_path.csv", csv.str());
  cfg.one_form_file =
      temp_file("quad_form.json", ser::one_form_to_json(quad).dump());
  const auto res = execute(cfg);
  REQUIRE(res.exit_code == 0);
  CHECK(!res.doc.contains("warning"));
  const auto oracle = testoracles::rs_integral(polygon, quad, 0.0, 4.0, 64);
  CHECK(std::abs(res.doc["level1"][0].get<double>() - oracle[0]) < 1e-6);
  CHECK(roughalg::cli::render(res.doc) ==
        roughalg::cli::render(execute(cfg).doc));

  // Starving the refinement forces the non-convergence exit, and the error
  // report is still JSON.
  cfg.tol = 1e-16;
  cfg.max_level = 2;
  const auto starved = execute(cfg);
  CHECK(starved.exit_code == 3);
  CHECK(starved.doc.contains("error"));
  const auto starved_msg = starved.doc["error"].get<std::string>();
  CHECK(starved_msg.find("sew") != std::string::npos);
}

TEST_CASE("verify suites pass and report honestly") {
  namespace verify = roughalg::verify;

  const auto hopf = verify::hopf_suite(1);
  CHECK(hopf.passed);
  REQUIRE(hopf.checks.size() >= 5);
  for (const auto& c : hopf.checks) {
    CHECK(c.worst_defect == 0.0);
    CHECK(c.tolerance == 0.0);
    CHECK(c.passed);
  }
  CHECK(verify::report_json(hopf).dump() ==
        verify::report_json(verify::hopf_suite(1)).dump());

  const auto sig = verify::signature_suite(7, 3, 6);
  CHECK(sig.passed);
  bool saw_circle = false;
  for (const auto& c : sig.checks) {
    CHECK(c.passed);
    if (c.name.find("circle") != std::string::npos) {
      saw_circle = true;
      CHECK(c.worst_defect < 1e-3);
    }
  }
  CHECK(saw_circle);

  const auto cv = verify::changevar_suite(11, 4, 2);
  CHECK(cv.passed);
  for (const auto& c : cv.checks) CHECK(c.worst_defect <= c.tolerance);

  const auto eff = verify::effects_suite(5);
  CHECK(eff.passed);
  CHECK(verify::report_json(eff).dump() ==
        verify::report_json(verify::effects_suite(5)).dump());

  // Zeroing the tolerances must surface failures: the float checks cannot
  // meet a defect budget of exactly 0.
  const auto tampered = verify::signature_suite(7, 3, 6, 0.0);
  CHECK(!tampered.passed);
  bool saw_failure = false;
  for (const auto& c : tampered.checks) {
    CHECK(c.tolerance == 0.0);
    if (!c.passed) saw_failure = true;
  }
  CHECK(saw_failure);

  const auto doc = verify::report_json(sig);
  CHECK(doc.contains("suite"));
  CHECK(doc.contains("seed"));
  CHECK(doc.contains("checks"));
  CHECK(doc.contains("passed"));
}

TEST_CASE("verify command exit codes follow the report") {
  RunConfig cfg;
  cfg.command = "verify";
  cfg.suite = "hopf";
  cfg.seed = 0;
  const auto res = execute(cfg);
  CHECK(res.exit_code == 0);
  CHECK(res.doc["passed"].get<bool>());
  CHECK(res.doc["suite"].get<std::string>() == "hopf");
}

TEST_CASE("verify-effects runs the invariants on files") {
  const std::string csv_file = temp_file("curve.csv", curve_csv(400));
  std::mt19937_64 rng(29);
  const auto form = testoracles::random_one_form(2, 2, 2, rng);
  const std::string form_file =
      temp_file("curve_form.json", ser::one_form_to_json(form).dump());

  RunConfig cfg;
  cfg.command = "verify-effects";
  cfg.path_file = csv_file;
  cfg.one_form_file = form_file;
  cfg.p = 2.5;
  cfg.tol = 1e-4;

  const auto res = execute(cfg);
  REQUIRE(res.exit_code == 0);
  CHECK(res.doc["passed"].get<bool>());
  REQUIRE(res.doc["checks"].size() == 4);
  CHECK(roughalg::cli::render(res.doc) ==
        roughalg::cli::render(execute(cfg).doc));

  // An unreachable tolerance turns the convergence check into a reported
  // failure rather than an error.
  cfg.tol = 1e-18;
  const auto strict = execute(cfg);
  CHECK(strict.exit_code == 1);
  CHECK(!strict.doc["passed"].get<bool>());

  // A constant form cannot clear any p >= 1.
  const json flat = ser::one_form_to_json(
      roughalg::oneforms::PolynomialOneForm(2, 1, 0, {{1.0, 0.0}}));
  cfg.one_form_file = temp_file("flat_form.json", flat.dump());
  cfg.tol = 1e-4;
  const auto shallow = execute(cfg);
  CHECK(shallow.exit_code == 2);
  const auto msg = shallow.doc["error"].get<std::string>();
  CHECK(msg.find("degree") != std::string::npos);
}

TEST_CASE("thread cap respects the environment") {
  unsetenv("ROUGHALG_THREADS");
  CHECK(roughalg::runtime::thread_cap() >= 1);
  setenv("ROUGHALG_THREADS", "3", 1);
  CHECK(roughalg::runtime::thread_cap() == 3);
  setenv("ROUGHALG_THREADS", "0", 1);
  CHECK(roughalg::runtime::thread_cap() == 1);
  setenv("ROUGHALG_THREADS", "abc", 1);
  CHECK(roughalg::runtime::thread_cap() == 1);

  // The pair scan reduces by max, so the norm and its report are identical
  // for every thread count.
  using roughalg::effects::FiberElement;
  using roughalg::effects::OperatorNormReport;
  using roughalg::effects::SlowlyVaryingOneForm;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coeff(-0.5, 0.5);
  PiecewiseLinearPath base = random_polygon(2, 4, rng);
  std::vector<double> times;
  std::vector<std::vector<double>> pts;
  for (int i = 0; i <= 64; ++i) {
    const double t =
        base.t_begin() + (base.t_end() - base.t_begin()) * i / 64.0;
    times.push_back(t);
    pts.push_back(base.value(t));
  }
  const auto X = roughalg::paths::lift_path(
      PiecewiseLinearPath(times, pts), 2);
  std::vector<FiberElement> fibers;
  for (std::size_t i = 0; i < X.times().size(); ++i) {
    std::vector<std::vector<double>> levels{std::vector<double>(4),
                                            std::vector<double>(8)};
    for (auto& lvl : levels)
      for (auto& x : lvl) x = coeff(rng);
    fibers.emplace_back(2, 2, std::move(levels));
  }
  const auto omega = roughalg::tensor::Control::sum(
      roughalg::tensor::Control::linear(1.0),
      roughalg::tensor::Control::p_variation_of(X.times(), X.elements(),
                                                2.5));
  const SlowlyVaryingOneForm beta(X, fibers, 2.5, omega, 1.25);

  setenv("ROUGHALG_THREADS", "1", 1);
  OperatorNormReport seq;
  const double norm_seq =
      roughalg::effects::operator_norm(beta, beta.omega(), beta.theta(),
                                       &seq);
  setenv("ROUGHALG_THREADS", "4", 1);
  OperatorNormReport par;
  const double norm_par =
      roughalg::effects::operator_norm(beta, beta.omega(), beta.theta(),
                                       &par);
  unsetenv("ROUGHALG_THREADS");

  CHECK(norm_seq == norm_par);
  CHECK(seq.sup_norm == par.sup_norm);
  REQUIRE(seq.difference_terms.size() == par.difference_terms.size());
  for (std::size_t k = 0; k < seq.difference_terms.size(); ++k)
    CHECK(seq.difference_terms[k] == par.difference_terms[k]);
}

}  // TEST_SUITE
