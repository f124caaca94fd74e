#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "lse/lab.hpp"
#include "lse/lse.hpp"
#include "lse/matrix_market.hpp"
#include "lse/reports.hpp"

using Mat = lse::Matrix<double>;
using Vec = lse::Vector<double>;
using lse::Index;

namespace {

Mat parse(const std::string& text) {
  std::istringstream in(text);
  return lse::read_matrix_market(in, "test");
}

std::string message_of(const std::string& text) {
  std::istringstream in(text);
  try {
    lse::read_matrix_market(in, "test");
  } catch (const lse::ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("array format fills column major") {
  Mat m = parse(
      "%%MatrixMarket matrix array real general\n"
      "2 2\n"
      "1\n3\n2\n4\n");
  Mat expected(2, 2);
  expected << 1, 2,
              3, 4;
  CHECK(m == expected);

  Mat one_line = parse(
      "%%MatrixMarket matrix array real general\n"
      "% a comment\n"
      "\n"
      "2 2\n"
      "1 3 2 4\n");
  CHECK(one_line == expected);
}

TEST_CASE("coordinate format reproduces the sparse test matrix") {
  Mat m = parse(
      "%%MatrixMarket matrix coordinate real general\n"
      "% only four structural nonzeros\n"
      "9 4 4\n"
      "1 1 1.0\n"
      "3 2 1.0\n"
      "7 3 1e-3\n"
      "9 4 1e-3\n");
  auto problem = lse::build_test_problem<double>({1e-3, 1e-3, lse::B2Mode::Spread});
  CHECK(m == problem.A());
}

TEST_CASE("header and size errors carry the source line") {
  CHECK(message_of("").find("empty file") != std::string::npos);
  CHECK(message_of("%%MatrixMarkt matrix array real general\n2 2\n")
            .find("test:1: malformed MatrixMarket header") != std::string::npos);
  CHECK(message_of("%%MatrixMarket matrix array complex general\n2 2\n")
            .find("unsupported field 'complex'") != std::string::npos);
  CHECK(message_of("%%MatrixMarket matrix array real symmetric\n2 2\n")
            .find("unsupported symmetry 'symmetric'") != std::string::npos);
  CHECK(message_of("%%MatrixMarket matrix elemental real general\n2 2\n")
            .find("unsupported format 'elemental'") != std::string::npos);
  CHECK(message_of("%%MatrixMarket matrix array real general\n2 x\n")
            .find("test:2: malformed size line") != std::string::npos);
  CHECK(message_of("%%MatrixMarket matrix array real general\n2 2 9\n")
            .find("trailing tokens on size line") != std::string::npos);
  CHECK(message_of("%%MatrixMarket matrix array real general\n")
            .find("missing size line") != std::string::npos);
}

TEST_CASE("entry errors carry the source line") {
  CHECK(message_of("%%MatrixMarket matrix array real general\n2 2\n1\n2\n")
            .find("expected 4 entries, got 2") != std::string::npos);
  CHECK(message_of("%%MatrixMarket matrix array real general\n2 2\n1 2 3 4 5\n")
            .find("test:3: more entries") != std::string::npos);
  CHECK(message_of("%%MatrixMarket matrix array real general\n2 2\n1\n2\n1.2.3\n4\n")
            .find("test:5: bad numeric value '1.2.3'") != std::string::npos);
  CHECK(message_of("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 5\n")
            .find("outside 2x2") != std::string::npos);
  CHECK(message_of("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 5\n1 1 6\n")
            .find("test:4: duplicate entry (1,1)") != std::string::npos);
  CHECK(message_of("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 5\n")
            .find("expected 2 entries, got 1") != std::string::npos);
  CHECK(message_of("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 5 9\n")
            .find("trailing tokens on coordinate entry") != std::string::npos);
  CHECK(message_of("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 5\n")
            .find("malformed coordinate entry") != std::string::npos);
}

TEST_CASE("written matrices round-trip bit for bit") {
  Mat m(3, 2);
  m << M_PI, 1e-300,
       -2.0 / 3.0, 6.02214076e23,
       0.0, -1e-5;
  std::ostringstream out;
  lse::write_matrix_market(out, m);
  std::istringstream in(out.str());
  Mat r = lse::read_matrix_market(in, "roundtrip");
  CHECK(r.rows() == 3);
  CHECK(r.cols() == 2);
  CHECK((r.array() == m.array()).all());
}

TEST_CASE("vector reader insists on a single column") {
  std::istringstream good("%%MatrixMarket matrix array real general\n3 1\n1\n2\n3\n");
  Vec v = lse::read_vector_market(good, "v");
  CHECK(v.size() == 3);
  CHECK(v(2) == 3.0);
  std::istringstream bad("%%MatrixMarket matrix array real general\n1 2\n1\n2\n");
  CHECK_THROWS_AS(lse::read_vector_market(bad, "v"), lse::ParseError);
}

TEST_CASE("missing files raise parse errors naming the path") {
  try {
    lse::read_matrix_market("/nonexistent/path.mtx");
    CHECK(false);
  } catch (const lse::ParseError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/path.mtx") != std::string::npos);
  }
}

TEST_CASE("file round-trip through the filesystem") {
  auto problem = lse::build_test_problem<double>({1e-3, 1e-6, lse::B2Mode::Spread});
  const std::string path = "unit_io_roundtrip.mtx";
  lse::write_matrix_market(path, problem.A());
  Mat back = lse::read_matrix_market(path);
  CHECK((back.array() == problem.A().array()).all());
  std::remove(path.c_str());
}

TEST_CASE("solve reports round-trip through json") {
  auto problem = lse::build_test_problem<double>({1e-3, 1e-3, lse::B2Mode::Spread});
  auto sol = lse::solve(problem);
  auto rep = lse::make_solve_report(problem, sol);
  lse::Json j = lse::Json::parse(lse::to_json(rep).dump(2));
  auto back = lse::solve_report_from_json(j);
  CHECK(back.x == rep.x);
  CHECK(back.r == rep.r);
  CHECK(back.lambda == rep.lambda);
  CHECK(back.constraint_residual == rep.constraint_residual);
  CHECK(back.stationarity_residual == rep.stationarity_residual);
  CHECK(rep.constraint_residual <= 1e-12);
  CHECK(rep.stationarity_residual <= 1e-12);
}

TEST_CASE("condition reports round-trip, including infinities") {
  auto problem = lse::build_test_problem<double>({1e-3, 1e-3, lse::B2Mode::Spread});
  auto sol = lse::solve(problem);
  auto rep = lse::make_condition_report(sol, lse::SelectionMatrix<double>::identity(4));
  lse::Json j = lse::Json::parse(lse::to_json(rep).dump());
  auto back = lse::condition_report_from_json(j);
  CHECK(back.kappa_inf_rel == rep.kappa_inf_rel);
  CHECK(back.kappa_c == rep.kappa_c);
  CHECK(back.kappa_c_infinite == rep.kappa_c_infinite);
  CHECK(back.kappa_2_bound == rep.kappa_2_bound);
  CHECK(back.kappa_1 == rep.kappa_1);
  CHECK(back.kappa_2 == rep.kappa_2);
  CHECK(back.kappa_inf_u == rep.kappa_inf_u);
  CHECK(back.kappa_c_u == rep.kappa_c_u);

  Mat a(2, 2), c(1, 2);
  a << 1, 0,
       1, 1;
  c << 1, 0;
  Vec b(2), d(1);
  b << 2, 1;
  d << 1;
  lse::LseProblem<double> pinned(a, c, b, d);
  auto psol = lse::solve(pinned);
  lse::ConditionReport inf_rep;
  auto kc = lse::kappa_c(psol, lse::SelectionMatrix<double>::identity(2));
  inf_rep.kappa_c = kc.value;
  inf_rep.kappa_c_infinite = kc.zero_component;
  lse::Json ij = lse::Json::parse(lse::to_json(inf_rep).dump());
  CHECK(ij["exact"]["kappa_c"] == "Infinity");
  auto iback = lse::condition_report_from_json(ij);
  CHECK(std::isinf(iback.kappa_c));
  CHECK(iback.kappa_c_infinite);
}

TEST_CASE("estimate reports round-trip with counters") {
  auto problem = lse::build_test_problem<double>({1e-6, 1e-6, lse::B2Mode::Spread});
  auto sol = lse::solve(problem);
  auto rep = lse::make_estimate_report(sol, lse::SelectionMatrix<double>::identity(4));
  lse::Json j = lse::Json::parse(lse::to_json(rep).dump(2));
  CHECK(j["provenance"] == "estimated");
  auto back = lse::estimate_report_from_json(j);
  CHECK(back.inf_bound.total == rep.inf_bound.total);
  CHECK(back.c_bound.total == rep.c_bound.total);
  for (int t = 0; t < 6; ++t) {
    CHECK(back.inf_bound.terms[t] == rep.inf_bound.terms[t]);
    CHECK(back.inf_bound.iterations[t] == rep.inf_bound.iterations[t]);
    CHECK(back.c_bound.applications[t] == rep.c_bound.applications[t]);
  }
}

TEST_CASE("experiment rows round-trip through json") {
  std::vector<lse::TestProblemConfig<double>> configs{{1e-3, 1e-3, lse::B2Mode::Spread}};
  auto rows = lse::run_experiment(configs, lse::default_selections<double>(), 1e-8, 3, 11);
  lse::Json j = lse::Json::parse(lse::to_json(rows).dump());
  REQUIRE(j.is_array());
  REQUIRE(j.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto back = lse::experiment_row_from_json(j[i]);
    CHECK(back.eta == rows[i].eta);
    CHECK(back.delta == rows[i].delta);
    CHECK(back.selection == rows[i].selection);
    CHECK(back.cond_augmented == rows[i].cond_augmented);
    CHECK(back.eps0 == rows[i].eps0);
    CHECK(back.rinf_max == rows[i].rinf_max);
    CHECK(back.rc_median == rows[i].rc_median);
    CHECK(back.kappa_inf_u == rows[i].kappa_inf_u);
    CHECK(back.kappa_2 == rows[i].kappa_2);
    CHECK(back.bound_eps0_kappa_c == rows[i].bound_eps0_kappa_c);
    CHECK(back.trials == rows[i].trials);
    CHECK(back.seed == rows[i].seed);
  }
}

TEST_CASE("unexpected numeric strings are rejected") {
  CHECK_THROWS_AS(lse::number_from_json(lse::Json("NaNish")), lse::ParseError);
  CHECK(lse::number_from_json(lse::Json("-Infinity")) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("csv and table renderings hold the expected fields") {
  auto problem = lse::build_test_problem<double>({1e-3, 1e-3, lse::B2Mode::Spread});
  auto sol = lse::solve(problem);
  auto srep = lse::make_solve_report(problem, sol);
  std::string scsv = lse::to_csv(srep);
  CHECK(scsv.rfind("field,index,value\n", 0) == 0);
  CHECK(scsv.find("\nx,4,") != std::string::npos);
  CHECK(scsv.find("stationarity_residual") != std::string::npos);
  CHECK(lse::to_table(srep).find("||C x - d||_2") != std::string::npos);

  auto crep = lse::make_condition_report(sol, lse::SelectionMatrix<double>::identity(4));
  std::string ccsv = lse::to_csv(crep);
  CHECK(ccsv.rfind("metric,value,provenance\n", 0) == 0);
  CHECK(ccsv.find("kappa_inf_u,") != std::string::npos);
  CHECK(ccsv.find(",estimated") != std::string::npos);
  CHECK(lse::to_table(crep).find("kappa_inf_rel") != std::string::npos);

  auto erep = lse::make_estimate_report(sol, lse::SelectionMatrix<double>::identity(4));
  std::string ecsv = lse::to_csv(erep);
  CHECK(ecsv.rfind("metric,term,value,iterations,applications\n", 0) == 0);
  for (const auto& name : lse::upper_bound_term_names()) {
    CHECK(ecsv.find("," + name + ",") != std::string::npos);
  }

  std::vector<lse::TestProblemConfig<double>> configs{{1e-3, 1e-3, lse::B2Mode::Spread}};
  auto rows = lse::run_experiment(configs, lse::default_selections<double>(), 1e-8, 2, 5);
  std::string xcsv = lse::to_csv(rows);
  CHECK(xcsv.rfind("eta,delta,selection,", 0) == 0);
  CHECK(std::count(xcsv.begin(), xcsv.end(), '\n') == 4);
  CHECK(xcsv.find("\"rows:1,2,3\"") != std::string::npos);
  std::string xtable = lse::to_table(rows);
  CHECK(xtable.find("cond_aug") != std::string::npos);
  CHECK(xtable.find("rows:4") != std::string::npos);
}

TEST_CASE("csv escaping quotes commas and embedded quotes") {
  CHECK(lse::csv_escape("plain") == "plain");
  CHECK(lse::csv_escape("a,b") == "\"a,b\"");
  CHECK(lse::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}
