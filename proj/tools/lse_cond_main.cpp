#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lse/lse.hpp"

namespace {

struct ProblemPaths {
  std::string a, c, b, d;
};

lse::LseProblem<double> load_problem(const ProblemPaths& paths) {
  return lse::LseProblem<double>(
      lse::read_matrix_market(paths.a), lse::read_matrix_market(paths.c),
      lse::read_vector_market(paths.b), lse::read_vector_market(paths.d));
}

// identity | rows:i,j,... (1-based) | file:path
lse::SelectionMatrix<double> parse_selection(const std::string& spec, lse::Index n) {
  if (spec == "identity") return lse::SelectionMatrix<double>::identity(n);
  if (spec.rfind("rows:", 0) == 0) {
    std::vector<lse::Index> rows;
    std::stringstream list(spec.substr(5));
    std::string tok;
    while (std::getline(list, tok, ',')) {
      std::size_t used = 0;
      long row = 0;
      try {
        row = std::stol(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || tok.empty()) {
        throw lse::ParseError("selection '" + spec + "': '" + tok +
                              "' is not an integer");
      }
      if (row < 1 || row > n) {
        throw lse::ParseError("selection '" + spec + "': row " + tok +
                              " outside [1, " + std::to_string(n) + "]");
      }
      rows.push_back(static_cast<lse::Index>(row - 1));
    }
    if (rows.empty()) throw lse::ParseError("selection '" + spec + "': empty row list");
    return lse::SelectionMatrix<double>::from_rows(n, rows);
  }
  if (spec.rfind("file:", 0) == 0) {
    lse::Matrix<double> l = lse::read_matrix_market(spec.substr(5));
    if (l.cols() != n) {
      throw lse::ParseError("selection file is " + std::to_string(l.rows()) + "x" +
                            std::to_string(l.cols()) + " but the problem has n = " +
                            std::to_string(n) + " unknowns");
    }
    return lse::SelectionMatrix<double>(std::move(l));
  }
  throw lse::ParseError("selection '" + spec +
                        "': expected identity, rows:i,j,..., or file:path");
}

lse::B2Mode parse_b2(const std::string& name) {
  for (lse::B2Mode mode : {lse::B2Mode::Spread, lse::B2Mode::E2, lse::B2Mode::E4,
                           lse::B2Mode::E5, lse::B2Mode::E6, lse::B2Mode::E8}) {
    if (lse::to_string(mode) == name) return mode;
  }
  throw lse::ParseError("unknown residual direction '" + name + "'");
}

template <class Report>
std::string render(const Report& report, const std::string& format) {
  if (format == "json") return lse::to_json(report).dump(2) + "\n";
  if (format == "csv") return lse::to_csv(report);
  return lse::to_table(report);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

void add_problem_options(CLI::App* sub, ProblemPaths& paths) {
  sub->add_option("--A", paths.a, "matrix A (MatrixMarket)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--C", paths.c, "constraint matrix C (MatrixMarket)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--b", paths.b, "right-hand side b (MatrixMarket, one column)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--d", paths.d, "constraint values d (MatrixMarket, one column)")
      ->required()
      ->check(CLI::ExistingFile);
}

void add_format_options(CLI::App* sub, std::string& format, std::string& output) {
  sub->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  sub->add_option("-o,--output", output, "write the report to a file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "equality constrained least squares: solves min ||A x - b||_2 subject to "
      "C x = d and reports exact and estimated condition numbers of L x"};
  app.require_subcommand(1);

  ProblemPaths paths;
  std::string format = "table";
  std::string output;
  std::string selection = "identity";
  lse::NormWeights<double> weights;

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one problem");
  add_problem_options(solve_cmd, paths);
  add_format_options(solve_cmd, format, output);

  CLI::App* cond_cmd =
      app.add_subcommand("cond", "exact condition numbers of the solution map");
  add_problem_options(cond_cmd, paths);
  add_format_options(cond_cmd, format, output);
  cond_cmd->add_option("--L", selection, "selection of solution components");
  cond_cmd->add_option("--alpha-A", weights.alpha_A, "weight of ||A||_F in kappa_2");
  cond_cmd->add_option("--alpha-C", weights.alpha_C, "weight of ||C||_F in kappa_2");
  cond_cmd->add_option("--alpha-b", weights.alpha_b, "weight of ||b||_2 in kappa_2");
  cond_cmd->add_option("--alpha-d", weights.alpha_d, "weight of ||d||_2 in kappa_2");

  CLI::App* estimate_cmd = app.add_subcommand(
      "estimate", "estimated upper bounds with per-term breakdown");
  add_problem_options(estimate_cmd, paths);
  add_format_options(estimate_cmd, format, output);
  estimate_cmd->add_option("--L", selection, "selection of solution components");

  std::vector<double> etas{1e-3, 1e-6};
  std::vector<double> deltas{1e-3, 1e-6};
  std::vector<std::string> selection_specs{"identity", "rows:1,2,3", "rows:4"};
  double magnitude = 1e-8;
  int trials = 100;
  std::uint64_t seed = 42;
  std::string b2 = "spread";

  CLI::App* experiment_cmd = app.add_subcommand(
      "experiment", "perturbation study of the built-in ill-conditioned family");
  add_format_options(experiment_cmd, format, output);
  experiment_cmd->add_option("--eta", etas, "values of eta (x_4 = 1/eta)")
      ->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--delta", deltas, "small singular values of A")
      ->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--L", selection_specs, "selections to report");
  experiment_cmd->add_option("--magnitude", magnitude, "componentwise perturbation size")
      ->check(CLI::NonNegativeNumber);
  experiment_cmd->add_option("--trials", trials, "perturbations per configuration")
      ->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--seed", seed, "random seed")->envname("LSE_COND_SEED");
  experiment_cmd->add_option("--b2", b2, "direction of the residual component of b")
      ->check(CLI::IsMember({"spread", "e2", "e4", "e5", "e6", "e8"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    if (app.got_subcommand(solve_cmd)) {
      lse::LseProblem<double> problem = load_problem(paths);
      emit(render(lse::make_solve_report(problem, lse::solve(problem)), format), output);
    } else if (app.got_subcommand(cond_cmd)) {
      lse::LseProblem<double> problem = load_problem(paths);
      lse::SelectionMatrix<double> l = parse_selection(selection, problem.n());
      emit(render(lse::make_condition_report(lse::solve(problem), l, weights), format),
           output);
    } else if (app.got_subcommand(estimate_cmd)) {
      lse::LseProblem<double> problem = load_problem(paths);
      lse::SelectionMatrix<double> l = parse_selection(selection, problem.n());
      emit(render(lse::make_estimate_report(lse::solve(problem), l), format), output);
    } else {
      std::vector<lse::TestProblemConfig<double>> configs;
      for (double eta : etas) {
        for (double delta : deltas) {
          configs.push_back({eta, delta, parse_b2(b2)});
        }
      }
      std::vector<lse::LabeledSelection<double>> selections;
      for (const std::string& spec : selection_specs) {
        selections.push_back({spec, parse_selection(spec, 4)});
      }
      emit(render(lse::run_experiment(configs, selections, magnitude, trials, seed),
                  format),
           output);
    }
  } catch (const lse::RankError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lse::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
