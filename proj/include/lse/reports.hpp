#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lse/lab.hpp"
#include "lse/matrix_market.hpp"

namespace lse {

using Json = nlohmann::ordered_json;

// JSON has no infinity literal; infinite values round-trip as a string.
inline Json json_number(double v) {
  if (std::isinf(v)) return Json(v > 0 ? "Infinity" : "-Infinity");
  return Json(v);
}

inline double number_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
    throw ParseError("unexpected numeric string '" + s + "'");
  }
  return j.get<double>();
}

inline std::string format_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

struct SolveReport {
  std::vector<double> x, r, lambda;
  double constraint_residual = 0;    // ||C x - d||_2
  double stationarity_residual = 0;  // ||A^T r + C^T lambda||_2
};

inline SolveReport make_solve_report(const LseProblem<double>& problem,
                                     const LseSolution<double>& sol) {
  SolveReport rep;
  rep.x.assign(sol.x.data(), sol.x.data() + sol.x.size());
  rep.r.assign(sol.r.data(), sol.r.data() + sol.r.size());
  rep.lambda.assign(sol.lambda.data(), sol.lambda.data() + sol.lambda.size());
  rep.constraint_residual = (problem.C() * sol.x - problem.d()).norm();
  rep.stationarity_residual =
      (problem.A().transpose() * sol.r + problem.C().transpose() * sol.lambda).norm();
  return rep;
}

inline Json to_json(const SolveReport& rep) {
  Json j;
  j["x"] = rep.x;
  j["r"] = rep.r;
  j["lambda"] = rep.lambda;
  j["checks"]["constraint_residual"] = json_number(rep.constraint_residual);
  j["checks"]["stationarity_residual"] = json_number(rep.stationarity_residual);
  return j;
}

inline SolveReport solve_report_from_json(const Json& j) {
  SolveReport rep;
  rep.x = j.at("x").get<std::vector<double>>();
  rep.r = j.at("r").get<std::vector<double>>();
  rep.lambda = j.at("lambda").get<std::vector<double>>();
  rep.constraint_residual = number_from_json(j.at("checks").at("constraint_residual"));
  rep.stationarity_residual = number_from_json(j.at("checks").at("stationarity_residual"));
  return rep;
}

struct ConditionReport {
  // exact
  double kappa_inf_rel = 0;
  double kappa_c = 0;
  bool kappa_c_infinite = false;
  double kappa_2_bound = 0;
  double kappa_1 = 0;
  double kappa_2 = 0;
  // estimated
  double kappa_inf_u = 0;
  double kappa_c_u = 0;
};

inline ConditionReport make_condition_report(const LseSolution<double>& sol,
                                             const SelectionMatrix<double>& l,
                                             const NormWeights<double>& weights = {}) {
  ConditionReport rep;
  rep.kappa_inf_rel = kappa_inf_rel(sol, l);
  ComponentwiseKappa<double> kc = kappa_c(sol, l);
  rep.kappa_c = kc.value;
  rep.kappa_c_infinite = kc.zero_component;
  rep.kappa_2_bound = kappa_2_bound(sol, l);
  rep.kappa_1 = kappa1_cox_higham(sol);
  rep.kappa_2 = kappa2_li_wang(sol, l, weights);
  rep.kappa_inf_u = kappa_inf_upper(sol, l).total;
  rep.kappa_c_u = kappa_c_upper(sol, l).total;
  return rep;
}

inline Json to_json(const ConditionReport& rep) {
  Json j;
  Json exact;
  exact["kappa_inf_rel"] = json_number(rep.kappa_inf_rel);
  exact["kappa_c"] = json_number(rep.kappa_c);
  exact["kappa_c_infinite"] = rep.kappa_c_infinite;
  exact["kappa_2_bound"] = json_number(rep.kappa_2_bound);
  exact["kappa_1"] = json_number(rep.kappa_1);
  exact["kappa_2"] = json_number(rep.kappa_2);
  Json estimated;
  estimated["kappa_inf_u"] = json_number(rep.kappa_inf_u);
  estimated["kappa_c_u"] = json_number(rep.kappa_c_u);
  j["exact"] = exact;
  j["estimated"] = estimated;
  return j;
}

inline ConditionReport condition_report_from_json(const Json& j) {
  ConditionReport rep;
  const Json& e = j.at("exact");
  rep.kappa_inf_rel = number_from_json(e.at("kappa_inf_rel"));
  rep.kappa_c = number_from_json(e.at("kappa_c"));
  rep.kappa_c_infinite = e.at("kappa_c_infinite").get<bool>();
  rep.kappa_2_bound = number_from_json(e.at("kappa_2_bound"));
  rep.kappa_1 = number_from_json(e.at("kappa_1"));
  rep.kappa_2 = number_from_json(e.at("kappa_2"));
  const Json& s = j.at("estimated");
  rep.kappa_inf_u = number_from_json(s.at("kappa_inf_u"));
  rep.kappa_c_u = number_from_json(s.at("kappa_c_u"));
  return rep;
}

struct EstimateReport {
  UpperBoundReport<double> inf_bound;
  UpperBoundReport<double> c_bound;
};

inline EstimateReport make_estimate_report(const LseSolution<double>& sol,
                                           const SelectionMatrix<double>& l) {
  return EstimateReport{kappa_inf_upper(sol, l), kappa_c_upper(sol, l)};
}

inline Json to_json(const UpperBoundReport<double>& rep) {
  Json j;
  j["total"] = json_number(rep.total);
  Json terms, iterations, applications;
  for (int t = 0; t < 6; ++t) {
    const std::string& name = upper_bound_term_names()[t];
    terms[name] = json_number(rep.terms[t]);
    iterations[name] = rep.iterations[t];
    applications[name] = rep.applications[t];
  }
  j["terms"] = terms;
  j["iterations"] = iterations;
  j["applications"] = applications;
  return j;
}

inline UpperBoundReport<double> upper_bound_report_from_json(const Json& j) {
  UpperBoundReport<double> rep;
  rep.total = number_from_json(j.at("total"));
  for (int t = 0; t < 6; ++t) {
    const std::string& name = upper_bound_term_names()[t];
    rep.terms[t] = number_from_json(j.at("terms").at(name));
    rep.iterations[t] = j.at("iterations").at(name).get<int>();
    rep.applications[t] = j.at("applications").at(name).get<int>();
  }
  return rep;
}

inline Json to_json(const EstimateReport& rep) {
  Json j;
  j["provenance"] = "estimated";
  j["kappa_inf_u"] = to_json(rep.inf_bound);
  j["kappa_c_u"] = to_json(rep.c_bound);
  return j;
}

inline EstimateReport estimate_report_from_json(const Json& j) {
  EstimateReport rep;
  rep.inf_bound = upper_bound_report_from_json(j.at("kappa_inf_u"));
  rep.c_bound = upper_bound_report_from_json(j.at("kappa_c_u"));
  return rep;
}

inline Json to_json(const ExperimentRow<double>& row) {
  Json j;
  j["eta"] = json_number(row.eta);
  j["delta"] = json_number(row.delta);
  j["selection"] = row.selection;
  j["cond_augmented"] = json_number(row.cond_augmented);
  j["eps0"] = json_number(row.eps0);
  j["eps1"] = json_number(row.eps1);
  j["eps2"] = json_number(row.eps2);
  j["r2"] = json_number(row.r2);
  j["rinf"] = json_number(row.rinf);
  j["rc"] = json_number(row.rc);
  j["r2_max"] = json_number(row.r2_max);
  j["rinf_max"] = json_number(row.rinf_max);
  j["rc_max"] = json_number(row.rc_max);
  j["r2_median"] = json_number(row.r2_median);
  j["rinf_median"] = json_number(row.rinf_median);
  j["rc_median"] = json_number(row.rc_median);
  j["eps0_max"] = json_number(row.eps0_max);
  j["eps2_max"] = json_number(row.eps2_max);
  j["kappa_inf_rel"] = json_number(row.kappa_inf_rel);
  j["kappa_c"] = json_number(row.kappa_c);
  j["kappa_inf_u"] = json_number(row.kappa_inf_u);
  j["kappa_c_u"] = json_number(row.kappa_c_u);
  j["kappa_1"] = json_number(row.kappa_1);
  j["kappa_2"] = json_number(row.kappa_2);
  j["bound_eps1_kappa1"] = json_number(row.bound_eps1_kappa1);
  j["bound_eps2_kappa2"] = json_number(row.bound_eps2_kappa2);
  j["bound_eps0_kappa_inf"] = json_number(row.bound_eps0_kappa_inf);
  j["bound_eps0_kappa_c"] = json_number(row.bound_eps0_kappa_c);
  j["trials"] = row.trials;
  j["seed"] = row.seed;
  return j;
}

inline ExperimentRow<double> experiment_row_from_json(const Json& j) {
  ExperimentRow<double> row{};
  row.eta = number_from_json(j.at("eta"));
  row.delta = number_from_json(j.at("delta"));
  row.selection = j.at("selection").get<std::string>();
  row.cond_augmented = number_from_json(j.at("cond_augmented"));
  row.eps0 = number_from_json(j.at("eps0"));
  row.eps1 = number_from_json(j.at("eps1"));
  row.eps2 = number_from_json(j.at("eps2"));
  row.r2 = number_from_json(j.at("r2"));
  row.rinf = number_from_json(j.at("rinf"));
  row.rc = number_from_json(j.at("rc"));
  row.r2_max = number_from_json(j.at("r2_max"));
  row.rinf_max = number_from_json(j.at("rinf_max"));
  row.rc_max = number_from_json(j.at("rc_max"));
  row.r2_median = number_from_json(j.at("r2_median"));
  row.rinf_median = number_from_json(j.at("rinf_median"));
  row.rc_median = number_from_json(j.at("rc_median"));
  row.eps0_max = number_from_json(j.at("eps0_max"));
  row.eps2_max = number_from_json(j.at("eps2_max"));
  row.kappa_inf_rel = number_from_json(j.at("kappa_inf_rel"));
  row.kappa_c = number_from_json(j.at("kappa_c"));
  row.kappa_inf_u = number_from_json(j.at("kappa_inf_u"));
  row.kappa_c_u = number_from_json(j.at("kappa_c_u"));
  row.kappa_1 = number_from_json(j.at("kappa_1"));
  row.kappa_2 = number_from_json(j.at("kappa_2"));
  row.bound_eps1_kappa1 = number_from_json(j.at("bound_eps1_kappa1"));
  row.bound_eps2_kappa2 = number_from_json(j.at("bound_eps2_kappa2"));
  row.bound_eps0_kappa_inf = number_from_json(j.at("bound_eps0_kappa_inf"));
  row.bound_eps0_kappa_c = number_from_json(j.at("bound_eps0_kappa_c"));
  row.trials = j.at("trials").get<int>();
  row.seed = j.at("seed").get<std::uint64_t>();
  return row;
}

inline Json to_json(const std::vector<ExperimentRow<double>>& rows) {
  Json j = Json::array();
  for (const auto& row : rows) j.push_back(to_json(row));
  return j;
}

// ---- CSV ----

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string to_csv(const SolveReport& rep) {
  std::ostringstream out;
  out << "field,index,value\n";
  for (std::size_t i = 0; i < rep.x.size(); ++i)
    out << "x," << i + 1 << "," << format_sig(rep.x[i], 17) << "\n";
  for (std::size_t i = 0; i < rep.r.size(); ++i)
    out << "r," << i + 1 << "," << format_sig(rep.r[i], 17) << "\n";
  for (std::size_t i = 0; i < rep.lambda.size(); ++i)
    out << "lambda," << i + 1 << "," << format_sig(rep.lambda[i], 17) << "\n";
  out << "constraint_residual,," << format_sig(rep.constraint_residual, 17) << "\n";
  out << "stationarity_residual,," << format_sig(rep.stationarity_residual, 17) << "\n";
  return out.str();
}

inline std::string to_csv(const ConditionReport& rep) {
  std::ostringstream out;
  out << "metric,value,provenance\n";
  out << "kappa_inf_rel," << format_sig(rep.kappa_inf_rel, 17) << ",exact\n";
  out << "kappa_c," << format_sig(rep.kappa_c, 17) << ",exact\n";
  out << "kappa_c_infinite," << (rep.kappa_c_infinite ? "true" : "false") << ",exact\n";
  out << "kappa_2_bound," << format_sig(rep.kappa_2_bound, 17) << ",exact\n";
  out << "kappa_1," << format_sig(rep.kappa_1, 17) << ",exact\n";
  out << "kappa_2," << format_sig(rep.kappa_2, 17) << ",exact\n";
  out << "kappa_inf_u," << format_sig(rep.kappa_inf_u, 17) << ",estimated\n";
  out << "kappa_c_u," << format_sig(rep.kappa_c_u, 17) << ",estimated\n";
  return out.str();
}

inline std::string to_csv(const EstimateReport& rep) {
  std::ostringstream out;
  out << "metric,term,value,iterations,applications\n";
  out << "kappa_inf_u,total," << format_sig(rep.inf_bound.total, 17) << ",,\n";
  for (int t = 0; t < 6; ++t) {
    out << "kappa_inf_u," << upper_bound_term_names()[t] << ","
        << format_sig(rep.inf_bound.terms[t], 17) << "," << rep.inf_bound.iterations[t]
        << "," << rep.inf_bound.applications[t] << "\n";
  }
  out << "kappa_c_u,total," << format_sig(rep.c_bound.total, 17) << ",,\n";
  for (int t = 0; t < 6; ++t) {
    out << "kappa_c_u," << upper_bound_term_names()[t] << ","
        << format_sig(rep.c_bound.terms[t], 17) << "," << rep.c_bound.iterations[t] << ","
        << rep.c_bound.applications[t] << "\n";
  }
  return out.str();
}

inline std::string to_csv(const std::vector<ExperimentRow<double>>& rows) {
  std::ostringstream out;
  out << "eta,delta,selection,cond_augmented,eps0,eps1,eps2,r2,rinf,rc,"
         "r2_max,rinf_max,rc_max,r2_median,rinf_median,rc_median,eps0_max,eps2_max,"
         "kappa_inf_rel,kappa_c,kappa_inf_u,kappa_c_u,kappa_1,kappa_2,"
         "bound_eps1_kappa1,bound_eps2_kappa2,bound_eps0_kappa_inf,bound_eps0_kappa_c,"
         "trials,seed\n";
  for (const auto& r : rows) {
    out << format_sig(r.eta, 17) << "," << format_sig(r.delta, 17) << ","
        << csv_escape(r.selection) << "," << format_sig(r.cond_augmented, 17) << ","
        << format_sig(r.eps0, 17) << "," << format_sig(r.eps1, 17) << ","
        << format_sig(r.eps2, 17) << "," << format_sig(r.r2, 17) << ","
        << format_sig(r.rinf, 17) << "," << format_sig(r.rc, 17) << ","
        << format_sig(r.r2_max, 17) << "," << format_sig(r.rinf_max, 17) << ","
        << format_sig(r.rc_max, 17) << "," << format_sig(r.r2_median, 17) << ","
        << format_sig(r.rinf_median, 17) << "," << format_sig(r.rc_median, 17) << ","
        << format_sig(r.eps0_max, 17) << "," << format_sig(r.eps2_max, 17) << ","
        << format_sig(r.kappa_inf_rel, 17) << "," << format_sig(r.kappa_c, 17) << ","
        << format_sig(r.kappa_inf_u, 17) << "," << format_sig(r.kappa_c_u, 17) << ","
        << format_sig(r.kappa_1, 17) << "," << format_sig(r.kappa_2, 17) << ","
        << format_sig(r.bound_eps1_kappa1, 17) << "," << format_sig(r.bound_eps2_kappa2, 17)
        << "," << format_sig(r.bound_eps0_kappa_inf, 17) << ","
        << format_sig(r.bound_eps0_kappa_c, 17) << "," << r.trials << "," << r.seed << "\n";
  }
  return out.str();
}

// ---- tables ----

inline std::string to_table(const SolveReport& rep) {
  std::ostringstream out;
  auto print_vec = [&out](const char* name, const std::vector<double>& v) {
    out << name << " = (";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ", ";
      out << format_sig(v[i], 12);
    }
    out << ")\n";
  };
  print_vec("x", rep.x);
  print_vec("r", rep.r);
  print_vec("lambda", rep.lambda);
  out << "||C x - d||_2         = " << format_sig(rep.constraint_residual, 12) << "\n";
  out << "||A^T r + C^T lambda||_2 = " << format_sig(rep.stationarity_residual, 12) << "\n";
  return out.str();
}

inline std::string to_table(const ConditionReport& rep) {
  std::ostringstream out;
  out << std::left;
  out << std::setw(16) << "metric" << std::setw(16) << "value" << "provenance\n";
  auto row = [&out](const char* name, double v, const char* prov) {
    out << std::setw(16) << name << std::setw(16) << format_sig(v, 6) << prov << "\n";
  };
  row("kappa_inf_rel", rep.kappa_inf_rel, "exact");
  row("kappa_c", rep.kappa_c, "exact");
  row("kappa_2_bound", rep.kappa_2_bound, "exact");
  row("kappa_1", rep.kappa_1, "exact");
  row("kappa_2", rep.kappa_2, "exact");
  row("kappa_inf_u", rep.kappa_inf_u, "estimated");
  row("kappa_c_u", rep.kappa_c_u, "estimated");
  if (rep.kappa_c_infinite) {
    out << "note: a selected component of L x is zero; kappa_c is infinite\n";
  }
  return out.str();
}

inline std::string to_table(const EstimateReport& rep) {
  std::ostringstream out;
  out << std::left;
  out << std::setw(14) << "bound" << std::setw(12) << "term" << std::setw(16) << "value"
      << std::setw(12) << "iterations" << "applications\n";
  auto block = [&out](const char* name, const UpperBoundReport<double>& b) {
    for (int t = 0; t < 6; ++t) {
      out << std::setw(14) << name << std::setw(12) << upper_bound_term_names()[t]
          << std::setw(16) << format_sig(b.terms[t], 6) << std::setw(12)
          << b.iterations[t] << b.applications[t] << "\n";
    }
    out << std::setw(14) << name << std::setw(12) << "total" << format_sig(b.total, 6)
        << "\n";
  };
  block("kappa_inf_u", rep.inf_bound);
  block("kappa_c_u", rep.c_bound);
  return out.str();
}

inline std::string to_table(const std::vector<ExperimentRow<double>>& rows) {
  std::ostringstream out;
  out << std::left;
  out << std::setw(9) << "eta" << std::setw(9) << "delta" << std::setw(12) << "selection"
      << std::setw(11) << "cond_aug" << std::setw(11) << "eps0" << std::setw(11) << "r2"
      << std::setw(11) << "rinf" << std::setw(11) << "rc" << std::setw(11) << "k_inf_rel"
      << std::setw(11) << "kappa_c" << std::setw(11) << "k_inf_u" << std::setw(11)
      << "kappa_c_u" << std::setw(11) << "kappa_1" << std::setw(11) << "kappa_2" << "\n";
  for (const auto& r : rows) {
    out << std::setw(9) << format_sig(r.eta, 3) << std::setw(9) << format_sig(r.delta, 3)
        << std::setw(12) << r.selection << std::setw(11) << format_sig(r.cond_augmented, 5)
        << std::setw(11) << format_sig(r.eps0, 3) << std::setw(11) << format_sig(r.r2, 3)
        << std::setw(11) << format_sig(r.rinf, 3) << std::setw(11) << format_sig(r.rc, 3)
        << std::setw(11) << format_sig(r.kappa_inf_rel, 5) << std::setw(11)
        << format_sig(r.kappa_c, 5) << std::setw(11) << format_sig(r.kappa_inf_u, 5)
        << std::setw(11) << format_sig(r.kappa_c_u, 5) << std::setw(11)
        << format_sig(r.kappa_1, 5) << std::setw(11) << format_sig(r.kappa_2, 5) << "\n";
  }
  return out.str();
}

}  // namespace lse
