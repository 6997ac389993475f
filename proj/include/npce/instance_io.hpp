#pragma once

// File formats. Instances, points and results travel as JSON; per-iteration
// logs as CSV. Doubles are serialized as shortest-round-trip decimals (JSON)
// or with 17 significant digits (CSV), so load(save(x)) reproduces every
// number exactly.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "npce/instance.hpp"
#include "npce/solvers.hpp"

namespace npce {

using nlohmann::json;

namespace detail {

inline json matrix_to_json(const Matrix& m) { return json(m.data()); }

inline Matrix matrix_from_json(const json& j, int rows, int cols, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
    throw std::runtime_error(std::string(what) + ": expected " + std::to_string(rows * cols) +
                             " row-major entries");
  Matrix m(rows, cols);
  int k = 0;
  for (const auto& v : j) m.data()[k++] = v.get<double>();
  return m;
}

inline Vec vec_from_json(const json& j, int len, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != len)
    throw std::runtime_error(std::string(what) + ": expected " + std::to_string(len) + " entries");
  Vec out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(v.get<double>());
  return out;
}

inline json affine_to_json(const AffineOperator& op) {
  return json{{"matrix", matrix_to_json(op.matrix)}, {"offset", json(op.offset)}};
}

inline AffineOperator affine_from_json(const json& j, int dim, const char* what) {
  AffineOperator op;
  op.matrix = matrix_from_json(j.at("matrix"), dim, dim, what);
  op.offset = vec_from_json(j.at("offset"), dim, what);
  return op;
}

inline std::string format17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline json point_to_json(const Point& p) {
  return json{{"x", json(p.x)}, {"lambda", json(p.lambda)}, {"v", json(p.v)}};
}

inline Point point_from_json(const json& j, int n, int m) {
  Point p;
  p.x = detail::vec_from_json(j.at("x"), n, "point x");
  p.lambda = detail::vec_from_json(j.at("lambda"), n, "point lambda");
  p.v = detail::vec_from_json(j.at("v"), m, "point v");
  return p;
}

inline json instance_to_json(const Instance& inst) {
  json j;
  j["n"] = inst.eco.n;
  j["m"] = inst.eco.m;
  j["A"] = detail::matrix_to_json(inst.eco.balance);
  j["B"] = detail::matrix_to_json(inst.eco.technology);
  j["p"] = detail::affine_to_json(inst.ops.production_cost);
  j["c"] = detail::affine_to_json(inst.ops.consumption);
  j["r"] = detail::affine_to_json(inst.ops.factor_supply);
  if (inst.planted) j["planted"] = point_to_json(*inst.planted);
  json meta;
  if (inst.meta.seed) meta["seed"] = *inst.meta.seed;
  if (!inst.meta.generator_version.empty()) meta["generator-version"] = inst.meta.generator_version;
  if (!inst.meta.notes.empty()) meta["notes"] = inst.meta.notes;
  if (!meta.empty()) j["meta"] = meta;
  return j;
}

inline Instance instance_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  const int m = j.at("m").get<int>();
  if (n < 1 || m < 1) throw std::runtime_error("instance: n and m must be positive");
  Instance inst;
  const Matrix a = detail::matrix_from_json(j.at("A"), n, n, "A");
  const Matrix b = detail::matrix_from_json(j.at("B"), m, n, "B");
  inst.eco = validate_economy(a, b);
  inst.ops.production_cost = detail::affine_from_json(j.at("p"), n, "p");
  inst.ops.consumption = detail::affine_from_json(j.at("c"), n, "c");
  inst.ops.factor_supply = detail::affine_from_json(j.at("r"), m, "r");
  if (j.contains("planted")) inst.planted = point_from_json(j.at("planted"), n, m);
  if (j.contains("meta")) {
    const json& meta = j.at("meta");
    if (meta.contains("seed")) inst.meta.seed = meta.at("seed").get<std::uint64_t>();
    if (meta.contains("generator-version"))
      inst.meta.generator_version = meta.at("generator-version").get<std::string>();
    if (meta.contains("notes")) inst.meta.notes = meta.at("notes").get<std::string>();
  }
  return inst;
}

inline void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return json::parse(in);
}

inline void save_instance(const Instance& inst, const std::string& path) {
  save_json(instance_to_json(inst), path);
}

inline Instance load_instance(const std::string& path) {
  return instance_from_json(load_json(path));
}

inline void save_point(const Point& p, const std::string& path) {
  save_json(point_to_json(p), path);
}

inline Point load_point(const std::string& path, int n, int m) {
  return point_from_json(load_json(path), n, m);
}

inline json certificate_to_json(const Certificate& cert, int n, int /*m*/) {
  json rows = json::array();
  for (const auto& row : cert.per_constraint) {
    std::string label;
    if (row.index < n)
      label = "x" + std::to_string(row.index + 1);
    else if (row.index < 2 * n)
      label = "lambda" + std::to_string(row.index - n + 1);
    else
      label = "v" + std::to_string(row.index - 2 * n + 1);
    rows.push_back(json{{"index", row.index},
                        {"label", label},
                        {"slack", row.slack},
                        {"multiplier", row.multiplier},
                        {"product", row.product}});
  }
  return json{{"feasibility_violation", cert.feasibility_violation},
              {"complementarity_gap", cert.complementarity_gap},
              {"budget_gap", cert.budget_gap},
              {"natural_residual", cert.natural_residual},
              {"t0", cert.reference_step},
              {"per_constraint", rows}};
}

inline json result_to_json(const SolveResult& res, int n, int m) {
  json j;
  j["final"] = point_to_json(res.final);
  j["iterations"] = res.iterations;
  j["converged"] = res.converged;
  j["step_used"] = res.step_used;
  j["certificate"] = certificate_to_json(res.certificate, n, m);
  j["theoretical_q"] = res.theoretical_ratio ? json(*res.theoretical_ratio) : json(nullptr);
  return j;
}

// CSV log: one row per recorded iteration; the distance column stays empty
// when the instance carries no planted point.
inline std::string run_log_csv(const SolveResult& res) {
  std::ostringstream out;
  out << "iter,natural_residual,dist_to_planted,step\n";
  for (const auto& s : res.residual_history) {
    out << s.iter << ',' << detail::format17(s.residual) << ',';
    if (s.dist_to_reference) out << detail::format17(*s.dist_to_reference);
    out << ',' << detail::format17(res.step_used) << '\n';
  }
  return out.str();
}

inline void save_text(const std::string& text, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

}  // namespace npce
