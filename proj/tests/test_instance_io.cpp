#include "npce/instance_io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "npce/probgen.hpp"

using npce::json;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::path(::testing::TempDir()) / name).string();
}

}  // namespace

TEST(InstanceIo, RoundTripIsExact) {
  npce::GenSpec spec;
  spec.n = 3;
  spec.m = 2;
  spec.seed = 4242;
  spec.planting = npce::Planting::Boundary;
  const npce::Instance inst = npce::planted_instance(spec);
  const std::string path = temp_path("roundtrip.json");
  npce::save_instance(inst, path);
  const npce::Instance loaded = npce::load_instance(path);
  EXPECT_TRUE(loaded.eco.balance == inst.eco.balance);
  EXPECT_TRUE(loaded.eco.technology == inst.eco.technology);
  EXPECT_TRUE(loaded.ops.production_cost.matrix == inst.ops.production_cost.matrix);
  EXPECT_EQ(loaded.ops.production_cost.offset, inst.ops.production_cost.offset);
  EXPECT_TRUE(loaded.ops.consumption.matrix == inst.ops.consumption.matrix);
  EXPECT_EQ(loaded.ops.consumption.offset, inst.ops.consumption.offset);
  EXPECT_TRUE(loaded.ops.factor_supply.matrix == inst.ops.factor_supply.matrix);
  EXPECT_EQ(loaded.ops.factor_supply.offset, inst.ops.factor_supply.offset);
  ASSERT_TRUE(loaded.planted.has_value());
  EXPECT_EQ(loaded.planted->flatten(), inst.planted->flatten());
  EXPECT_EQ(loaded.meta.seed, inst.meta.seed);
  EXPECT_EQ(loaded.meta.generator_version, inst.meta.generator_version);

  // a second save of the loaded instance is byte-identical
  const std::string path2 = temp_path("roundtrip2.json");
  npce::save_instance(loaded, path2);
  std::ifstream f1(path), f2(path2);
  const std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  const std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  EXPECT_EQ(s1, s2);
}

TEST(InstanceIo, ResultJsonSchema) {
  const npce::Instance r1 = npce::reference::r1();
  npce::SolverConfig cfg;
  cfg.method = npce::Method::Pgp;
  cfg.tol = 1e-9;
  const npce::SolveResult res = npce::solve(r1.eco, r1.ops, cfg, r1.planted);
  const json j = npce::result_to_json(res, 1, 1);
  for (const char* key :
       {"final", "iterations", "converged", "step_used", "certificate", "theoretical_q"})
    EXPECT_TRUE(j.contains(key)) << key;
  for (const char* key : {"x", "lambda", "v"}) EXPECT_TRUE(j["final"].contains(key)) << key;
  for (const char* key : {"feasibility_violation", "complementarity_gap", "budget_gap",
                          "natural_residual", "t0", "per_constraint"})
    EXPECT_TRUE(j["certificate"].contains(key)) << key;
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_NEAR(j["theoretical_q"].get<double>(), std::sqrt(5.0) / 3.0, 1e-9);
  EXPECT_EQ(j["certificate"]["per_constraint"].size(), 3u);
  EXPECT_EQ(j["certificate"]["per_constraint"][2]["label"], "v1");

  // delta = 0: theoretical_q is null but the key stays
  const npce::Instance r3 = npce::reference::r3();
  cfg.method = npce::Method::Epg;
  const json j3 = npce::result_to_json(npce::solve(r3.eco, r3.ops, cfg), 1, 1);
  EXPECT_TRUE(j3["theoretical_q"].is_null());
}

TEST(InstanceIo, RunLogCsvShape) {
  const npce::Instance r1 = npce::reference::r1();
  npce::SolverConfig cfg;
  cfg.method = npce::Method::Pgp;
  cfg.tol = 1e-9;
  const npce::SolveResult res = npce::solve(r1.eco, r1.ops, cfg, r1.planted);
  const std::string csv = npce::run_log_csv(res);
  std::istringstream in(csv);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line, "iter,natural_residual,dist_to_planted,step");
  size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(','), std::string::npos);
  }
  EXPECT_EQ(rows, res.residual_history.size());

  // no planted point: the distance field stays empty
  const npce::Instance r3 = npce::reference::r3();
  cfg.method = npce::Method::Epg;
  const npce::SolveResult mono = npce::solve(r3.eco, r3.ops, cfg);
  const std::string csv3 = npce::run_log_csv(mono);
  std::istringstream in3(csv3);
  std::getline(in3, line);
  ASSERT_TRUE(std::getline(in3, line));
  const size_t first = line.find(',');
  const size_t second = line.find(',', first + 1);
  const size_t third = line.find(',', second + 1);
  EXPECT_EQ(third, second + 1);  // empty dist column
}

TEST(InstanceIo, PointFiles) {
  const npce::Point p{{1.5}, {2.5}, {3.5}};
  const std::string path = temp_path("point.json");
  npce::save_point(p, path);
  const npce::Point q = npce::load_point(path, 1, 1);
  EXPECT_EQ(q.flatten(), p.flatten());
  EXPECT_THROW(npce::load_point(path, 2, 1), std::exception);
}

TEST(InstanceIo, MalformedFilesThrow) {
  const std::string path = temp_path("malformed.json");
  {
    std::ofstream out(path);
    out << "{\"n\": 1, \"m\": 1}";
  }
  EXPECT_THROW(npce::load_instance(path), std::exception);
  {
    std::ofstream out(path);
    out << "not json at all";
  }
  EXPECT_THROW(npce::load_instance(path), std::exception);
  // wrong matrix length
  {
    const npce::Instance r1 = npce::reference::r1();
    json j = npce::instance_to_json(r1);
    j["A"] = json::array({0.5, 0.5});
    std::ofstream out(path);
    out << j.dump();
  }
  EXPECT_THROW(npce::load_instance(path), std::exception);
  EXPECT_THROW(npce::load_instance(temp_path("does_not_exist.json")), std::exception);
}

TEST(InstanceIo, LoadRevalidatesEconomy) {
  const npce::Instance r1 = npce::reference::r1();
  json j = npce::instance_to_json(r1);
  j["A"] = json::array({1.5});  // not productive
  const std::string path = temp_path("bad_economy.json");
  {
    std::ofstream out(path);
    out << j.dump();
  }
  EXPECT_THROW(npce::load_instance(path), npce::NotProductive);
}
