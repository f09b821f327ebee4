#include <gtest/gtest.h>

#include <stdexcept>

#include "qplanar/connection.hpp"
#include "qplanar/execution.hpp"
#include "qplanar/planar.hpp"
#include "qplanar/random.hpp"
#include "qplanar/scenarios.hpp"

// Parallel kernels must reproduce the serial reference bit for bit.

using namespace qplanar;

TEST(ForEachIndex, RethrowsLowestFailingIndex) {
  for (Execution p : {Execution::serial, Execution::parallel}) {
    try {
      for_each_index(p, 50, [](std::size_t i) {
        if (i == 7 || i == 31) throw std::runtime_error(std::to_string(i));
      });
      FAIL();
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "7");
    }
  }
}

TEST(Kernels, PlanarityResidualSerialEqualsParallel) {
  Rng rng(61);
  const AStructure q = AStructure::quaternionic(2);
  const Connection w = Connection::weyl(QuatCovector::from_real(0.5 * rng.normal_vector(8)));
  const Curve c = integrate_planar_curve(Connection::flat(8), q, rng.normal_vector(8), rng.normal_vector(8),
                                         random_coefficient_curve(rng, 4, 0.5), 1.0, 1e-3);
  const PlanarityReport a = planarity_residual(w, q, c, Execution::serial);
  const PlanarityReport b = planarity_residual(w, q, c, Execution::parallel);
  EXPECT_EQ(a.residuals, b.residuals);
  EXPECT_EQ(a.max_residual, b.max_residual);
}

TEST(Kernels, GenericRankSerialEqualsParallel) {
  const AStructure q = AStructure::quaternionic(3);
  const GenericRankReport a = generic_rank_check(q, 64, 9, Execution::serial);
  const GenericRankReport b = generic_rank_check(q, 64, 9, Execution::parallel);
  EXPECT_EQ(a.fraction, b.fraction);
}

TEST(Kernels, DecomposeSerialEqualsParallel) {
  Rng rng(62);
  const AStructure q = AStructure::quaternionic(2);
  OneFormList alphas;
  for (int i = 0; i < 4; ++i) alphas.push_back(rng.normal_vector(8));
  DecomposeOptions s, p;
  s.policy = Execution::serial;
  p.policy = Execution::parallel;
  const Decomposition a = decompose_A1(make_A1(alphas, q), q, s);
  const Decomposition b = decompose_A1(make_A1(alphas, q), q, p);
  EXPECT_EQ(a.residual, b.residual);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(a.extracted_forms[i], b.extracted_forms[i]);
}

TEST(Kernels, MapCheckSerialEqualsParallel) {
  const AStructure q = AStructure::quaternionic(2);
  const Connection flat = Connection::flat(8);
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(8, 8);
  f(0, 1) = 0.3;
  CurveBatchSpec batch;
  batch.curves = 4;
  const MapCheckReport a = check_planar_map(PlanarMap::linear(f), flat, q, flat, q, batch, 5, 1e-4, Execution::serial);
  const MapCheckReport b = check_planar_map(PlanarMap::linear(f), flat, q, flat, q, batch, 5, 1e-4, Execution::parallel);
  EXPECT_EQ(a.image_residuals, b.image_residuals);
  EXPECT_EQ(a.verdict, b.verdict);
}

TEST(Kernels, ScenarioReportsDoNotDependOnPolicy) {
  ScenarioConfig cfg;
  cfg.scenario = "lem32";
  cfg.policy = Execution::serial;
  nlohmann::json a = run_scenario(cfg).to_json();
  cfg.policy = Execution::parallel;
  nlohmann::json b = run_scenario(cfg).to_json();
  a.erase("duration_seconds");
  b.erase("duration_seconds");
  EXPECT_EQ(a, b);
}
