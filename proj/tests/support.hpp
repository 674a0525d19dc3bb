#pragma once

// Shared instance builders for the test suites.

#include <memory>
#include <utility>
#include <vector>

#include "bcdbench/objective.hpp"
#include "bcdbench/rng.hpp"
#include "bcdbench/schedule.hpp"
#include "bcdbench/solvers.hpp"

namespace bcdtest {

inline bcd::PartitionPtr make_part(int n, std::vector<std::vector<int>> blocks) {
  return std::make_shared<bcd::BlockPartition>(n, std::move(blocks));
}

inline bcd::PartitionPtr unit_blocks(int n) {
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < n; ++i) blocks.push_back({i});
  return make_part(n, std::move(blocks));
}

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline Eigen::MatrixXd random_matrix(int m, int n, bcd::RngStream& rng) {
  Eigen::MatrixXd a(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) a(i, j) = rng.normal();
  return a;
}

inline Eigen::VectorXd random_vector(int n, bcd::RngStream& rng) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

struct QuadraticInstance {
  bcd::PartitionPtr partition;
  std::shared_ptr<bcd::QuadraticProblem> quadratic;
  std::shared_ptr<bcd::StructuredObjective> structured;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

inline QuadraticInstance random_quadratic(int rows, bcd::PartitionPtr partition, double lambda,
                                          bcd::RngStream& rng) {
  QuadraticInstance inst;
  inst.partition = partition;
  inst.a = random_matrix(rows, partition->n_coords(), rng);
  inst.b = random_vector(rows, rng);
  inst.quadratic = std::make_shared<bcd::QuadraticProblem>(inst.a, inst.b, lambda, partition);
  inst.structured = std::make_shared<bcd::StructuredObjective>(
      bcd::StructuredObjective::least_squares(inst.a, inst.b, lambda, partition));
  return inst;
}

// Theorem-4 regime-1 wiring: p ~ sqrt(L), sigma = (sum sqrt L)^2, ratio 1.
struct AcceleratedSetup {
  bcd::SamplingDistribution sampling;
  Eigen::VectorXd sigma;
  bcd::StepSchedule schedule;
};

inline AcceleratedSetup sqrt_lip_setup(const bcd::Objective& f) {
  auto sampling = bcd::SamplingDistribution::make(f.smoothness(), f.partition(),
                                                  bcd::SamplingMode::sqrt_lip);
  Eigen::VectorXd sigma = bcd::sigma_sqrt_lip(f.smoothness(), f.partition());
  auto schedule =
      bcd::StepSchedule::constant_ratio(bcd::theorem4_ratio(sigma, sampling, f.smoothness()));
  return {std::move(sampling), std::move(sigma), std::move(schedule)};
}

inline AcceleratedSetup uniform_setup(const bcd::Objective& f) {
  auto sampling =
      bcd::SamplingDistribution::make(f.smoothness(), f.partition(), bcd::SamplingMode::uniform);
  Eigen::VectorXd sigma = bcd::sigma_lipschitz(f.smoothness(), f.partition());
  auto schedule =
      bcd::StepSchedule::constant_ratio(bcd::theorem4_ratio(sigma, sampling, f.smoothness()));
  return {std::move(sampling), std::move(sigma), std::move(schedule)};
}

inline std::vector<long> every_iteration(long k) {
  std::vector<long> ks(static_cast<size_t>(k));
  for (long i = 1; i <= k; ++i) ks[static_cast<size_t>(i - 1)] = i;
  return ks;
}

}  // namespace bcdtest
