#include "bcdbench/blocks.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bcd {

BlockPartition::BlockPartition(int n_coords, std::vector<std::vector<int>> blocks)
    : n_coords_(n_coords), blocks_(std::move(blocks)) {
  if (n_coords_ <= 0) throw std::invalid_argument("partition: n_coords must be positive");
  if (blocks_.size() < 2) throw std::invalid_argument("partition: need at least two blocks");

  std::vector<int> owner(static_cast<size_t>(n_coords_), -1);
  for (size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].empty() && i + 1 != blocks_.size())
      throw std::invalid_argument("partition: block " + std::to_string(i) +
                                  " is empty (only the last block may be empty)");
    for (int c : blocks_[i]) {
      if (c < 0 || c >= n_coords_)
        throw std::invalid_argument("partition: coordinate " + std::to_string(c) +
                                    " out of range [0, " + std::to_string(n_coords_) + ")");
      if (owner[static_cast<size_t>(c)] >= 0)
        throw std::invalid_argument("partition: coordinate " + std::to_string(c) +
                                    " in two blocks");
      owner[static_cast<size_t>(c)] = static_cast<int>(i);
    }
  }
  for (int c = 0; c < n_coords_; ++c) {
    if (owner[static_cast<size_t>(c)] < 0)
      throw std::invalid_argument("partition: coordinate " + std::to_string(c) + " unassigned");
  }
}

BlockPartition BlockPartition::by_sorted_smoothness(const Eigen::VectorXd& coord_smoothness,
                                                    int block_size) {
  const int n = static_cast<int>(coord_smoothness.size());
  if (block_size <= 0) throw std::invalid_argument("by_sorted_smoothness: block_size must be positive");
  const int n_full = n / block_size;
  if (n_full < 2)
    throw std::invalid_argument(
        "by_sorted_smoothness: block_size too large, cannot form two blocks");

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return coord_smoothness[a] < coord_smoothness[b];
  });

  // n_full blocks of block_size; the last one absorbs the remainder.
  std::vector<std::vector<int>> blocks(static_cast<size_t>(n_full));
  for (int j = 0; j < n; ++j) {
    const int b = std::min(j / block_size, n_full - 1);
    blocks[static_cast<size_t>(b)].push_back(order[static_cast<size_t>(j)]);
  }
  return BlockPartition(n, std::move(blocks));
}

const std::vector<int>& BlockPartition::block(int i) const {
  check_block_index(i);
  return blocks_[static_cast<size_t>(i)];
}

int BlockPartition::n_nonempty_blocks() const {
  int c = 0;
  for (const auto& b : blocks_)
    if (!b.empty()) ++c;
  return c;
}

BlockPartition BlockPartition::with_empty_last() const {
  if (last_block_empty())
    throw std::invalid_argument("with_empty_last: last block is already empty");
  auto blocks = blocks_;
  blocks.emplace_back();
  return BlockPartition(n_coords_, std::move(blocks));
}

bool BlockPartition::operator==(const BlockPartition& other) const {
  return n_coords_ == other.n_coords_ && blocks_ == other.blocks_;
}

void BlockPartition::check_block_index(int i) const {
  if (i < 0 || i >= n_blocks())
    throw std::out_of_range("block index " + std::to_string(i) + " out of range [0, " +
                            std::to_string(n_blocks()) + ")");
}

Eigen::VectorXd block_restrict(const BlockPartition& p, const Eigen::VectorXd& x, int i) {
  const auto& idx = p.block(i);
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (size_t j = 0; j < idx.size(); ++j) out[static_cast<Eigen::Index>(j)] = x[idx[j]];
  return out;
}

void block_scatter(const BlockPartition& p, Eigen::VectorXd& x, int i,
                   const Eigen::VectorXd& values) {
  const auto& idx = p.block(i);
  if (values.size() != static_cast<Eigen::Index>(idx.size()))
    throw std::invalid_argument("block_scatter: value length does not match block size");
  for (size_t j = 0; j < idx.size(); ++j) x[idx[j]] = values[static_cast<Eigen::Index>(j)];
}

double block_norm_sq(const BlockPartition& p, const Eigen::VectorXd& x, int i) {
  const auto& idx = p.block(i);
  double s = 0;
  for (int c : idx) s += x[c] * x[c];
  return s;
}

BlockVector::BlockVector(PartitionPtr part, Eigen::VectorXd vals)
    : partition(std::move(part)), values(std::move(vals)) {
  if (!partition) throw std::invalid_argument("BlockVector: null partition");
  if (values.size() != partition->n_coords())
    throw std::invalid_argument("BlockVector: length " + std::to_string(values.size()) +
                                " does not match partition n_coords " +
                                std::to_string(partition->n_coords()));
}

}  // namespace bcd
