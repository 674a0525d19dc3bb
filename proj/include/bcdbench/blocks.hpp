#pragma once

#include <Eigen/Core>

#include <memory>
#include <vector>

namespace bcd {

// Disjoint, covering assignment of the coordinates [0, N) to n >= 2 ordered
// blocks. The last block is the one solvers minimize exactly; it is the only
// block allowed to be empty (an empty last block recovers plain randomized /
// accelerated coordinate descent behavior).
class BlockPartition {
 public:
  BlockPartition(int n_coords, std::vector<std::vector<int>> blocks);

  // Sorts coordinates ascending by their individual smoothness (stable, ties
  // by index) and groups consecutive runs of block_size, so the final block
  // holds the largest parameters. The final block absorbs the remainder when
  // block_size does not divide the coordinate count.
  static BlockPartition by_sorted_smoothness(const Eigen::VectorXd& coord_smoothness,
                                             int block_size);

  int n_coords() const { return n_coords_; }
  int n_blocks() const { return static_cast<int>(blocks_.size()); }
  const std::vector<int>& block(int i) const;
  int block_size(int i) const { return static_cast<int>(block(i).size()); }
  int last_block() const { return n_blocks() - 1; }
  bool last_block_empty() const { return blocks_.back().empty(); }
  int n_nonempty_blocks() const;
  // Number of coordinates in blocks 0..n-2 (everything the samplers can touch).
  int sampled_coords() const { return n_coords_ - block_size(last_block()); }

  // Copy of this partition with an empty exact block appended.
  BlockPartition with_empty_last() const;

  bool operator==(const BlockPartition& other) const;

 private:
  void check_block_index(int i) const;

  int n_coords_;
  std::vector<std::vector<int>> blocks_;
};

using PartitionPtr = std::shared_ptr<const BlockPartition>;

Eigen::VectorXd block_restrict(const BlockPartition& p, const Eigen::VectorXd& x, int i);
void block_scatter(const BlockPartition& p, Eigen::VectorXd& x, int i,
                   const Eigen::VectorXd& values);
double block_norm_sq(const BlockPartition& p, const Eigen::VectorXd& x, int i);

// Dense vector of length partition.n_coords() carrying its block structure.
struct BlockVector {
  BlockVector(PartitionPtr partition, Eigen::VectorXd values);

  Eigen::VectorXd block(int i) const { return block_restrict(*partition, values, i); }
  void set_block(int i, const Eigen::VectorXd& v) { block_scatter(*partition, values, i, v); }
  double block_norm_sq(int i) const { return bcd::block_norm_sq(*partition, values, i); }

  PartitionPtr partition;
  Eigen::VectorXd values;
};

}  // namespace bcd
