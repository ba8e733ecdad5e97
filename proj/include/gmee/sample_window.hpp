#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "gmee/op_counts.hpp"

namespace gmee {

/// Sliding window of the most recent (input vector, desired sample) pairs,
/// oldest first. Pushing into a full window evicts the oldest pair.
class SampleWindow {
 public:
  SampleWindow(std::size_t order, std::size_t capacity);

  void push(const Eigen::Ref<const Eigen::VectorXd>& u, double d);
  void clear() noexcept;

  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t order() const noexcept { return static_cast<std::size_t>(inputs_.rows()); }
  bool full() const noexcept { return size_ == capacity_; }

  /// k = 0 is the oldest entry.
  auto input(std::size_t k) const { return inputs_.col(static_cast<Eigen::Index>(slot(k))); }
  double desired(std::size_t k) const { return desired_[slot(k)]; }

  /// e_k = d_k - w^T u_k for every entry, oldest first.
  void errors(const Eigen::VectorXd& w, std::vector<double>& out,
              OpCounts* counter = nullptr) const;

 private:
  std::size_t slot(std::size_t k) const noexcept { return (head_ + k) % capacity_; }

  std::size_t capacity_;
  Eigen::MatrixXd inputs_;
  std::vector<double> desired_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

}  // namespace gmee
