#include "gmee/sample_window.hpp"

#include "gmee/error.hpp"

namespace gmee {

SampleWindow::SampleWindow(std::size_t order, std::size_t capacity)
    : capacity_(capacity),
      inputs_(static_cast<Eigen::Index>(order), static_cast<Eigen::Index>(capacity)),
      desired_(capacity, 0.0) {
  if (order == 0 || capacity == 0) {
    throw InvalidParameter("SampleWindow: order and capacity must be positive");
  }
  inputs_.setZero();
}

void SampleWindow::push(const Eigen::Ref<const Eigen::VectorXd>& u, double d) {
  if (u.size() != inputs_.rows()) {
    throw DimensionMismatch("SampleWindow::push: input has " + std::to_string(u.size()) +
                            " entries, window order is " + std::to_string(inputs_.rows()));
  }
  std::size_t target;
  if (size_ < capacity_) {
    target = slot(size_);
    ++size_;
  } else {
    target = head_;
    head_ = (head_ + 1) % capacity_;
  }
  inputs_.col(static_cast<Eigen::Index>(target)) = u;
  desired_[target] = d;
}

void SampleWindow::clear() noexcept {
  head_ = 0;
  size_ = 0;
}

void SampleWindow::errors(const Eigen::VectorXd& w, std::vector<double>& out,
                          OpCounts* counter) const {
  if (w.size() != inputs_.rows()) {
    throw DimensionMismatch("SampleWindow::errors: weight length differs from window order");
  }
  out.resize(size_);
  for (std::size_t k = 0; k < size_; ++k) {
    out[k] = desired(k) - w.dot(input(k));
  }
  if (counter != nullptr) {
    const auto m = static_cast<std::uint64_t>(order());
    counter->multiplications += size_ * m;
    counter->additions += size_ * m;
  }
}

}  // namespace gmee
