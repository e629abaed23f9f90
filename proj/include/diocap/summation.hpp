#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace diocap {

// Neumaier-compensated accumulator. merge() folds another accumulator in so
// that reduction trees keep the running compensation of both halves.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    comp_ += other.comp_;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Deterministic pairwise reduction: fixed-size leaves summed with compensation,
// then combined along a balanced binary tree. The tree shape depends only on
// values.size().
CompensatedSum pairwise_accumulate(std::span<const double> values);

inline double pairwise_sum(std::span<const double> values) {
  return pairwise_accumulate(values).value();
}

}  // namespace diocap
