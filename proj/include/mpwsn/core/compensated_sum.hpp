#pragma once

#include <cmath>
#include <iterator>
#include <type_traits>

namespace mpwsn {

/// Neumaier-compensated running sum.
template <typename Scalar = double>
class CompensatedSum {
 public:
  CompensatedSum& operator+=(Scalar x) {
    const Scalar t = sum_ + x;
    using std::abs;
    if (abs(sum_) >= abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  Scalar value() const { return sum_ + carry_; }

 private:
  Scalar sum_{0};
  Scalar carry_{0};
};

template <typename Range>
auto compensated_sum(const Range& values) {
  using Scalar = std::decay_t<decltype(*std::begin(values))>;
  CompensatedSum<Scalar> acc;
  for (const auto& v : values) acc += v;
  return acc.value();
}

}  // namespace mpwsn
