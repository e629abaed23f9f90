#include "diocap/summation.hpp"

namespace diocap {
namespace {

constexpr std::size_t kLeaf = 64;

CompensatedSum reduce(std::span<const double> values) {
  if (values.size() <= kLeaf) {
    CompensatedSum acc;
    for (double v : values) acc.add(v);
    return acc;
  }
  const std::size_t half = values.size() / 2;
  CompensatedSum left = reduce(values.first(half));
  left.merge(reduce(values.subspan(half)));
  return left;
}

}  // namespace

CompensatedSum pairwise_accumulate(std::span<const double> values) { return reduce(values); }

}  // namespace diocap
