#ifndef NSAC_REDUCE_HPP
#define NSAC_REDUCE_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nsac {

// Deterministic reductions. All sums use a fixed-shape pairwise tree so the
// result is independent of worker count and identical across runs.

double pairwise_sum(std::span<const double> a);

// Pairwise sum of a(i)*b(i) without materializing the product.
double pairwise_dot(std::span<const double> a, std::span<const double> b);

// Pairwise sum of f(i) over [0, n).
double pairwise_sum_fn(size_t n, const std::function<double(size_t)>& f);

// Worker count from NSAC_THREADS (>=1), read once.
int thread_count();

// Data-parallel loop over [0, n) split into disjoint contiguous chunks.
// fn(begin, end) must touch only its own output range.
void parallel_for(size_t n, const std::function<void(size_t, size_t)>& fn);

} // namespace nsac

#endif
