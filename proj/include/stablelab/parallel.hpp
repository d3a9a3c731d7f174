#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace stablelab {

/// Worker count: STABLELAB_THREADS if set and positive, otherwise the
/// number of hardware threads.
std::size_t thread_count();

/// Runs body(i) for i in [0, n) over thread_count() workers in contiguous
/// chunks. The body must only write to per-index state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Neumaier-compensated sum in index order.
double compensated_sum(std::span<const double> values);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

/// Sample mean and its standard error (sample std / sqrt(n)).
MeanSe mean_and_se(std::span<const double> values);

}  // namespace stablelab
