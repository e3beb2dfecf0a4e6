#ifndef MOBOPT_HYPERVOLUME_HPP
#define MOBOPT_HYPERVOLUME_HPP

#include <cstdint>
#include <vector>

namespace mobopt {

/// Exact hypervolume (minimization) of the region dominated by `front` and
/// bounded above by `ref`: the Lebesgue measure of the union of boxes
/// [p, ref]. Points not <= ref componentwise are dropped before computing.
/// Sort-and-sweep for 2 objectives, WFG-style recursive slicing for 3-4;
/// throws UnsupportedDimensionError above 4 (use hypervolume_mc there).
double hypervolume_exact(const std::vector<std::vector<double>>& front,
                         const std::vector<double>& ref);

/// Unbiased Monte-Carlo estimate: fraction of uniform samples in
/// [lower_bound, ref] dominated by some front point, times the box volume.
/// Requires lower_bound <= every front point componentwise and n_samples > 0.
double hypervolume_mc(const std::vector<std::vector<double>>& front,
                      const std::vector<double>& ref,
                      const std::vector<double>& lower_bound,
                      std::size_t n_samples,
                      std::uint64_t seed);

} // namespace mobopt

#endif
