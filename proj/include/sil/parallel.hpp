#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace sil {

// Worker count used when a checker is not told otherwise. 1 by default.
int default_jobs();
void set_default_jobs(int jobs);

// Runs fn(i) for i in [0, n) on up to `jobs` threads (0 = default_jobs()).
// Callers write results into per-index slots and merge in index order, which
// keeps output independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int jobs = 0);

// Soft memory cap from SIL_MAX_MEM (MiB). True once resident memory passes it.
bool memory_cap_exceeded();

// Permutation-group helpers. Elements are maps i -> p[i].
std::vector<std::vector<int>> generating_set(const std::vector<std::vector<int>>& group);
// Orbits of `points` (sorted, each a vector) under the given actions; returns
// for every point the index of the smallest point in its orbit.
std::vector<std::size_t> orbit_representatives(
    const std::vector<std::vector<int>>& points,
    const std::vector<std::function<std::vector<int>(const std::vector<int>&)>>& actions);

}  // namespace sil
