#include "sil/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <thread>
#include <unistd.h>

namespace sil {

namespace {
std::atomic<int> g_jobs{1};
}

int default_jobs() { return g_jobs.load(); }
void set_default_jobs(int jobs) { g_jobs.store(std::max(1, jobs)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int jobs) {
    if (jobs <= 0) jobs = default_jobs();
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    int k = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(jobs)));
    for (int t = 0; t < k; ++t)
        pool.emplace_back([&] {
            while (!failed) {
                std::size_t i = next++;
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

bool memory_cap_exceeded() {
    static const long cap_mib = [] {
        const char* v = std::getenv("SIL_MAX_MEM");
        return v ? std::atol(v) : 0L;
    }();
    if (cap_mib <= 0) return false;
    std::ifstream statm("/proc/self/statm");
    long pages = 0, resident = 0;
    if (!(statm >> pages >> resident)) return false;
    long mib = resident * (sysconf(_SC_PAGESIZE) / 1024) / 1024;
    return mib > cap_mib;
}

namespace {

std::vector<int> mul(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
    return c;
}

}  // namespace

std::vector<std::vector<int>> generating_set(const std::vector<std::vector<int>>& group) {
    std::vector<std::vector<int>> gens;
    if (group.empty()) return gens;
    std::set<std::vector<int>> sub;
    std::vector<int> id(group[0].size());
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
    sub.insert(id);
    for (auto& g : group) {
        if (sub.count(g)) continue;
        gens.push_back(g);
        std::vector<std::vector<int>> frontier(sub.begin(), sub.end());
        while (!frontier.empty()) {
            std::vector<std::vector<int>> next;
            for (auto& x : frontier)
                for (auto& h : gens) {
                    auto y = mul(x, h);
                    if (sub.insert(y).second) next.push_back(std::move(y));
                }
            frontier = std::move(next);
        }
    }
    return gens;
}

std::vector<std::size_t> orbit_representatives(
    const std::vector<std::vector<int>>& points,
    const std::vector<std::function<std::vector<int>(const std::vector<int>&)>>& actions) {
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < points.size(); ++i) index.emplace(points[i], i);
    const std::size_t none = points.size();
    std::vector<std::size_t> rep(points.size(), none);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (rep[i] != none) continue;
        std::vector<std::size_t> stack{i};
        rep[i] = i;
        std::vector<std::size_t> orbit{i};
        while (!stack.empty()) {
            std::size_t x = stack.back();
            stack.pop_back();
            for (auto& act : actions) {
                auto it = index.find(act(points[x]));
                if (it == index.end() || rep[it->second] != none) continue;
                rep[it->second] = i;
                orbit.push_back(it->second);
                stack.push_back(it->second);
            }
        }
        // Points are visited in input order, so i is the smallest only when
        // the input is sorted; normalise anyway.
        std::size_t best = i;
        for (auto j : orbit)
            if (points[j] < points[best]) best = j;
        for (auto j : orbit) rep[j] = best;
    }
    return rep;
}

}  // namespace sil
