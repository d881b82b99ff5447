#include "nsac/reduce.hpp"

#include <cstdlib>
#include <thread>

namespace nsac {

namespace {
constexpr size_t kLeaf = 64;

double sum_range(std::span<const double> a, size_t lo, size_t hi) {
    if (hi - lo <= kLeaf) {
        double s = 0.0;
        for (size_t i = lo; i < hi; ++i) s += a[i];
        return s;
    }
    size_t mid = lo + (hi - lo) / 2;
    return sum_range(a, lo, mid) + sum_range(a, mid, hi);
}

double dot_range(std::span<const double> a, std::span<const double> b, size_t lo, size_t hi) {
    if (hi - lo <= kLeaf) {
        double s = 0.0;
        for (size_t i = lo; i < hi; ++i) s += a[i] * b[i];
        return s;
    }
    size_t mid = lo + (hi - lo) / 2;
    return dot_range(a, b, lo, mid) + dot_range(a, b, mid, hi);
}

double fn_range(size_t lo, size_t hi, const std::function<double(size_t)>& f) {
    if (hi - lo <= kLeaf) {
        double s = 0.0;
        for (size_t i = lo; i < hi; ++i) s += f(i);
        return s;
    }
    size_t mid = lo + (hi - lo) / 2;
    return fn_range(lo, mid, f) + fn_range(mid, hi, f);
}
} // namespace

double pairwise_sum(std::span<const double> a) {
    return a.empty() ? 0.0 : sum_range(a, 0, a.size());
}

double pairwise_dot(std::span<const double> a, std::span<const double> b) {
    return a.empty() ? 0.0 : dot_range(a, b, 0, a.size());
}

double pairwise_sum_fn(size_t n, const std::function<double(size_t)>& f) {
    return n == 0 ? 0.0 : fn_range(0, n, f);
}

int thread_count() {
    static const int n = [] {
        const char* env = std::getenv("NSAC_THREADS");
        if (!env) return 1;
        int v = std::atoi(env);
        return v >= 1 ? v : 1;
    }();
    return n;
}

void parallel_for(size_t n, const std::function<void(size_t, size_t)>& fn) {
    const int nt = thread_count();
    if (nt <= 1 || n < 2048) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    size_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        size_t lo = t * chunk;
        size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

} // namespace nsac
