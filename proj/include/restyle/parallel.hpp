#pragma once

#include <cstddef>
#include <vector>

namespace restyle {

/// Reduction over [0, n) that is bit-identical for any thread count:
/// fixed-size blocks are accumulated independently (each in index order)
/// and then combined serially in block order.
///
/// BlockFn: Acc(std::size_t begin, std::size_t end)
/// CombineFn: Acc(Acc, Acc)
template <class Acc, class BlockFn, class CombineFn>
Acc blocked_reduce(std::size_t n, Acc init, BlockFn block_fn, CombineFn combine,
                   std::size_t block_size = 8192) {
    if (n == 0) return init;
    const std::size_t nblocks = (n + block_size - 1) / block_size;
    std::vector<Acc> parts(nblocks, init);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * block_size;
        const std::size_t end = begin + block_size < n ? begin + block_size : n;
        parts[b] = block_fn(begin, end);
    }
    Acc total = init;
    for (std::size_t b = 0; b < nblocks; ++b) total = combine(total, parts[b]);
    return total;
}

}  // namespace restyle
