#include "weave/ipr/sampling.hpp"

#include <limits>
#include <numeric>
#include <vector>

namespace weave::ipr {

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = kMax - (kMax % bound + 1) % bound;  // largest multiple of bound, minus one
    std::uint64_t x;
    do {
        x = rng();
    } while (x > limit);
    return x % bound;
}

eval::Dataset sample_examples(const eval::Dataset& dataset, std::size_t n, std::uint64_t seed) {
    if (n > dataset.size()) {
        throw SampleError("sample size " + std::to_string(n) + " exceeds dataset size " + std::to_string(dataset.size()));
    }
    std::vector<std::size_t> idx(dataset.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    eval::Dataset out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = i + bounded_draw(rng, idx.size() - i);
        std::swap(idx[i], idx[j]);
        out.push_back(dataset[idx[i]]);
    }
    return out;
}

}  // namespace weave::ipr
