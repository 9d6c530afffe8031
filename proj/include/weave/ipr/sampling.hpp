#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "weave/eval/dataset.hpp"

namespace weave::ipr {

class SampleError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Uniform draw in [0, bound) from a 64-bit Mersenne Twister by rejection of the
/// biased top range. Unlike std::uniform_int_distribution the result is fixed
/// across standard library implementations.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound);

/// Uniform sample of `n` pairs without replacement: the first n steps of a
/// Fisher-Yates shuffle over dataset indices, driven by mt19937_64(seed) and
/// bounded_draw. Output is in draw order.
eval::Dataset sample_examples(const eval::Dataset& dataset, std::size_t n, std::uint64_t seed);

}  // namespace weave::ipr
