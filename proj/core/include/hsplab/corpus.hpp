#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsplab/grid.hpp"

namespace hsplab {

struct Bump {
    double center = 0.0;
    double width = 1.0;
    double amplitude = 1.0;
};

/// One randomized smooth radial field: sum_k a_k exp(-((r - c_k) / w_k)^2).
struct CorpusSample {
    std::vector<Bump> bumps;
    RadialField field;

    std::string describe() const;
};

inline constexpr std::uint64_t kDefaultCorpusSeed = 20240917;

/// `count` samples of 3-6 bumps with centers in [0, r_max / 2], widths in
/// [0.2, 3] and amplitudes in [-2, 2]. The draw is mt19937_64 mapped to
/// doubles by hand, so the corpus is identical across standard libraries.
std::vector<CorpusSample> random_corpus(const GridPtr& grid, std::size_t count,
                                        std::uint64_t seed = kDefaultCorpusSeed);

}  // namespace hsplab
