#include "hsplab/corpus.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace hsplab {

std::string CorpusSample::describe() const {
    std::ostringstream os;
    os.precision(6);
    os << "bumps[";
    for (std::size_t k = 0; k < bumps.size(); ++k) {
        if (k) os << "; ";
        os << "c=" << bumps[k].center << " w=" << bumps[k].width << " a=" << bumps[k].amplitude;
    }
    os << "]";
    return os.str();
}

std::vector<CorpusSample> random_corpus(const GridPtr& grid, std::size_t count,
                                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    };
    std::vector<CorpusSample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        CorpusSample s;
        const auto k = 3 + static_cast<std::size_t>(rng() % 4);
        for (std::size_t b = 0; b < k; ++b) {
            Bump bump;
            bump.center = uniform(0.0, 0.5 * grid->r_max);
            bump.width = uniform(0.2, 3.0);
            bump.amplitude = uniform(-2.0, 2.0);
            s.bumps.push_back(bump);
        }
        s.field = RadialField::sample(grid, [&](double r) {
            double v = 0.0;
            for (const auto& bump : s.bumps) {
                const double x = (r - bump.center) / bump.width;
                v += bump.amplitude * std::exp(-x * x);
            }
            return v;
        });
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace hsplab
