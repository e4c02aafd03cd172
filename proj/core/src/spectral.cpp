#include "hsplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "hsplab/bessel.hpp"
#include "hsplab/errors.hpp"
#include "hsplab/lorentz.hpp"

namespace hsplab {

namespace {

// Kernel matrices K(rho_k r_j), row-major in k. Built once per
// (d, grid spacing, frequency spacing) and shared between readers.
class KernelCache {
public:
    using Matrix = std::vector<double>;
    using Key = std::tuple<int, double, std::size_t, double, std::size_t>;

    static KernelCache& instance() {
        static KernelCache cache;
        return cache;
    }

    std::shared_ptr<const Matrix> get(const RadialGrid& grid, const FrequencyGrid& freqs) {
        const Key key{grid.d, grid.dr, grid.n, freqs.d_rho, freqs.count};
        const std::size_t entries = grid.n * freqs.count;
        std::lock_guard lock(mutex_);
        for (auto it = entries_.begin(); it != entries_.end(); ++it) {
            if (it->first == key) {
                entries_.splice(entries_.begin(), entries_, it);
                return entries_.front().second;
            }
        }
        auto m = build(grid, freqs);
        if (entries <= kMaxEntries) {
            entries_.emplace_front(key, m);
            if (entries_.size() > kMaxMatrices) entries_.pop_back();
        }
        return m;
    }

private:
    static constexpr std::size_t kMaxEntries = std::size_t{1} << 23;
    static constexpr std::size_t kMaxMatrices = 6;

    static std::shared_ptr<const Matrix> build(const RadialGrid& grid,
                                               const FrequencyGrid& freqs) {
        const RadialKernel kernel(grid.d);
        auto m = std::make_shared<Matrix>(grid.n * freqs.count);
        for (std::size_t k = 0; k < freqs.count; ++k) {
            double* row = m->data() + k * grid.n;
            const double rho = freqs.rho[k];
            for (std::size_t j = 0; j < grid.n; ++j) row[j] = kernel(rho * grid.nodes[j]);
        }
        return m;
    }

    std::mutex mutex_;
    std::list<std::pair<Key, std::shared_ptr<const Matrix>>> entries_;
};

void require_same_dimension(const RadialGrid& g, const FrequencyGrid& f) {
    if (g.d != f.d) throw ValidationError("spectral.d", "grid and frequency dimensions differ");
}

}  // namespace

FrequencyPtr make_frequencies(int d, double d_rho, std::size_t count) {
    if (!(d_rho > 0.0) || count == 0) {
        throw ValidationError("spectral.frequencies", "need positive spacing and count");
    }
    auto f = std::make_shared<FrequencyGrid>();
    f->d = d;
    f->surface_area =
        2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
    f->d_rho = d_rho;
    f->count = count;
    f->rho.resize(count);
    for (std::size_t k = 0; k < count; ++k) f->rho[k] = (static_cast<double>(k) + 0.5) * d_rho;
    return f;
}

FrequencyPtr dual_frequencies(const RadialGrid& grid) {
    return make_frequencies(grid.d, std::numbers::pi / grid.r_max, grid.n);
}

FrequencyPtr low_frequencies(int d, double upper, std::size_t count) {
    return make_frequencies(d, upper / static_cast<double>(count), count);
}

SpectralField::SpectralField(FrequencyPtr freqs, std::vector<double> values)
    : freqs_(std::move(freqs)), values_(std::move(values)) {
    if (!freqs_ || values_.size() != freqs_->count) {
        throw NumericalError("spectral field: sample count does not match frequency grid");
    }
    require_finite(values_, "spectral field");
}

SpectralField SpectralField::weighted(double power) const {
    std::vector<double> v(values_);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] *= std::pow(freqs_->rho[k], power);
    return SpectralField(freqs_, std::move(v));
}

SpectralField SpectralField::heat(double t) const {
    std::vector<double> v(values_);
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double rho = freqs_->rho[k];
        v[k] *= std::exp(-t * rho * rho);
    }
    return SpectralField(freqs_, std::move(v));
}

double SpectralField::l2_norm_sq() const {
    return ball_mass(std::numeric_limits<double>::infinity());
}

double SpectralField::ball_mass(double radius, double power) const {
    const auto& f = *freqs_;
    const double dd = f.d;
    double s = 0.0;
    for (std::size_t k = 0; k < f.count; ++k) {
        const double lo = static_cast<double>(k) * f.d_rho;
        if (lo >= radius) break;
        const double frac = std::min(1.0, (radius - lo) / f.d_rho);
        const double rho = f.rho[k];
        const double v = values_[k] * std::pow(rho, power);
        s += frac * v * v * std::pow(rho, dd - 1.0);
    }
    return s * f.surface_area * f.d_rho;
}

SpectralField hankel_transform(const RadialField& u, FrequencyPtr freqs) {
    const auto& g = u.grid();
    require_same_dimension(g, *freqs);
    const auto kernel = KernelCache::instance().get(g, *freqs);
    std::vector<double> weighted(g.n);
    for (std::size_t j = 0; j < g.n; ++j) weighted[j] = u[j] * g.weights[j] / g.surface_area;
    std::vector<double> out(freqs->count, 0.0);
    for (std::size_t k = 0; k < freqs->count; ++k) {
        const double* row = kernel->data() + k * g.n;
        double acc = 0.0;
        for (std::size_t j = 0; j < g.n; ++j) acc += row[j] * weighted[j];
        out[k] = acc;
    }
    return SpectralField(std::move(freqs), std::move(out));
}

SpectralField hankel_transform(const RadialField& u) {
    return hankel_transform(u, dual_frequencies(u.grid()));
}

RadialField inverse_hankel(const SpectralField& s, GridPtr grid) {
    const auto& f = s.frequencies();
    require_same_dimension(*grid, f);
    const auto kernel = KernelCache::instance().get(*grid, f);
    const double dd = f.d;
    std::vector<double> out(grid->n, 0.0);
    for (std::size_t k = 0; k < f.count; ++k) {
        const double c = s.values()[k] * std::pow(f.rho[k], dd - 1.0) * f.d_rho;
        if (c == 0.0) continue;
        const double* row = kernel->data() + k * grid->n;
        for (std::size_t j = 0; j < grid->n; ++j) out[j] += c * row[j];
    }
    return RadialField(std::move(grid), std::move(out));
}

RadialField heat_propagate(const RadialField& u, double t, FrequencyPtr freqs) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError("heat.t", "propagation time must be nonnegative");
    }
    return inverse_hankel(hankel_transform(u, std::move(freqs)).heat(t), u.grid_ptr());
}

RadialField heat_propagate(const RadialField& u, double t) {
    return heat_propagate(u, t, dual_frequencies(u.grid()));
}

LambdaResult apply_lambda(const RadialField& u, double power) {
    if (power != 1.0 && power != 2.0) {
        throw ValidationError("lambda.power", "only powers 1 and 2 are supported");
    }
    const auto s = hankel_transform(u).weighted(power);
    const double total = s.l2_norm_sq();
    const double top = total - s.ball_mass(0.9 * s.frequencies().upper());
    LambdaResult res{inverse_hankel(s, u.grid_ptr()), 0.0, false};
    res.tail_fraction = total > 0.0 ? top / total : 0.0;
    res.ill_conditioned = res.tail_fraction > 1e-4;
    return res;
}

DecayIndicator decay_indicator(const SpectralField& s, double r, double rho_cap) {
    const double dd = s.d();
    if (!(r > -0.5 * dd)) {
        throw ValidationError("decay_indicator.r", "r must exceed -d/2");
    }
    if (!(rho_cap > 0.0) || rho_cap > s.frequencies().upper()) {
        throw ValidationError("decay_indicator.rho_cap", "cap must lie inside the frequency band");
    }
    auto value_at = [&](double rho) {
        return std::pow(rho, -2.0 * r - dd) * s.ball_mass(rho);
    };
    DecayIndicator out;
    out.value = value_at(rho_cap);
    const double half = 0.5 * rho_cap;
    const double v_half = value_at(half);
    if (out.value > 0.0 && v_half > 0.0) {
        out.trend = std::log(out.value / v_half) / std::log(2.0);
    }
    out.diverging = out.trend < -0.5;
    out.vanishing = out.trend > 0.5 || out.value == 0.0;
    return out;
}

DecayCharacterEstimate estimate_decay_character(const SpectralField& s) {
    return estimate_decay_character(s, 4.0 * s.frequencies().d_rho, 0.2);
}

DecayCharacterEstimate estimate_decay_character(const SpectralField& s, double rho_lo,
                                                double rho_hi) {
    const auto& f = s.frequencies();
    const double dd = f.d;
    std::vector<double> xs;
    std::vector<double> ys;
    double cumulative = 0.0;
    bool degenerate = false;
    for (std::size_t k = 0; k < f.count; ++k) {
        const double rho = f.rho[k];
        const double v = s.values()[k];
        cumulative += v * v * std::pow(rho, dd - 1.0) * f.surface_area * f.d_rho;
        const double edge = static_cast<double>(k + 1) * f.d_rho;
        if (edge < rho_lo * (1.0 - 1e-12)) continue;
        if (edge > rho_hi * (1.0 + 1e-12)) break;
        if (cumulative <= 0.0) {
            degenerate = true;
            continue;
        }
        xs.push_back(std::log(edge));
        ys.push_back(std::log(cumulative));
    }
    if (xs.size() < 8) {
        throw ValidationError("decay_character.window",
                              "need at least 8 resolved frequencies in the fit window, have " +
                                  std::to_string(xs.size()));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (my + slope * (xs[i] - mx));
        rss += e * e;
    }
    DecayCharacterEstimate est;
    est.r_star = 0.5 * (slope - dd);
    est.fit_window = {rho_lo, rho_hi};
    est.fit_residual = std::sqrt(rss / n);
    est.samples = xs.size();
    const bool in_range = est.r_star > -0.5 * dd;
    est.p_r = in_range ? decay_indicator(s, est.r_star, rho_hi).value
                       : std::numeric_limits<double>::infinity();
    est.reliable = !degenerate && in_range && std::isfinite(est.fit_residual) &&
                   est.fit_residual <= 0.1;
    return est;
}

double lowfreq_h1_mass(const SpectralField& s, double radius) {
    if (!(radius >= 0.0)) throw ValidationError("lowfreq.radius", "radius must be nonnegative");
    return s.ball_mass(radius, 1.0);
}

bool smoothing_admissible(int d, LorentzIndex source, LorentzIndex target, double gamma) {
    const double inf = std::numeric_limits<double>::infinity();
    const double q1 = source.q, r1 = source.r, q2 = target.q, r2 = target.r;
    if (!(q1 >= 1.0) || !(q2 > 1.0) || !(r1 > 0.0) || !(r2 > 0.0) || gamma < 0.0) return false;
    const double a = 1.0 / q2;
    const double b = gamma / d + 1.0 / q1;
    if (!(0.0 <= a && a <= b && b <= 1.0)) return false;
    if ((b == 1.0 || q1 == 1.0) && r1 > 1.0) return false;
    if (q2 == inf && r2 != inf) return false;
    if (b == a && r1 > r2) return false;
    if (q1 == inf && r1 != inf) return false;
    return true;
}

double smoothing_l2_constant(const GridPtr& grid, double gamma) {
    if (!(gamma >= 0.0) || !(gamma < 0.5 * grid->d)) {
        throw ValidationError("smoothing.gamma", "need 0 <= gamma < d/2");
    }
    if (gamma == 0.0) return 1.0;
    const std::size_t n = grid->n;
    std::vector<double> weight(n);
    for (std::size_t j = 0; j < n; ++j) weight[j] = std::pow(grid->nodes[j], -gamma);
    auto norm = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += v[j] * v[j] * grid->weights[j];
        return std::sqrt(s);
    };
    const auto freqs = dual_frequencies(*grid);
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = std::exp(-grid->nodes[j] * grid->nodes[j]);
    double prev = 0.0;
    double c = 0.0;
    for (int it = 0; it < 500; ++it) {
        const double nv = norm(v);
        for (double& x : v) x /= nv;
        std::vector<double> w(n);
        for (std::size_t j = 0; j < n; ++j) w[j] = weight[j] * v[j];
        const auto spectrum = hankel_transform(RadialField(grid, w), freqs);
        c = std::sqrt(spectrum.heat(1.0).l2_norm_sq());
        if (std::abs(c - prev) <= 1e-10 * c) break;
        prev = c;
        const auto back = inverse_hankel(spectrum.heat(2.0), grid);
        for (std::size_t j = 0; j < n; ++j) v[j] = weight[j] * back[j];
    }
    return c;
}

SmoothingVerdict check_weighted_smoothing(const RadialField& g, std::span<const double> times,
                                          LorentzIndex source, LorentzIndex target,
                                          double gamma, double constant) {
    const int d = g.grid().d;
    if (!smoothing_admissible(d, source, target, gamma)) {
        throw ValidationError("smoothing.indices",
                              "index tuple violates 0 <= 1/q2 <= gamma/d + 1/q1 <= 1 or an "
                              "endpoint condition");
    }
    if (times.empty()) throw ValidationError("smoothing.times", "need at least one time");
    if (std::isinf(source.q) || std::isinf(target.q)) {
        throw ValidationError("smoothing.indices", "q = inf is not supported on a sampled grid");
    }
    const auto& grid = g.grid();
    std::vector<double> weighted(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) {
        weighted[j] = std::pow(grid.nodes[j], -gamma) * g[j];
    }
    const RadialField f(g.grid_ptr(), std::move(weighted));
    const auto spectrum = hankel_transform(f);
    const double g_norm = lorentz_norm(g, source.q, source.r);
    const double exponent = -0.5 * d * (1.0 / source.q - 1.0 / target.q) - 0.5 * gamma;

    SmoothingVerdict v;
    for (double t : times) {
        const auto ft = inverse_hankel(spectrum.heat(t), g.grid_ptr());
        const double lhs = lorentz_norm(ft, target.q, target.r);
        const double rhs = std::pow(t, exponent) * g_norm;
        v.times.push_back(t);
        v.lhs.push_back(lhs);
        v.rhs_power.push_back(rhs);
        v.ratios.push_back(rhs > 0.0 ? lhs / rhs : 0.0);
    }
    std::size_t first = 0;
    for (std::size_t i = 1; i < v.times.size(); ++i) {
        if (v.times[i] < v.times[first]) first = i;
    }
    const double base = v.ratios[first];
    const double top = *std::max_element(v.ratios.begin(), v.ratios.end());
    v.variation = base > 0.0 ? top / base : (top == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
    if (std::isfinite(constant)) {
        v.constant = constant;
        v.holds = std::isfinite(top) && top <= constant * (1.0 + 1e-2);
    } else {
        v.holds = std::isfinite(top) && v.variation < 3.0;
    }
    return v;
}

}  // namespace hsplab
