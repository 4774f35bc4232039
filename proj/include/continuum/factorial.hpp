#ifndef CONTINUUM_FACTORIAL_HPP
#define CONTINUUM_FACTORIAL_HPP

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace continuum {

/// Sample statistics with a two-sided t confidence half-width.
struct SampleStats
{
    std::size_t n = 0;
    double mean = 0.0;
    double std = 0.0;     // sample (n - 1) standard deviation
    double ci_half = 0.0; // half-width of the confidence interval on the mean
};

namespace detail {

/// Order-independent sum: values are summed in ascending order.
inline double sorted_sum(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    double s = 0.0;
    for (double v : values)
        s += v;
    return s;
}

} // namespace detail

inline double t_quantile(double p, double degrees_of_freedom)
{
    boost::math::students_t dist(degrees_of_freedom);
    return boost::math::quantile(dist, p);
}

inline SampleStats sample_stats(std::span<const double> values, double confidence = 0.95)
{
    SampleStats s;
    s.n = values.size();
    if (s.n == 0)
        return s;
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    s.mean = detail::sorted_sum(v) / static_cast<double>(s.n);
    if (s.n < 2)
        return s;
    std::vector<double> squares;
    squares.reserve(v.size());
    for (double x : v)
        squares.push_back((x - s.mean) * (x - s.mean));
    s.std = std::sqrt(detail::sorted_sum(std::move(squares)) / static_cast<double>(s.n - 1));
    const double t = t_quantile(0.5 + confidence / 2.0, static_cast<double>(s.n - 1));
    s.ci_half = t * s.std / std::sqrt(static_cast<double>(s.n));
    return s;
}

/// One response of a two-level design; levels are coded -1 / +1 per factor.
template <std::size_t K>
struct Observation
{
    std::array<int, K> levels{};
    double value = 0.0;
};

/// Allocation of variation of a replicated 2^K design. Effects are indexed
/// by factor bitmask: bit i set means factor i takes part; mask 0 is the
/// grand mean.
template <std::size_t K>
struct VariationReport
{
    static constexpr std::size_t cells = std::size_t{1} << K;

    std::size_t replications = 0;
    std::array<double, cells> effect{};   // q_mask
    std::array<double, cells> ss{};       // 2^K * r * q^2 (ss[0] unused)
    std::array<double, cells> percent{};  // ss / sst * 100 (percent[0] unused)
    double sse = 0.0;
    double sst = 0.0;
    double error_percent = 0.0;
    bool no_variation = false; // sst == 0: nothing to allocate, all percentages are 0

    double total_percent() const
    {
        double s = error_percent;
        for (std::size_t m = 1; m < cells; ++m)
            s += percent[m];
        return s;
    }
};

/// Cell index of a coded level vector: bit i set when factor i is at +1.
template <std::size_t K>
std::size_t cell_of(const std::array<int, K>& levels)
{
    std::size_t cell = 0;
    for (std::size_t i = 0; i < K; ++i) {
        if (levels[i] != -1 && levels[i] != 1)
            throw std::invalid_argument("allocate_variation: levels must be coded -1 or +1");
        if (levels[i] == 1)
            cell |= std::size_t{1} << i;
    }
    return cell;
}

/// Sign of effect `mask` in cell `cell`: product of the coded levels of the
/// factors in the mask.
constexpr int effect_sign(std::size_t mask, std::size_t cell)
{
    // A factor contributes -1 when it sits at its low level in this cell.
    return (std::popcount(mask & ~cell) % 2 == 0) ? 1 : -1;
}

/// Sign-table allocation of variation. The design must be balanced: every
/// cell carries the same number r >= 1 of replications. Results do not depend
/// on the order of the observations.
template <std::size_t K>
VariationReport<K> allocate_variation(std::span<const Observation<K>> observations)
{
    constexpr std::size_t cells = VariationReport<K>::cells;
    std::array<std::vector<double>, cells> by_cell;
    for (const auto& o : observations)
        by_cell[cell_of<K>(o.levels)].push_back(o.value);

    VariationReport<K> out;
    out.replications = by_cell[0].size();
    if (out.replications == 0)
        throw std::invalid_argument("allocate_variation: empty design");
    for (const auto& c : by_cell) {
        if (c.size() != out.replications)
            throw std::invalid_argument("allocate_variation: unbalanced design");
    }
    const double r = static_cast<double>(out.replications);

    std::array<double, cells> cell_mean{};
    for (std::size_t c = 0; c < cells; ++c)
        cell_mean[c] = detail::sorted_sum(by_cell[c]) / r;

    for (std::size_t m = 0; m < cells; ++m) {
        double q = 0.0;
        for (std::size_t c = 0; c < cells; ++c)
            q += effect_sign(m, c) * cell_mean[c];
        out.effect[m] = q / static_cast<double>(cells);
    }

    std::vector<double> squares;
    for (std::size_t c = 0; c < cells; ++c)
        for (double y : by_cell[c])
            squares.push_back((y - cell_mean[c]) * (y - cell_mean[c]));
    out.sse = detail::sorted_sum(std::move(squares));

    double explained = 0.0;
    for (std::size_t m = 1; m < cells; ++m) {
        out.ss[m] = static_cast<double>(cells) * r * out.effect[m] * out.effect[m];
        explained += out.ss[m];
    }
    out.sst = explained + out.sse;
    if (!(out.sst > 0.0)) {
        out.no_variation = true;
        return out;
    }
    for (std::size_t m = 1; m < cells; ++m)
        out.percent[m] = out.ss[m] / out.sst * 100.0;
    out.error_percent = out.sse / out.sst * 100.0;
    return out;
}

/// Total sum of squares around the grand mean, computed directly.
template <std::size_t K>
double total_sum_of_squares(std::span<const Observation<K>> observations)
{
    std::vector<double> values;
    for (const auto& o : observations)
        values.push_back(o.value);
    const double mean = detail::sorted_sum(values) / static_cast<double>(values.size());
    std::vector<double> squares;
    for (double v : values)
        squares.push_back((v - mean) * (v - mean));
    return detail::sorted_sum(std::move(squares));
}

} // namespace continuum

#endif // CONTINUUM_FACTORIAL_HPP
