#include "socnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace socnet {

double mean(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("mean: empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_sd(const std::vector<double>& x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("pearson: need two samples of equal length >= 2");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    const double n1 = static_cast<double>(x.size() - 1);
    const double sdx = std::sqrt(sxx / n1), sdy = std::sqrt(syy / n1);
    if (sdx <= 1e-12 * (1.0 + std::fabs(mx)) || sdy <= 1e-12 * (1.0 + std::fabs(my)))
        return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> average_ranks(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && x[order[j]] == x[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1..j
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
        i = j;
    }
    return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(average_ranks(x), average_ranks(y));
}

double ks_uniform(std::vector<double> sample) {
    if (sample.empty()) throw std::invalid_argument("ks_uniform: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(sample[i] - lo, hi - sample[i]));
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("adjusted_rand_index: need equal nonempty labelings");
    auto compress = [](const std::vector<int>& v) {
        std::unordered_map<int, int> map;
        std::vector<int> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto [it, fresh] = map.try_emplace(v[i], static_cast<int>(map.size()));
            out[i] = it->second;
        }
        return std::pair{out, map.size()};
    };
    auto [la, ka] = compress(a);
    auto [lb, kb] = compress(b);
    std::vector<std::vector<long long>> table(ka, std::vector<long long>(kb, 0));
    for (std::size_t i = 0; i < la.size(); ++i) table[la[i]][lb[i]]++;
    auto choose2 = [](long long m) { return m * (m - 1) / 2; };
    long long sumIJ = 0;
    std::vector<long long> rowSums(ka, 0), colSums(kb, 0);
    for (std::size_t r = 0; r < ka; ++r)
        for (std::size_t c = 0; c < kb; ++c) {
            sumIJ += choose2(table[r][c]);
            rowSums[r] += table[r][c];
            colSums[c] += table[r][c];
        }
    long long sumRows = 0, sumCols = 0;
    for (long long v : rowSums) sumRows += choose2(v);
    for (long long v : colSums) sumCols += choose2(v);
    const double total = static_cast<double>(choose2(static_cast<long long>(a.size())));
    const double expected = static_cast<double>(sumRows) * static_cast<double>(sumCols) / total;
    const double maxIdx = 0.5 * static_cast<double>(sumRows + sumCols);
    if (maxIdx == expected) return 1.0;
    return (static_cast<double>(sumIJ) - expected) / (maxIdx - expected);
}

}  // namespace socnet
