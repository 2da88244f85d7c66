#include <algorithm>
#include <cmath>
#include <numeric>

#include "rebalance/error.hpp"
#include "rebalance/samplers.hpp"

namespace rebalance {

std::vector<std::size_t> allocate_quotas(std::span<const double> weights, std::span<const RowId> ids,
                                         std::size_t total) {
    if (weights.size() != ids.size()) throw ConfigError("quota allocation: weights and ids differ in length");
    const std::size_t n = weights.size();
    std::vector<std::size_t> quotas(n, 0);
    if (n == 0) return quotas;

    double sum = 0.0;
    bool valid = true;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) valid = false;
        sum += w;
    }
    std::vector<double> share(n);
    if (!valid || !(sum > 0.0) || !std::isfinite(sum)) {
        std::fill(share.begin(), share.end(), static_cast<double>(total) / static_cast<double>(n));
    } else {
        for (std::size_t i = 0; i < n; ++i) share[i] = weights[i] / sum * static_cast<double>(total);
    }

    std::size_t assigned = 0;
    std::vector<double> frac(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = std::floor(share[i]);
        quotas[i] = static_cast<std::size_t>(f);
        frac[i] = share[i] - f;
        assigned += quotas[i];
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (assigned <= total) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return frac[a] != frac[b] ? frac[a] > frac[b] : ids[a] < ids[b];
        });
        for (std::size_t r = 0; r < total - assigned; ++r) ++quotas[order[r % n]];
    } else {
        // rounding overshoot: take back from the smallest fractional parts
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return frac[a] != frac[b] ? frac[a] < frac[b] : ids[a] > ids[b];
        });
        std::size_t excess = assigned - total;
        for (std::size_t r = 0; excess > 0; r = (r + 1) % n) {
            if (quotas[order[r]] > 0) {
                --quotas[order[r]];
                --excess;
            }
        }
    }
    return quotas;
}

}  // namespace rebalance
