#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vrprpd {

class TooFewPairs : public std::invalid_argument {
public:
    explicit TooFewPairs(std::size_t nonzero)
        : std::invalid_argument("wilcoxon: " + std::to_string(nonzero) + " non-zero differences, need at least 5") {}
};

class ZeroVariance : public std::domain_error {
public:
    ZeroVariance() : std::domain_error("cohen's d: paired differences have zero variance") {}
};

enum class Alternative { Greater, Less };

struct WilcoxonResult {
    double w = 0.0;  // sum of ranks of positive differences
    double p = 1.0;
    std::size_t n = 0;  // non-zero differences
    bool exact = true;
};

/// Average ranks (1-based) of |values|, ties sharing their mean rank.
inline std::vector<double> midranks(const std::vector<double>& values) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = r;
        i = j + 1;
    }
    return ranks;
}

/// Paired signed-rank test on differences variant - base. Zero differences
/// are dropped. For n <= 20 the p-value is exact: the null distribution of W
/// is counted over all 2^n sign patterns (on doubled midranks, so ties are
/// exact too); above 20 a normal approximation with tie and continuity
/// correction is used. Greater gives P(W >= W_obs).
inline WilcoxonResult wilcoxon_signed_rank(const std::vector<std::pair<double, double>>& pairs,
                                           Alternative alt = Alternative::Greater) {
    std::vector<double> diff, mag;
    for (const auto& [base, variant] : pairs) {
        const double d = variant - base;
        if (d != 0.0) {
            diff.push_back(d);
            mag.push_back(std::abs(d));
        }
    }
    if (diff.size() < 5) throw TooFewPairs(diff.size());
    const auto ranks = midranks(mag);

    WilcoxonResult r;
    r.n = diff.size();
    for (std::size_t i = 0; i < diff.size(); ++i)
        if (diff[i] > 0) r.w += ranks[i];

    if (r.n <= 20) {
        std::vector<long> twice(ranks.size());
        long total = 0;
        for (std::size_t i = 0; i < ranks.size(); ++i) {
            twice[i] = std::lround(2.0 * ranks[i]);
            total += twice[i];
        }
        std::vector<double> count(static_cast<std::size_t>(total + 1), 0.0);
        count[0] = 1.0;
        for (long t : twice)
            for (long s = total; s >= t; --s) count[static_cast<std::size_t>(s)] += count[static_cast<std::size_t>(s - t)];
        const long observed = std::lround(2.0 * r.w);
        double tail = 0.0;
        for (long s = 0; s <= total; ++s) {
            const bool in_tail = alt == Alternative::Greater ? s >= observed : s <= observed;
            if (in_tail) tail += count[static_cast<std::size_t>(s)];
        }
        r.p = tail / std::ldexp(1.0, static_cast<int>(r.n));
        return r;
    }

    r.exact = false;
    const double n = static_cast<double>(r.n);
    const double mean = n * (n + 1.0) / 4.0;
    double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    auto sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        var -= (t * t * t - t) / 48.0;
        i = j;
    }
    const double sd = std::sqrt(var);
    if (alt == Alternative::Greater) {
        const double z = (r.w - mean - 0.5) / sd;
        r.p = 0.5 * std::erfc(z / std::sqrt(2.0));
    } else {
        const double z = (r.w - mean + 0.5) / sd;
        r.p = 0.5 * std::erfc(-z / std::sqrt(2.0));
    }
    return r;
}

/// mean(d) / sd(d) over paired differences d = variant - base, sample sd.
inline double cohens_d_paired(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 2) throw std::invalid_argument("cohen's d: need at least 2 pairs");
    std::vector<double> d;
    for (const auto& [base, variant] : pairs) d.push_back(variant - base);
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(d.size() - 1));
    if (sd == 0.0) throw ZeroVariance();
    return mean / sd;
}

}  // namespace vrprpd
