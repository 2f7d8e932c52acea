#ifndef AWRNMF_METRICS_HPP
#define AWRNMF_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "awrnmf/errors.hpp"

namespace awrnmf {

namespace detail {

// Hungarian algorithm (Jonker-Volgenant style with potentials) for the
// min-cost square assignment problem. Returns row -> column.
inline std::vector<int> hungarian_min(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            int i0 = p[j0], j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
                if (minv[j] < delta) { delta = minv[j]; j1 = j; }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> match(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) match[p[j] - 1] = j - 1;
    return match;
}

inline int label_count(const std::vector<int>& y) {
    int k = 0;
    for (int v : y) {
        if (v < 0) throw error("negative cluster label");
        k = std::max(k, v + 1);
    }
    return k;
}

}  // namespace detail

// Clustering accuracy: fraction of points matched after the optimal
// one-to-one mapping between predicted and true labels, found by
// maximum-weight matching on the confusion matrix. Rectangular confusion
// matrices are zero-padded to square.
inline double accuracy(const std::vector<int>& y, const std::vector<int>& y_pred) {
    if (y.size() != y_pred.size())
        throw error("label vectors have different lengths");
    if (y.empty()) throw error("empty label vectors");
    const int ka = detail::label_count(y);
    const int kb = detail::label_count(y_pred);
    const int k = std::max(ka, kb);
    std::vector<std::vector<double>> confusion(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < y.size(); ++i)
        confusion[y_pred[i]][y[i]] += 1.0;
    // maximize matches == minimize negated counts
    std::vector<std::vector<double>> cost(k, std::vector<double>(k));
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) cost[a][b] = -confusion[a][b];
    std::vector<int> match = detail::hungarian_min(cost);
    double hits = 0.0;
    for (int a = 0; a < k; ++a) hits += confusion[a][match[a]];
    return hits / static_cast<double>(y.size());
}

// Normalized mutual information, MI / max(H(y), H(y')), natural log.
// Both-trivial partitions (zero entropy on each side) compare by equality.
inline double nmi(const std::vector<int>& y, const std::vector<int>& y_pred) {
    if (y.size() != y_pred.size())
        throw error("label vectors have different lengths");
    if (y.empty()) throw error("empty label vectors");
    const int ka = detail::label_count(y);
    const int kb = detail::label_count(y_pred);
    const double n = static_cast<double>(y.size());
    std::vector<long> ca(ka, 0), cb(kb, 0);
    std::vector<std::vector<long>> cj(ka, std::vector<long>(kb, 0));
    for (std::size_t i = 0; i < y.size(); ++i) {
        ++ca[y[i]];
        ++cb[y_pred[i]];
        ++cj[y[i]][y_pred[i]];
    }
    double ha = 0.0, hb = 0.0, mi = 0.0;
    for (long c : ca)
        if (c > 0) ha -= (c / n) * std::log(c / n);
    for (long c : cb)
        if (c > 0) hb -= (c / n) * std::log(c / n);
    for (int a = 0; a < ka; ++a)
        for (int b = 0; b < kb; ++b)
            if (cj[a][b] > 0) {
                double p = cj[a][b] / n;
                mi += p * std::log(p / ((ca[a] / n) * (cb[b] / n)));
            }
    double denom = std::max(ha, hb);
    // both sides trivial means both are single-cluster, i.e. identical partitions
    if (denom == 0.0) return 1.0;
    return mi / denom;
}

}  // namespace awrnmf

#endif
