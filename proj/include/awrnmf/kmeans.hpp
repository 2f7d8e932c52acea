#ifndef AWRNMF_KMEANS_HPP
#define AWRNMF_KMEANS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "awrnmf/errors.hpp"
#include "awrnmf/rng.hpp"

namespace awrnmf {

struct KMeansResult {
    std::vector<int> assignments;
    Eigen::MatrixXd centroids;  // K x dim
    double inertia = 0.0;
    int iterations = 0;
};

namespace detail {

inline Eigen::MatrixXd kmeanspp_seed(const Eigen::MatrixXd& points, int k, Rng& rng) {
    const Eigen::Index n = points.rows();
    Eigen::MatrixXd centroids(k, points.cols());
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    centroids.row(0) = points.row(pick(rng));
    Eigen::VectorXd d2 =
        (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        double total = d2.sum();
        Eigen::Index chosen = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> unif(0.0, total);
            double r = unif(rng);
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= r) { chosen = i; break; }
            }
        } else {
            chosen = pick(rng);
        }
        centroids.row(c) = points.row(chosen);
        d2 = d2.cwiseMin(
            (points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
    }
    return centroids;
}

}  // namespace detail

// Lloyd's algorithm with k-means++ seeding. Empty clusters are re-seeded
// from the point farthest from its current centroid. Deterministic given
// the seed.
inline KMeansResult kmeans(const Eigen::MatrixXd& points, int k,
                           std::uint64_t seed, int max_iter = 300) {
    const Eigen::Index n = points.rows();
    if (k <= 0 || k > n)
        throw dimension_error("cluster count must be in [1, point count]");
    if (!points.allFinite())
        throw error("k-means input contains non-finite values");

    Rng rng(seed);
    KMeansResult res;
    res.centroids = detail::kmeanspp_seed(points, k, rng);
    res.assignments.assign(n, -1);

    for (int it = 0; it < max_iter; ++it) {
        bool changed = false;
        double inertia = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int bestc = 0;
            for (int c = 0; c < k; ++c) {
                double d = (points.row(i) - res.centroids.row(c)).squaredNorm();
                if (d < best) { best = d; bestc = c; }
            }
            if (res.assignments[i] != bestc) { changed = true; res.assignments[i] = bestc; }
            inertia += best;
        }
        res.inertia = inertia;
        res.iterations = it + 1;
        if (!changed && it > 0) break;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
        std::vector<int> counts(k, 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(res.assignments[i]) += points.row(i);
            ++counts[res.assignments[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                res.centroids.row(c) = sums.row(c) / counts[c];
            } else {
                // farthest point from its own centroid
                Eigen::Index far = 0;
                double fard = -1.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    double d = (points.row(i) -
                                res.centroids.row(res.assignments[i])).squaredNorm();
                    if (d > fard) { fard = d; far = i; }
                }
                res.centroids.row(c) = points.row(far);
            }
        }
    }
    return res;
}

}  // namespace awrnmf

#endif
