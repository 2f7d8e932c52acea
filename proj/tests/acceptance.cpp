// End-to-end acceptance suite. Prints one pass/fail line per criterion and
// exits nonzero if any fails. Usage: acceptance <path-to-wdbc.csv>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <vector>

#include "awrnmf/bench.hpp"
#include "oracles.hpp"

using namespace awrnmf;

namespace {

int failures = 0;

void report(int idx, const char* name, bool ok, double seconds) {
    std::printf("[%s] %d. %-28s (%.1fs)\n", ok ? "PASS" : "FAIL", idx, name, seconds);
    if (!ok) ++failures;
}

template <typename F>
void criterion(int idx, const char* name, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = f();
    } catch (const std::exception& e) {
        std::printf("    exception: %s\n", e.what());
    }
    report(idx, name, ok,
           std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

Matrix random_positive(Eigen::Index m, Eigen::Index n, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    return Matrix::NullaryExpr(m, n, [&]() { return unif(rng); });
}

// 1. every objective trace nonincreasing, slack 1e-10 per step
bool monotone_descent() {
    for (Method m : {Method::EucNMF, Method::FWRNMF, Method::EWRNMF}) {
        for (std::uint64_t s = 0; s < 20; ++s) {
            Matrix X = random_positive(30, 40, 1000 + s);
            SolverOptions opts;
            opts.rng_seed = s;
            opts.hyper_p = 2.0;
            opts.hyper_gamma = 0.5;
            Factorization f = fit(X, 5, m, opts);
            for (std::size_t t = 1; t < f.objective_trace.size(); ++t)
                if (f.objective_trace[t] > f.objective_trace[t - 1] + 1e-10) return false;
        }
    }
    return true;
}

// 2. closed-form weights match a brute-force simplex-grid minimizer
bool weight_oracle_equivalence() {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + trial % 4;  // 2..5
        std::uniform_real_distribution<double> unif(0.1, 2.0);
        Vector z = Vector::NullaryExpr(n, [&]() { return unif(rng); });
        for (double p : {1.5, 2.0, 4.0}) {
            Vector q = fwrnmf_weights(z, p);
            Vector q_star = oracles::simplex_grid_minimize(
                n, [&](const Vector& w) { return oracles::fuzzy_objective(z, w, p); });
            if ((q - q_star).cwiseAbs().maxCoeff() >= 5e-3) return false;
        }
        for (double gamma : {0.1, 1.0, 10.0}) {
            Vector q = ewrnmf_weights(z, gamma);
            Vector q_star = oracles::simplex_grid_minimize(
                n, [&](const Vector& w) { return oracles::entropy_objective(z, w, gamma); });
            if ((q - q_star).cwiseAbs().maxCoeff() >= 5e-3) return false;
        }
    }
    return true;
}

// 3. Z_j + gamma ln Q_j + gamma is constant across j
bool ewrnmf_stationarity() {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 3 + trial % 6;
        std::uniform_real_distribution<double> unif(0.05, 3.0);
        Vector z = Vector::NullaryExpr(n, [&]() { return unif(rng); });
        double gamma = 0.1 + 0.08 * trial;
        Vector q = ewrnmf_weights(z, gamma);
        double lo = 1e300, hi = -1e300;
        for (int j = 0; j < n; ++j) {
            double lambda = z[j] + gamma * std::log(q[j]) + gamma;
            lo = std::min(lo, lambda);
            hi = std::max(hi, lambda);
        }
        if (hi - lo >= 1e-6) return false;
    }
    return true;
}

// 4. pinned-uniform weighted W-updates equal the unweighted update
bool uniform_weight_reduction() {
    for (std::uint64_t s = 0; s < 20; ++s) {
        Matrix X = random_positive(8, 11, 4000 + s);
        Matrix W = random_positive(8, 3, 4100 + s);
        Matrix H = random_positive(3, 11, 4200 + s);
        Vector q = Vector::Constant(11, 1.0 / 11.0);
        Matrix base = euc_update_w(X, W, H);
        Matrix fw = fwrnmf_update_w(X, W, H, q, 2.0);
        Matrix ew = ewrnmf_update_w(X, W, H, q);
        double rel_fw = ((fw - base).cwiseAbs().array() /
                         base.cwiseAbs().array().max(1e-300)).maxCoeff();
        double rel_ew = ((ew - base).cwiseAbs().array() /
                         base.cwiseAbs().array().max(1e-300)).maxCoeff();
        if (rel_fw >= 1e-12 || rel_ew >= 1e-12) return false;
    }
    return true;
}

// 5. planted outliers receive the three smallest weights
bool outlier_downweighting() {
    int good = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        PlantedInstance inst = synth_planted(20, 2, 30, 3, 5000 + seed);
        const Matrix& X = inst.data.X;

        SolverOptions euc;
        euc.rng_seed = seed;
        Factorization base = fit(X, 2, Method::EucNMF, euc);
        Vector z = column_residuals(X, base.W, base.H);
        std::vector<double> zs(z.data(), z.data() + z.size());
        std::nth_element(zs.begin(), zs.begin() + 15, zs.end());
        double median_z = zs[15];

        bool all_ok = true;
        for (Method m : {Method::FWRNMF, Method::EWRNMF}) {
            SolverOptions opts;
            opts.rng_seed = seed;
            opts.hyper_p = 2.0;
            opts.hyper_gamma = median_z;
            Factorization f = fit(X, 2, m, opts);
            std::vector<Eigen::Index> order(30);
            std::iota(order.begin(), order.end(), Eigen::Index{0});
            std::sort(order.begin(), order.end(),
                      [&](Eigen::Index a, Eigen::Index b) { return f.Q[a] < f.Q[b]; });
            std::vector<Eigen::Index> smallest(order.begin(), order.begin() + 3);
            std::sort(smallest.begin(), smallest.end());
            if (smallest != inst.outlier_columns) all_ok = false;
        }
        if (all_ok) ++good;
    }
    std::printf("    outlier criterion: %d/10 seeds\n", good);
    return good >= 9;
}

// 6. metrics against exhaustive / direct-definition oracles
bool metric_correctness() {
    Rng rng(6);
    std::uniform_int_distribution<int> ksz(1, 5), len(4, 60);
    for (int trial = 0; trial < 100; ++trial) {
        int n = len(rng);
        int k = ksz(rng);
        std::uniform_int_distribution<int> lab(0, k - 1);
        std::vector<int> y(n), pred(n);
        for (int i = 0; i < n; ++i) { y[i] = lab(rng); pred[i] = lab(rng); }
        if (std::abs(accuracy(y, pred) - oracles::brute_force_accuracy(y, pred)) > 1e-15)
            return false;
        if (std::abs(nmi(y, pred) - oracles::naive_nmi(y, pred)) > 1e-12) return false;
    }
    return true;
}

// 7. WDBC: EWRNMF beats EucNMF on mean ACC in >= 7/10 reruns, and EucNMF
// lands within +-6 points of the published 87.69
bool wdbc_reproduction(const std::string& wdbc_path) {
    LabeledDataset ds = load_csv(wdbc_path, "label");
    if (ds.X.cols() != 569 || ds.class_count != 2) return false;

    int wins = 0;
    std::vector<double> euc_accs;
    for (std::uint64_t rerun = 0; rerun < 10; ++rerun) {
        ExperimentConfig cfg;
        cfg.synthetic.reset();
        cfg.data_path = wdbc_path;
        cfg.label_column = "label";
        cfg.methods = {Method::EucNMF, Method::EWRNMF};
        cfg.restarts = 10;
        cfg.noise_levels = {0.05};
        cfg.seed = 7000 + rerun;
        cfg.out_dir = (std::filesystem::temp_directory_path() / "awrnmf_acc7").string();

        Matrix Xn = add_noise(ds.X, {0.05, derive_seed(cfg.seed, 1, 0)});
        TableResult tr = evaluate_methods(Xn, ds.labels, 2, 2, 0.05, cfg);
        double euc = tr.summary[0].mean_acc, ewr = tr.summary[1].mean_acc;
        euc_accs.push_back(euc);
        if (ewr > euc) ++wins;
        std::printf("    rerun %llu: EucNMF %.2f%%  EWRNMF %.2f%%\n",
                    static_cast<unsigned long long>(rerun), 100 * euc, 100 * ewr);
    }
    double euc_mean = std::accumulate(euc_accs.begin(), euc_accs.end(), 0.0) / 10.0;
    std::printf("    EWRNMF wins: %d/10, EucNMF mean ACC %.2f%% (paper 87.69%%)\n",
                wins, 100 * euc_mean);
    return wins >= 7 && std::abs(100 * euc_mean - 87.69) <= 6.0;
}

// 8. best weighted method is at least as accurate as EucNMF at every
// noise level on the planted-outlier instance
bool noise_sweep_ordering() {
    ExperimentConfig cfg;
    cfg.synthetic = SyntheticSpec{20, 2, 30, 3};
    cfg.restarts = 10;
    cfg.seed = 8;
    cfg.out_dir = (std::filesystem::temp_directory_path() / "awrnmf_acc8").string();
    std::vector<SweepPoint> pts = run_sweep(cfg, SweepAxis::NoiseC, {0.02, 0.06, 0.1});
    for (double c : {0.02, 0.06, 0.1}) {
        double euc = -1.0, best_weighted = -1.0;
        for (const SweepPoint& p : pts) {
            if (p.axis_value != c) continue;
            if (p.method == "EucNMF") euc = p.mean_acc;
            else best_weighted = std::max(best_weighted, p.mean_acc);
        }
        std::printf("    c=%.2f: EucNMF %.2f%%  best weighted %.2f%%\n", c, 100 * euc,
                    100 * best_weighted);
        if (best_weighted < euc) return false;
    }
    return true;
}

// 9. all methods reach relative objective change < 1e-4 within 500
// iterations on an ORL-scale random dataset
bool convergence_budget() {
    Matrix X = random_positive(100, 400, 9);
    for (Method m : {Method::EucNMF, Method::FWRNMF, Method::EWRNMF}) {
        SolverOptions opts;
        opts.rng_seed = 9;
        opts.rel_tolerance = 1e-4;
        opts.max_iterations = 500;
        opts.hyper_p = 2.0;
        opts.hyper_gamma = 1.0;
        Factorization f = fit(X, 40, m, opts);
        std::printf("    %s: %d iterations, converged=%d\n", method_name(m).c_str(),
                    f.iterations_run, f.converged);
        if (!f.converged) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    std::string wdbc = argc > 1 ? argv[1] : "data/wdbc.csv";

    criterion(1, "monotone descent", monotone_descent);
    criterion(2, "weight-oracle equivalence", weight_oracle_equivalence);
    criterion(3, "EWRNMF stationarity", ewrnmf_stationarity);
    criterion(4, "uniform-weight reduction", uniform_weight_reduction);
    criterion(5, "outlier down-weighting", outlier_downweighting);
    criterion(6, "metric correctness", metric_correctness);
    criterion(7, "WDBC reproduction", [&] { return wdbc_reproduction(wdbc); });
    criterion(8, "noise-sweep ordering", noise_sweep_ordering);
    criterion(9, "convergence budget", convergence_budget);

    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    else std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
