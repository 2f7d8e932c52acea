#ifndef AWRNMF_BENCH_HPP
#define AWRNMF_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "awrnmf/dataset.hpp"
#include "awrnmf/kmeans.hpp"
#include "awrnmf/metrics.hpp"
#include "awrnmf/nmf.hpp"
#include "awrnmf/rng.hpp"

namespace awrnmf {

inline std::vector<double> default_p_grid() {
    std::vector<double> g;
    for (double p = 1.5; p <= 11.0 + 1e-9; p += 0.5) g.push_back(p);
    return g;  // 20 values
}

inline std::vector<double> default_gamma_grid() {
    std::vector<double> g;
    for (int i = -4; i <= 4; ++i) g.push_back(std::pow(10.0, i));
    return g;  // 9 values
}

struct SyntheticSpec {
    Eigen::Index m = 20, l = 2, n = 30, outliers = 3;
};

struct ExperimentConfig {
    std::string data_path;  // empty means synthetic
    std::string label_column = "-1";
    char delimiter = ',';
    std::optional<SyntheticSpec> synthetic;

    std::vector<Method> methods{Method::EucNMF, Method::FWRNMF, Method::EWRNMF};
    int restarts = 10;
    std::vector<double> noise_levels{0.05};
    std::vector<double> p_grid = default_p_grid();
    std::vector<double> gamma_grid = default_gamma_grid();
    int rank = 0;  // 0 means "equals class count"
    std::uint64_t seed = 0;
    int max_iterations = 500;
    double tolerance = 1e-6;
    int kmeans_max_iter = 300;
    int sweep_repeats = 10;
    std::string out_dir = ".";

    void validate() const {
        if (restarts < 1) throw config_error("restarts must be >= 1");
        if (methods.empty()) throw config_error("at least one method required");
        if (p_grid.empty() || gamma_grid.empty())
            throw config_error("hyperparameter grids must be nonempty");
        if (data_path.empty() && !synthetic)
            throw config_error("either a data path or a synthetic spec is required");
    }
};

struct RunRecord {
    std::string method;
    double hyper = 0.0;  // 0 for EucNMF
    std::uint64_t nmf_seed = 0;
    std::uint64_t kmeans_seed = 0;
    double noise_c = 0.0;
    double acc = 0.0;
    double nmi_value = 0.0;
    double final_objective = 0.0;
    int iterations = 0;
    double wall_seconds = 0.0;
};

struct MethodSummary {
    std::string method;
    double best_hyper = 0.0;
    double mean_acc = 0.0;
    double mean_nmi = 0.0;
};

struct TableResult {
    std::vector<MethodSummary> summary;
    std::vector<RunRecord> records;
};

namespace detail {

// seed-derivation purposes
enum : std::uint64_t { kSeedNoise = 1, kSeedNmf = 2, kSeedKmeans = 3, kSeedSubset = 4 };

inline const std::vector<double>& grid_for(const ExperimentConfig& cfg, Method m) {
    static const std::vector<double> none{0.0};
    switch (m) {
        case Method::FWRNMF: return cfg.p_grid;
        case Method::EWRNMF: return cfg.gamma_grid;
        default: return none;
    }
}

inline int resolve_rank(const ExperimentConfig& cfg, const LabeledDataset& ds) {
    int l = cfg.rank > 0 ? cfg.rank : ds.class_count;
    if (l < 1 || l > std::min(ds.X.rows(), ds.X.cols()))
        throw config_error("resolved rank " + std::to_string(l) +
                           " is invalid for this dataset");
    return l;
}

}  // namespace detail

inline LabeledDataset resolve_dataset(const ExperimentConfig& cfg) {
    if (!cfg.data_path.empty())
        return load_csv(cfg.data_path, cfg.label_column, cfg.delimiter);
    const SyntheticSpec& s = *cfg.synthetic;
    return synth_planted(s.m, s.l, s.n, s.outliers,
                         derive_seed(cfg.seed, 0, 0, 0, 0)).data;
}

// One NMF + k-means trial; ACC/NMI against the ground-truth labels.
inline RunRecord run_trial(const Matrix& X, const std::vector<int>& labels,
                           int rank, int k, Method method, double hyper,
                           double noise_c, std::uint64_t nmf_seed,
                           std::uint64_t kmeans_seed, const ExperimentConfig& cfg) {
    SolverOptions opts;
    opts.max_iterations = cfg.max_iterations;
    opts.rel_tolerance = cfg.tolerance;
    opts.rng_seed = nmf_seed;
    if (method == Method::FWRNMF) opts.hyper_p = hyper;
    if (method == Method::EWRNMF) opts.hyper_gamma = hyper;

    auto t0 = std::chrono::steady_clock::now();
    Factorization f = fit(X, rank, method, opts);
    KMeansResult km = kmeans(f.H.transpose(), k, kmeans_seed, cfg.kmeans_max_iter);
    auto t1 = std::chrono::steady_clock::now();

    RunRecord rec;
    rec.method = method_name(method);
    rec.hyper = method == Method::EucNMF ? 0.0 : hyper;
    rec.nmf_seed = nmf_seed;
    rec.kmeans_seed = kmeans_seed;
    rec.noise_c = noise_c;
    rec.acc = accuracy(labels, km.assignments);
    rec.nmi_value = nmi(labels, km.assignments);
    rec.final_objective = f.objective_trace.back();
    rec.iterations = f.iterations_run;
    rec.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    return rec;
}

// Runs every (method, grid value, restart) trial on one noisy realization
// and reports, per method, the grid value maximizing mean ACC.
inline TableResult evaluate_methods(const Matrix& X_noisy, const std::vector<int>& labels,
                                    int rank, int k, double noise_c,
                                    const ExperimentConfig& cfg,
                                    std::uint64_t noise_idx = 0) {
    TableResult out;
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        Method method = cfg.methods[mi];
        const std::vector<double>& grid = detail::grid_for(cfg, method);
        MethodSummary best;
        best.method = method_name(method);
        best.mean_acc = -1.0;
        std::uint64_t mtag = static_cast<std::uint64_t>(method);
        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            double acc_sum = 0.0, nmi_sum = 0.0;
            std::vector<RunRecord> recs;
            for (int r = 0; r < cfg.restarts; ++r) {
                // seeds keyed by (method, restart), not grid index, so every grid
                // point sees the same restart initializations
                std::uint64_t ns = derive_seed(cfg.seed, detail::kSeedNmf, mtag,
                                               static_cast<std::uint64_t>(r), noise_idx);
                std::uint64_t ks = derive_seed(cfg.seed, detail::kSeedKmeans, mtag,
                                               static_cast<std::uint64_t>(r), noise_idx);
                RunRecord rec = run_trial(X_noisy, labels, rank, k, method, grid[gi],
                                          noise_c, ns, ks, cfg);
                acc_sum += rec.acc;
                nmi_sum += rec.nmi_value;
                recs.push_back(std::move(rec));
            }
            double mean_acc = acc_sum / cfg.restarts;
            double mean_nmi = nmi_sum / cfg.restarts;
            out.records.insert(out.records.end(), recs.begin(), recs.end());
            if (mean_acc > best.mean_acc) {
                best.best_hyper = method == Method::EucNMF ? 0.0 : grid[gi];
                best.mean_acc = mean_acc;
                best.mean_nmi = mean_nmi;
            }
        }
        out.summary.push_back(best);
    }
    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const RunRecord& a, const RunRecord& b) {
                         return std::tie(a.method, a.noise_c, a.hyper, a.nmf_seed) <
                                std::tie(b.method, b.noise_c, b.hyper, b.nmf_seed);
                     });
    return out;
}

namespace detail {

inline void write_records_csv(const std::vector<RunRecord>& recs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    out << "method,hyper,noise_c,nmf_seed,kmeans_seed,acc,nmi,final_objective,"
           "iterations,wall_seconds\n";
    char buf[256];
    for (const RunRecord& r : recs) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%llu,%llu,%.17g,%.17g,%.17g,%d,%.6f\n",
                      r.method.c_str(), r.hyper, r.noise_c,
                      static_cast<unsigned long long>(r.nmf_seed),
                      static_cast<unsigned long long>(r.kmeans_seed), r.acc,
                      r.nmi_value, r.final_objective, r.iterations, r.wall_seconds);
        out << buf;
    }
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["data_path"] = cfg.data_path;
    j["label_column"] = cfg.label_column;
    j["delimiter"] = std::string(1, cfg.delimiter);
    if (cfg.synthetic) {
        j["synthetic"] = {{"m", cfg.synthetic->m}, {"l", cfg.synthetic->l},
                          {"n", cfg.synthetic->n}, {"outliers", cfg.synthetic->outliers}};
    }
    std::vector<std::string> methods;
    for (Method m : cfg.methods) methods.push_back(method_name(m));
    j["methods"] = methods;
    j["restarts"] = cfg.restarts;
    j["noise_levels"] = cfg.noise_levels;
    j["p_grid"] = cfg.p_grid;
    j["gamma_grid"] = cfg.gamma_grid;
    j["rank"] = cfg.rank == 0 ? nlohmann::json("classes") : nlohmann::json(cfg.rank);
    j["seed"] = cfg.seed;
    j["max_iterations"] = cfg.max_iterations;
    j["tolerance"] = cfg.tolerance;
    j["kmeans_max_iter"] = cfg.kmeans_max_iter;
    j["sweep_repeats"] = cfg.sweep_repeats;
    return j;
}

inline void write_manifest(const ExperimentConfig& cfg, const std::string& command,
                           const nlohmann::json& extra, const std::string& path) {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config_to_json(cfg);
    j["resolved"] = extra;
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace detail

// Mean ACC/NMI table at each configured noise level, best grid point per
// method. Writes table.csv, records.csv and manifest.json to out_dir.
inline TableResult run_table(const ExperimentConfig& cfg) {
    cfg.validate();
    LabeledDataset ds = resolve_dataset(cfg);
    int rank = detail::resolve_rank(cfg, ds);
    std::filesystem::create_directories(cfg.out_dir);

    TableResult all;
    nlohmann::json resolved;
    std::ofstream table(cfg.out_dir + "/table.csv");
    if (!table) throw io_error("cannot write table.csv");
    table << "noise_c,method,best_hyper,mean_acc,mean_nmi\n";
    for (std::size_t ci = 0; ci < cfg.noise_levels.size(); ++ci) {
        double c = cfg.noise_levels[ci];
        std::uint64_t noise_seed = derive_seed(cfg.seed, detail::kSeedNoise, ci);
        Matrix Xn = add_noise(ds.X, {c, noise_seed});
        resolved["noise_seeds"].push_back(noise_seed);
        TableResult tr = evaluate_methods(Xn, ds.labels, rank, ds.class_count, c, cfg, ci);
        char buf[256];
        for (const MethodSummary& s : tr.summary) {
            std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g,%.17g\n", c,
                          s.method.c_str(), s.best_hyper, s.mean_acc, s.mean_nmi);
            table << buf;
            all.summary.push_back(s);
        }
        all.records.insert(all.records.end(), tr.records.begin(), tr.records.end());
    }
    resolved["dataset"] = ds.name;
    resolved["rank"] = rank;
    resolved["samples"] = ds.X.cols();
    resolved["features"] = ds.X.rows();
    resolved["classes"] = ds.class_count;
    resolved["warnings"] = ds.warnings;
    detail::write_records_csv(all.records, cfg.out_dir + "/records.csv");
    detail::write_manifest(cfg, "table", resolved, cfg.out_dir + "/manifest.json");
    return all;
}

enum class SweepAxis { NoiseC, ClusterCount, Hyper };

struct SweepPoint {
    double axis_value = 0.0;
    std::string method;
    double mean_acc = 0.0;
    double mean_nmi = 0.0;
};

// Per-axis-value mean ACC/NMI curves, written to sweep.csv.
//  - NoiseC: one table evaluation per noise level (best grid point).
//  - ClusterCount: the subset protocol — sample k classes, run, repeat,
//    average.
//  - Hyper: the full per-grid-point curve at the first noise level.
inline std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, SweepAxis axis,
                                         const std::vector<double>& axis_values = {}) {
    cfg.validate();
    LabeledDataset ds = resolve_dataset(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<SweepPoint> points;
    std::vector<RunRecord> all_records;

    if (axis == SweepAxis::NoiseC) {
        ExperimentConfig c2 = cfg;
        if (!axis_values.empty()) c2.noise_levels = axis_values;
        if (c2.noise_levels.empty()) throw config_error("noise axis is empty");
        int rank = detail::resolve_rank(cfg, ds);
        for (std::size_t ci = 0; ci < c2.noise_levels.size(); ++ci) {
            double c = c2.noise_levels[ci];
            Matrix Xn = add_noise(ds.X, {c, derive_seed(cfg.seed, detail::kSeedNoise, ci)});
            TableResult tr = evaluate_methods(Xn, ds.labels, rank, ds.class_count, c, c2, ci);
            for (const MethodSummary& s : tr.summary)
                points.push_back({c, s.method, s.mean_acc, s.mean_nmi});
            all_records.insert(all_records.end(), tr.records.begin(), tr.records.end());
        }
    } else if (axis == SweepAxis::ClusterCount) {
        if (axis_values.empty()) throw config_error("cluster-count axis is empty");
        std::vector<int> classes(ds.class_count);
        std::iota(classes.begin(), classes.end(), 0);
        for (double kv : axis_values) {
            int k = static_cast<int>(kv);
            if (k < 1 || k > ds.class_count)
                throw config_error("cluster count " + std::to_string(k) +
                                   " exceeds available classes (" +
                                   std::to_string(ds.class_count) + ")");
            std::map<std::string, std::pair<double, double>> sums;
            for (int rep = 0; rep < cfg.sweep_repeats; ++rep) {
                Rng rng(derive_seed(cfg.seed, detail::kSeedSubset,
                                    static_cast<std::uint64_t>(k),
                                    static_cast<std::uint64_t>(rep)));
                std::vector<int> chosen = classes;
                std::shuffle(chosen.begin(), chosen.end(), rng);
                chosen.resize(k);
                std::set<int> keep(chosen.begin(), chosen.end());

                std::vector<Eigen::Index> cols;
                for (Eigen::Index j = 0; j < ds.X.cols(); ++j)
                    if (keep.count(ds.labels[j])) cols.push_back(j);
                Matrix Xs(ds.X.rows(), static_cast<Eigen::Index>(cols.size()));
                std::vector<int> ls(cols.size());
                std::map<int, int> remap;
                for (std::size_t j = 0; j < cols.size(); ++j) {
                    Xs.col(static_cast<Eigen::Index>(j)) = ds.X.col(cols[j]);
                    auto [it, ins] = remap.try_emplace(ds.labels[cols[j]],
                                                       static_cast<int>(remap.size()));
                    ls[j] = it->second;
                }
                int rank = cfg.rank > 0 ? cfg.rank : k;
                double c = cfg.noise_levels.empty() ? 0.0 : cfg.noise_levels.front();
                Matrix Xn = add_noise(Xs, {c, derive_seed(cfg.seed, detail::kSeedNoise,
                                                          static_cast<std::uint64_t>(k),
                                                          static_cast<std::uint64_t>(rep))});
                TableResult tr = evaluate_methods(Xn, ls, rank, k, c, cfg,
                                                  static_cast<std::uint64_t>(rep));
                for (const MethodSummary& s : tr.summary) {
                    sums[s.method].first += s.mean_acc;
                    sums[s.method].second += s.mean_nmi;
                }
                all_records.insert(all_records.end(), tr.records.begin(), tr.records.end());
            }
            for (Method m : cfg.methods) {
                auto& [a, nm] = sums[method_name(m)];
                points.push_back({static_cast<double>(k), method_name(m),
                                  a / cfg.sweep_repeats, nm / cfg.sweep_repeats});
            }
        }
    } else {  // Hyper
        int rank = detail::resolve_rank(cfg, ds);
        double c = cfg.noise_levels.empty() ? 0.0 : cfg.noise_levels.front();
        Matrix Xn = add_noise(ds.X, {c, derive_seed(cfg.seed, detail::kSeedNoise, 0)});
        for (Method method : cfg.methods) {
            const std::vector<double>& grid = detail::grid_for(cfg, method);
            ExperimentConfig c2 = cfg;
            c2.methods = {method};
            for (double h : grid) {
                if (method == Method::FWRNMF) c2.p_grid = {h};
                else if (method == Method::EWRNMF) c2.gamma_grid = {h};
                TableResult tr = evaluate_methods(Xn, ds.labels, rank, ds.class_count,
                                                  c, c2, 0);
                points.push_back({h, method_name(method), tr.summary[0].mean_acc,
                                  tr.summary[0].mean_nmi});
                all_records.insert(all_records.end(), tr.records.begin(), tr.records.end());
            }
        }
    }

    std::ofstream out(cfg.out_dir + "/sweep.csv");
    if (!out) throw io_error("cannot write sweep.csv");
    out << "axis_value,method,mean_acc,mean_nmi\n";
    char buf[256];
    for (const SweepPoint& p : points) {
        std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g\n", p.axis_value,
                      p.method.c_str(), p.mean_acc, p.mean_nmi);
        out << buf;
    }
    detail::write_records_csv(all_records, cfg.out_dir + "/records.csv");
    nlohmann::json resolved;
    resolved["axis"] = axis == SweepAxis::NoiseC ? "noise_c"
                       : axis == SweepAxis::ClusterCount ? "cluster_count" : "hyper";
    detail::write_manifest(cfg, "sweep", resolved, cfg.out_dir + "/manifest.json");
    return points;
}

// Fits each method at rank 2 and writes repr_<method>.csv with one row per
// sample: h1, h2, true label, predicted label.
inline void dump_representation(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.rank != 2)
        throw config_error("representation dump requires rank 2");
    LabeledDataset ds = resolve_dataset(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    double c = cfg.noise_levels.empty() ? 0.0 : cfg.noise_levels.front();
    Matrix Xn = add_noise(ds.X, {c, derive_seed(cfg.seed, detail::kSeedNoise, 0)});
    for (Method method : cfg.methods) {
        double hyper = method == Method::FWRNMF ? cfg.p_grid.front()
                       : method == Method::EWRNMF ? cfg.gamma_grid.front() : 0.0;
        SolverOptions opts;
        opts.max_iterations = cfg.max_iterations;
        opts.rel_tolerance = cfg.tolerance;
        opts.rng_seed = derive_seed(cfg.seed, detail::kSeedNmf,
                                    static_cast<std::uint64_t>(method), 0, 0);
        if (method == Method::FWRNMF) opts.hyper_p = hyper;
        if (method == Method::EWRNMF) opts.hyper_gamma = hyper;
        Factorization f = fit(Xn, 2, method, opts);
        KMeansResult km = kmeans(f.H.transpose(), ds.class_count,
                                 derive_seed(cfg.seed, detail::kSeedKmeans,
                                             static_cast<std::uint64_t>(method), 0, 0),
                                 cfg.kmeans_max_iter);
        std::string path = cfg.out_dir + "/repr_" + method_name(method) + ".csv";
        std::ofstream out(path);
        if (!out) throw io_error("cannot write " + path);
        out << "h1,h2,true_label,predicted_label\n";
        char buf[128];
        for (Eigen::Index j = 0; j < f.H.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d\n", f.H(0, j), f.H(1, j),
                          ds.labels[j], km.assignments[j]);
            out << buf;
        }
    }
    detail::write_manifest(cfg, "dump-repr", {}, cfg.out_dir + "/manifest.json");
}

// Objective traces, one column per method, written to trace.csv.
inline std::map<std::string, std::vector<double>> dump_trace(const ExperimentConfig& cfg) {
    cfg.validate();
    LabeledDataset ds = resolve_dataset(cfg);
    int rank = detail::resolve_rank(cfg, ds);
    std::filesystem::create_directories(cfg.out_dir);
    double c = cfg.noise_levels.empty() ? 0.0 : cfg.noise_levels.front();
    Matrix Xn = add_noise(ds.X, {c, derive_seed(cfg.seed, detail::kSeedNoise, 0)});
    std::map<std::string, std::vector<double>> traces;
    std::size_t longest = 0;
    for (Method method : cfg.methods) {
        SolverOptions opts;
        opts.max_iterations = cfg.max_iterations;
        opts.rel_tolerance = cfg.tolerance;
        opts.rng_seed = derive_seed(cfg.seed, detail::kSeedNmf,
                                    static_cast<std::uint64_t>(method), 0, 0);
        if (method == Method::FWRNMF) opts.hyper_p = cfg.p_grid.front();
        if (method == Method::EWRNMF) opts.hyper_gamma = cfg.gamma_grid.front();
        Factorization f = fit(Xn, rank, method, opts);
        longest = std::max(longest, f.objective_trace.size());
        traces[method_name(method)] = std::move(f.objective_trace);
    }
    std::ofstream out(cfg.out_dir + "/trace.csv");
    if (!out) throw io_error("cannot write trace.csv");
    bool first = true;
    for (Method m : cfg.methods) {
        out << (first ? "" : ",") << method_name(m);
        first = false;
    }
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < longest; ++i) {
        first = true;
        for (Method m : cfg.methods) {
            const std::vector<double>& tr = traces[method_name(m)];
            out << (first ? "" : ",");
            if (i < tr.size()) {
                std::snprintf(buf, sizeof buf, "%.17g", tr[i]);
                out << buf;
            }
            first = false;
        }
        out << '\n';
    }
    detail::write_manifest(cfg, "trace", {}, cfg.out_dir + "/manifest.json");
    return traces;
}

}  // namespace awrnmf

#endif
