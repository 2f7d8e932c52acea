#ifndef AWRNMF_DATASET_HPP
#define AWRNMF_DATASET_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "awrnmf/errors.hpp"
#include "awrnmf/nmf.hpp"
#include "awrnmf/rng.hpp"

namespace awrnmf {

// X is M x N with columns as samples; files on disk are row-per-sample.
struct LabeledDataset {
    Matrix X;
    std::vector<int> labels;
    std::string name;
    int class_count = 0;
    std::vector<std::string> warnings;
};

struct NoiseSpec {
    double c = 0.0;
    std::uint64_t seed = 0;
};

struct PlantedInstance {
    LabeledDataset data;
    Matrix W_true;
    Matrix H_true;
    std::vector<Eigen::Index> outlier_columns;
};

namespace detail {

inline bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e && b != e && std::isfinite(out);
}

inline std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.push_back("");
    return out;
}

}  // namespace detail

// Loads a row-per-sample delimited file into the column-per-sample layout.
// The label column may be given by zero-based index or by header name. A
// header row is auto-detected (non-numeric value in a feature column).
// Features containing negatives are min-shifted to zero with a warning.
inline LabeledDataset load_csv(const std::string& path, const std::string& label_column,
                               char delimiter = ',') {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(detail::split_line(line, delimiter));
    }
    if (rows.empty()) throw parse_error("empty dataset: " + path);

    const std::size_t ncols = rows[0].size();
    if (ncols < 2) throw parse_error("need at least one feature and a label column");
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r].size() != ncols)
            throw parse_error(path + ": row " + std::to_string(r + 1) +
                              " has " + std::to_string(rows[r].size()) +
                              " fields, expected " + std::to_string(ncols));

    // resolve label column: integer index, else a header name
    std::size_t label_idx = ncols;
    bool header_named = false;
    {
        int idx;
        auto [p, ec] = std::from_chars(label_column.data(),
                                       label_column.data() + label_column.size(), idx);
        if (ec == std::errc() && p == label_column.data() + label_column.size()) {
            if (idx < 0) idx += static_cast<int>(ncols);
            if (idx < 0 || idx >= static_cast<int>(ncols))
                throw config_error("label column index out of range");
            label_idx = static_cast<std::size_t>(idx);
        } else {
            for (std::size_t c = 0; c < ncols; ++c)
                if (rows[0][c] == label_column) { label_idx = c; header_named = true; }
            if (label_idx == ncols)
                throw config_error("label column '" + label_column + "' not found in header");
        }
    }

    // header detection: every feature cell of row 0 fails to parse as a number
    std::size_t first_row = header_named ? 1 : 0;
    if (!header_named) {
        bool all_text = true;
        for (std::size_t c = 0; c < ncols; ++c) {
            double v;
            if (c != label_idx && detail::parse_double(rows[0][c], v)) all_text = false;
        }
        if (all_text) first_row = 1;
    }
    const std::size_t n = rows.size() - first_row;
    if (n == 0) throw parse_error("no data rows in " + path);
    const std::size_t m = ncols - 1;

    LabeledDataset ds;
    ds.name = path;
    ds.X.resize(m, n);
    ds.labels.resize(n);
    std::map<std::string, int> label_ids;
    for (std::size_t r = first_row; r < rows.size(); ++r) {
        std::size_t j = r - first_row;
        std::size_t fi = 0;
        for (std::size_t c = 0; c < ncols; ++c) {
            if (c == label_idx) continue;
            double v;
            if (!detail::parse_double(rows[r][c], v))
                throw parse_error(path + ": row " + std::to_string(r + 1) +
                                  ", column " + std::to_string(c + 1) +
                                  ": not a finite number: '" + rows[r][c] + "'");
            ds.X(fi++, j) = v;
        }
        auto [it, inserted] = label_ids.try_emplace(
            rows[r][label_idx], static_cast<int>(label_ids.size()));
        ds.labels[j] = it->second;
    }
    ds.class_count = static_cast<int>(label_ids.size());

    for (std::size_t i = 0; i < m; ++i) {
        double mn = ds.X.row(i).minCoeff();
        if (mn < 0.0) {
            ds.X.row(i).array() -= mn;
            ds.warnings.push_back("feature " + std::to_string(i) +
                                  " shifted by " + std::to_string(-mn) +
                                  " to restore nonnegativity");
        }
    }
    return ds;
}

// Row-per-sample writer, label last, full double precision. Inverse of
// load_csv for already-nonnegative data.
inline void save_csv(const LabeledDataset& ds, const std::string& path,
                     char delimiter = ',') {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    char buf[64];
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
        for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", ds.X(i, j));
            out << buf << delimiter;
        }
        out << ds.labels[j] << '\n';
    }
}

// X = W* H* with H* columns concentrated on one of L blocks; the block
// index is the label. outlier_count columns are then replaced by uniform
// draws scaled to 5x the max entry of X.
inline PlantedInstance synth_planted(Eigen::Index m, Eigen::Index l, Eigen::Index n,
                                     Eigen::Index outlier_count, std::uint64_t seed) {
    if (m < 1 || l < 1 || n < 1)
        throw dimension_error("all dimensions must be positive");
    if (l > std::min(m, n))
        throw dimension_error("rank exceeds min(rows, cols)");
    if (outlier_count >= n)
        throw dimension_error("outlier count must be less than column count");

    Rng rng(seed);
    std::uniform_real_distribution<double> strong(0.5, 1.0);
    std::uniform_real_distribution<double> weak(0.0, 0.1);
    std::uniform_real_distribution<double> wdist(0.1, 1.0);

    PlantedInstance inst;
    inst.W_true = Matrix::NullaryExpr(m, l, [&]() { return wdist(rng); });
    inst.H_true.resize(l, n);
    inst.data.labels.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Index block = j * l / n;  // balanced blocks
        inst.data.labels[j] = static_cast<int>(block);
        for (Eigen::Index k = 0; k < l; ++k)
            inst.H_true(k, j) = (k == block) ? strong(rng) : weak(rng);
    }
    inst.data.X = inst.W_true * inst.H_true;
    inst.data.class_count = static_cast<int>(l);
    inst.data.name = "synthetic";

    if (outlier_count > 0) {
        double scale = 5.0 * inst.data.X.maxCoeff();
        std::vector<Eigen::Index> idx(n);
        std::iota(idx.begin(), idx.end(), Eigen::Index{0});
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(outlier_count);
        std::sort(idx.begin(), idx.end());
        std::uniform_real_distribution<double> odist(0.0, 1.0);
        for (Eigen::Index j : idx)
            for (Eigen::Index i = 0; i < m; ++i)
                inst.data.X(i, j) = scale * odist(rng);
        inst.outlier_columns = std::move(idx);
    }
    return inst;
}

// Entrywise X_ij + c * g, g ~ Normal(0, X_ij), i.e. a standard-normal draw
// scaled by sqrt(X_ij). Negative results are clamped to zero.
inline Matrix add_noise(const Matrix& X, const NoiseSpec& spec) {
    if ((X.array() < 0.0).any())
        throw nonnegativity_error("noise model requires a nonnegative matrix");
    if (spec.c == 0.0) return X;
    Rng rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix out = X;
    for (Eigen::Index j = 0; j < X.cols(); ++j)
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            double g = gauss(rng);
            out(i, j) = std::max(0.0, X(i, j) + spec.c * std::sqrt(X(i, j)) * g);
        }
    return out;
}

}  // namespace awrnmf

#endif
