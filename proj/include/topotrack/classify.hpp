#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topotrack/tracks.hpp"

namespace topotrack {

struct DataRow {
    std::vector<double> features;
    std::string label;
    Provenance provenance;
};

// Feature rows with uniform length. Rows keep dataset order; all determinism
// guarantees are phrased against that order.
struct Dataset {
    std::vector<DataRow> rows;

    std::size_t feature_width() const { return rows.empty() ? 0 : rows[0].features.size(); }
    void validate() const;  // uniform width, finite features
};

enum class SplitMode {
    shuffled,  // seeded per-object shuffle (the default experiment split)
    block,     // per object: first windows train, later windows test, so test
               // windows are phase-shifted against everything seen in training
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Index-level split driven by provenance alone: each object's rows are split
// independently (train size = floor(fraction * K_j)) and concatenated in
// object order of first appearance. Deterministic given the seed. Throws
// InputError when any object has fewer than 2 rows.
SplitIndices split_indices(const std::vector<Provenance>& provenance, double train_fraction,
                           std::uint64_t seed, SplitMode mode = SplitMode::shuffled);

// Same split applied to a full dataset.
void split(const Dataset& dataset, double train_fraction, std::uint64_t seed,
           Dataset& train, Dataset& test, SplitMode mode = SplitMode::shuffled);

// Binary k-NN vote: the k Euclidean-nearest training rows (distance ties by
// lower row index) vote target vs confuser, where "target" means
// label == target_label and every other label pools as confuser. The target
// needs a strict majority (vote ties go to the confuser side); a confuser
// prediction returns the most frequent confuser label among the neighbors.
std::string knn_predict(const Dataset& train, const std::vector<double>& query, int k,
                        const std::string& target_label);

// 2x2 confusion matrix, index 0 = confuser, 1 = target. Rows are the
// predicted class, columns the true class; row_normalized divides each row by
// its row sum (NaN for empty rows, with row_defined flagging them).
struct ConfusionMatrix {
    long long counts[2][2] = {{0, 0}, {0, 0}};
    double row_normalized[2][2] = {{0, 0}, {0, 0}};
    bool row_defined[2] = {false, false};

    long long total() const;
    long long correct() const;
    double error_rate() const;  // misclassified / total
};

// Predicts every test row against the training set (parallel over queries)
// and tallies the confusion matrix. Throws on empty train/test and on
// overlapping train/test provenance.
ConfusionMatrix evaluate(const Dataset& train, const Dataset& test, int k,
                         const std::string& target_label);

}  // namespace topotrack
