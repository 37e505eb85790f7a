#include "topotrack/classify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <unordered_map>

#include "topotrack/errors.hpp"
#include "topotrack/rng.hpp"

namespace topotrack {

void Dataset::validate() const {
    const std::size_t width = feature_width();
    for (const DataRow& row : rows) {
        if (row.features.size() != width)
            throw InvariantError("dataset has ragged feature rows (expected width " +
                                 std::to_string(width) + ")");
        for (double v : row.features)
            if (!std::isfinite(v)) throw InvariantError("dataset has non-finite features");
    }
}

SplitIndices split_indices(const std::vector<Provenance>& provenance, double train_fraction,
                           std::uint64_t seed, SplitMode mode) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ConfigError("train fraction must be in (0, 1), got " + std::to_string(train_fraction));

    // group row indices per object, keeping order of first appearance
    std::vector<std::string> object_order;
    std::unordered_map<std::string, std::vector<std::size_t>> by_object;
    for (std::size_t i = 0; i < provenance.size(); ++i) {
        const std::string& id = provenance[i].parent_id;
        auto [it, inserted] = by_object.try_emplace(id);
        if (inserted) object_order.push_back(id);
        it->second.push_back(i);
    }

    SplitIndices out;
    for (const std::string& id : object_order) {
        std::vector<std::size_t>& idx = by_object[id];
        if (idx.size() < 2)
            throw InputError("object '" + id + "' has only " + std::to_string(idx.size()) +
                             " feature row(s); need at least 2 to split");
        if (mode == SplitMode::shuffled) {
            Rng rng(derive_seed(seed, "split", fnv1a64(id)));
            rng.shuffle(idx);
        }
        std::size_t n_train = static_cast<std::size_t>(
            std::floor(train_fraction * static_cast<double>(idx.size())));
        for (std::size_t i = 0; i < idx.size(); ++i) {
            (i < n_train ? out.train : out.test).push_back(idx[i]);
        }
    }
    return out;
}

void split(const Dataset& dataset, double train_fraction, std::uint64_t seed,
           Dataset& train, Dataset& test, SplitMode mode) {
    std::vector<Provenance> prov;
    prov.reserve(dataset.rows.size());
    for (const DataRow& row : dataset.rows) prov.push_back(row.provenance);
    SplitIndices idx = split_indices(prov, train_fraction, seed, mode);

    train.rows.clear();
    test.rows.clear();
    train.rows.reserve(idx.train.size());
    test.rows.reserve(idx.test.size());
    for (std::size_t i : idx.train) train.rows.push_back(dataset.rows[i]);
    for (std::size_t i : idx.test) test.rows.push_back(dataset.rows[i]);
}

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

}  // namespace

std::string knn_predict(const Dataset& train, const std::vector<double>& query, int k,
                        const std::string& target_label) {
    if (train.rows.empty()) throw InputError("k-NN prediction needs a non-empty training set");
    if (k < 1) throw ConfigError("k must be >= 1, got " + std::to_string(k));
    if (static_cast<std::size_t>(k) > train.rows.size())
        throw ConfigError("k = " + std::to_string(k) + " exceeds training size " +
                          std::to_string(train.rows.size()));
    if (query.size() != train.feature_width())
        throw InvariantError("query width " + std::to_string(query.size()) +
                             " does not match training width " + std::to_string(train.feature_width()));

    // k nearest by (distance, row index)
    std::vector<std::pair<double, std::size_t>> order(train.rows.size());
    for (std::size_t i = 0; i < train.rows.size(); ++i)
        order[i] = {squared_distance(train.rows[i].features, query), i};
    std::partial_sort(order.begin(), order.begin() + k, order.end());

    int target_votes = 0;
    std::vector<std::size_t> confuser_neighbors;
    for (int i = 0; i < k; ++i) {
        const DataRow& row = train.rows[order[static_cast<std::size_t>(i)].second];
        if (row.label == target_label)
            ++target_votes;
        else
            confuser_neighbors.push_back(order[static_cast<std::size_t>(i)].second);
    }
    if (2 * target_votes > k) return target_label;

    // plurality among confuser labels; ties by earliest neighbor
    std::unordered_map<std::string, int> counts;
    for (std::size_t idx : confuser_neighbors) ++counts[train.rows[idx].label];
    std::string best;
    int best_count = 0;
    for (std::size_t idx : confuser_neighbors) {
        const std::string& l = train.rows[idx].label;
        if (counts[l] > best_count) {
            best_count = counts[l];
            best = l;
        }
    }
    return best;
}

long long ConfusionMatrix::total() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

long long ConfusionMatrix::correct() const { return counts[0][0] + counts[1][1]; }

double ConfusionMatrix::error_rate() const {
    long long t = total();
    if (t == 0) return 0.0;
    return static_cast<double>(t - correct()) / static_cast<double>(t);
}

ConfusionMatrix evaluate(const Dataset& train, const Dataset& test, int k,
                         const std::string& target_label) {
    if (train.rows.empty()) throw InputError("evaluate needs a non-empty training set");
    if (test.rows.empty()) throw InputError("evaluate needs a non-empty test set");
    if (k < 1) throw ConfigError("k must be >= 1, got " + std::to_string(k));
    if (static_cast<std::size_t>(k) > train.rows.size())
        throw ConfigError("k = " + std::to_string(k) + " exceeds training size " +
                          std::to_string(train.rows.size()));
    train.validate();
    test.validate();
    if (train.feature_width() != test.feature_width())
        throw InvariantError("train/test feature widths differ");

    std::set<Provenance> train_prov;
    for (const DataRow& row : train.rows) train_prov.insert(row.provenance);
    for (const DataRow& row : test.rows)
        if (train_prov.count(row.provenance))
            throw InvariantError("train/test provenance overlap at (" + row.provenance.parent_id +
                                 ", " + std::to_string(row.provenance.window_index) + ")");

    const std::size_t n = test.rows.size();
    std::vector<char> predicted_target(n, 0);
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(static) if (n > 32)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        try {
            std::string pred = knn_predict(train, test.rows[static_cast<std::size_t>(i)].features, k,
                                           target_label);
            predicted_target[static_cast<std::size_t>(i)] = pred == target_label ? 1 : 0;
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    ConfusionMatrix m;
    for (std::size_t i = 0; i < n; ++i) {
        int row = predicted_target[i] ? 1 : 0;
        int col = test.rows[i].label == target_label ? 1 : 0;
        ++m.counts[row][col];
    }
    for (int r = 0; r < 2; ++r) {
        long long row_sum = m.counts[r][0] + m.counts[r][1];
        m.row_defined[r] = row_sum > 0;
        for (int c = 0; c < 2; ++c) {
            m.row_normalized[r][c] = row_sum > 0
                                         ? static_cast<double>(m.counts[r][c]) / static_cast<double>(row_sum)
                                         : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return m;
}

}  // namespace topotrack
