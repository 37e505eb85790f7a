#include "topotrack/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "topotrack/errors.hpp"

namespace topotrack::reference {

DistanceMatrix pairwise_distances(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    if (n == 0) throw InputError("cannot compute distances of an empty cloud");

    DistanceMatrix m;
    m.n = n;
    m.d.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (int c = 0; c < cloud.dim; ++c) {
                double diff = cloud.point(i)[static_cast<std::size_t>(c)] -
                              cloud.point(j)[static_cast<std::size_t>(c)];
                s += diff * diff;
            }
            m.d[i * n + j] = std::sqrt(s);
        }
    }
    return m;
}

std::vector<PersistenceDiagram> vr_persistence_h0_batch(const std::vector<PointCloud>& clouds) {
    std::vector<PersistenceDiagram> diagrams;
    diagrams.reserve(clouds.size());
    for (const PointCloud& c : clouds)
        diagrams.push_back(topotrack::vr_persistence_h0(reference::pairwise_distances(c)));
    return diagrams;
}

std::string knn_predict(const Dataset& train, const std::vector<double>& query, int k,
                        const std::string& target_label) {
    if (train.rows.empty()) throw InputError("k-NN prediction needs a non-empty training set");
    if (k < 1 || static_cast<std::size_t>(k) > train.rows.size())
        throw ConfigError("bad k for training size " + std::to_string(train.rows.size()));

    // full sort by (distance, row index), then a straight vote
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(train.rows.size());
    for (std::size_t i = 0; i < train.rows.size(); ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < query.size(); ++c) {
            double diff = train.rows[i].features[c] - query[c];
            s += diff * diff;
        }
        order.emplace_back(s, i);
    }
    std::sort(order.begin(), order.end());

    int target_votes = 0;
    for (int i = 0; i < k; ++i)
        if (train.rows[order[static_cast<std::size_t>(i)].second].label == target_label) ++target_votes;
    if (2 * target_votes > k) return target_label;

    std::map<std::string, int> counts;
    for (int i = 0; i < k; ++i) {
        const std::string& l = train.rows[order[static_cast<std::size_t>(i)].second].label;
        if (l != target_label) ++counts[l];
    }
    std::string best;
    int best_count = 0;
    for (int i = 0; i < k; ++i) {
        const std::string& l = train.rows[order[static_cast<std::size_t>(i)].second].label;
        if (l != target_label && counts[l] > best_count) {
            best_count = counts[l];
            best = l;
        }
    }
    return best;
}

ConfusionMatrix evaluate(const Dataset& train, const Dataset& test, int k,
                         const std::string& target_label) {
    if (train.rows.empty() || test.rows.empty()) throw InputError("evaluate needs non-empty train and test");

    ConfusionMatrix m;
    for (const DataRow& row : test.rows) {
        std::string pred = reference::knn_predict(train, row.features, k, target_label);
        int r = pred == target_label ? 1 : 0;
        int c = row.label == target_label ? 1 : 0;
        ++m.counts[r][c];
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

}  // namespace topotrack::reference
