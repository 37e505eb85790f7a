#include "topotrack/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "topotrack/errors.hpp"

namespace topotrack {

std::size_t PersistenceDiagram::essential_count() const {
    std::size_t c = 0;
    for (const PersistencePair& p : pairs)
        if (p.essential()) ++c;
    return c;
}

std::vector<double> PersistenceDiagram::finite_deaths() const {
    std::vector<double> deaths;
    deaths.reserve(pairs.size());
    for (const PersistencePair& p : pairs)
        if (!p.essential()) deaths.push_back(p.death);
    std::sort(deaths.begin(), deaths.end());
    return deaths;
}

DistanceMatrix pairwise_distances(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    if (n == 0) throw InputError("cannot compute distances of an empty cloud");
    const int dim = cloud.dim;

    DistanceMatrix m;
    m.n = n;
    m.d.assign(n * n, 0.0);

#pragma omp parallel for schedule(static) if (n > 64)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const double* pi = cloud.coords.data() + static_cast<std::size_t>(i) * dim;
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) {
            const double* pj = cloud.coords.data() + j * dim;
            double s = 0.0;
            for (int c = 0; c < dim; ++c) {
                double diff = pi[c] - pj[c];
                s += diff * diff;
            }
            double dist = std::sqrt(s);
            m.d[static_cast<std::size_t>(i) * n + j] = dist;
            m.d[j * n + static_cast<std::size_t>(i)] = dist;
        }
    }
    return m;
}

namespace {

struct Edge {
    double w;
    std::uint32_t i;
    std::uint32_t j;
};

bool edge_less(const Edge& a, const Edge& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
}

class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    // returns false if already joined
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[b] = a;
        return true;
    }

  private:
    std::vector<std::size_t> parent_;
};

std::vector<Edge> sorted_edges(const DistanceMatrix& dist, double max_scale) {
    std::vector<Edge> edges;
    const std::size_t n = dist.n;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double w = dist.at(i, j);
            if (w <= max_scale) edges.push_back({w, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
        }
    }
    std::sort(edges.begin(), edges.end(), edge_less);
    return edges;
}

void validate_distance_matrix(const DistanceMatrix& dist) {
    if (dist.n == 0 || dist.d.size() != dist.n * dist.n)
        throw InvariantError("malformed distance matrix");
    for (double v : dist.d)
        if (!std::isfinite(v)) throw InvariantError("distance matrix has non-finite entries");
}

}  // namespace

PersistenceDiagram vr_persistence_h0(const DistanceMatrix& dist) {
    validate_distance_matrix(dist);
    const std::size_t n = dist.n;
    PersistenceDiagram diagram;
    diagram.dim = 0;
    diagram.pairs.reserve(n);

    UnionFind uf(n);
    for (const Edge& e : sorted_edges(dist, std::numeric_limits<double>::infinity())) {
        if (uf.unite(e.i, e.j)) diagram.pairs.push_back({0.0, e.w});
    }
    // complete graph: exactly one component survives
    diagram.pairs.push_back({0.0, std::numeric_limits<double>::infinity()});
    return diagram;
}

std::vector<PersistenceDiagram> vr_persistence_h0_batch(const std::vector<PointCloud>& clouds) {
    for (const PointCloud& c : clouds)
        if (c.size() == 0) throw InputError("cannot compute distances of an empty cloud");

    std::vector<PersistenceDiagram> diagrams(clouds.size());
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(clouds.size()); ++i) {
        try {
            diagrams[static_cast<std::size_t>(i)] =
                vr_persistence_h0(pairwise_distances(clouds[static_cast<std::size_t>(i)]));
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return diagrams;
}

PersistenceDiagram vr_persistence_h1(const DistanceMatrix& dist, double max_scale, std::size_t cap) {
    validate_distance_matrix(dist);
    if (dist.n > cap) {
        throw ConfigError("cloud of " + std::to_string(dist.n) + " points exceeds the H1 cap of " +
                          std::to_string(cap) + "; subsample the cloud or raise the cap");
    }
    if (!(max_scale >= 0.0)) throw ConfigError("H1 max_scale must be >= 0");

    PersistenceDiagram diagram;
    diagram.dim = 1;
    const std::size_t n = dist.n;
    if (n < 3) return diagram;

    const std::vector<Edge> edges = sorted_edges(dist, max_scale);

    // Positive edges create a 1-cycle (both endpoints already connected).
    std::vector<char> positive(edges.size(), 0);
    {
        UnionFind uf(n);
        for (std::size_t e = 0; e < edges.size(); ++e)
            if (!uf.unite(edges[e].i, edges[e].j)) positive[e] = 1;
    }

    // rank of each edge in filtration order
    std::unordered_map<std::uint64_t, std::uint32_t> edge_rank;
    edge_rank.reserve(edges.size());
    auto key = [n](std::size_t i, std::size_t j) { return static_cast<std::uint64_t>(i) * n + j; };
    for (std::size_t e = 0; e < edges.size(); ++e) edge_rank[key(edges[e].i, edges[e].j)] = static_cast<std::uint32_t>(e);

    struct Triangle {
        double diam;
        std::uint32_t i, j, k;
    };
    std::vector<Triangle> triangles;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dij = dist.at(i, j);
            if (dij > max_scale) continue;
            for (std::size_t k = j + 1; k < n; ++k) {
                double diam = std::max({dij, dist.at(i, k), dist.at(j, k)});
                if (diam <= max_scale)
                    triangles.push_back({diam, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                                         static_cast<std::uint32_t>(k)});
            }
        }
    }
    std::sort(triangles.begin(), triangles.end(), [](const Triangle& a, const Triangle& b) {
        if (a.diam != b.diam) return a.diam < b.diam;
        if (a.i != b.i) return a.i < b.i;
        if (a.j != b.j) return a.j < b.j;
        return a.k < b.k;
    });

    // Column reduction of the triangle boundary matrix over Z/2. Columns are
    // kept as sorted edge-rank vectors; `low` is the largest rank.
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> reduced_by_low;
    std::vector<char> edge_killed(edges.size(), 0);

    auto xor_columns = [](std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> out;
        out.reserve(a.size() + b.size());
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        a = std::move(out);
    };

    for (const Triangle& t : triangles) {
        std::vector<std::uint32_t> col = {edge_rank.at(key(t.i, t.j)), edge_rank.at(key(t.i, t.k)),
                                          edge_rank.at(key(t.j, t.k))};
        std::sort(col.begin(), col.end());
        while (!col.empty()) {
            auto it = reduced_by_low.find(col.back());
            if (it == reduced_by_low.end()) break;
            xor_columns(col, it->second);
        }
        if (col.empty()) continue;
        std::uint32_t low = col.back();
        edge_killed[low] = 1;
        double birth = edges[low].w;
        if (t.diam > birth) diagram.pairs.push_back({birth, t.diam});
        reduced_by_low.emplace(low, std::move(col));
    }

    // unpaired positive edges: classes still alive at the cutoff
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (positive[e] && !edge_killed[e])
            diagram.pairs.push_back({edges[e].w, std::numeric_limits<double>::infinity()});
    }

    std::sort(diagram.pairs.begin(), diagram.pairs.end(), [](const PersistencePair& a, const PersistencePair& b) {
        if (a.essential() != b.essential()) return !a.essential();
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.death < b.death;
    });
    return diagram;
}

std::size_t betti_at_scale(const PersistenceDiagram& diagram, double eps) {
    if (!(eps >= 0.0)) throw ConfigError("betti scale must be >= 0");
    std::size_t count = 0;
    for (const PersistencePair& p : diagram.pairs)
        if (p.birth <= eps && eps < p.death) ++count;
    return count;
}

namespace {
std::string format_double(double v) {
    if (v == std::numeric_limits<double>::infinity()) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram) {
    out << "dim,birth,death\n";
    for (const PersistencePair& p : diagram.pairs)
        out << diagram.dim << ',' << format_double(p.birth) << ',' << format_double(p.death) << '\n';
}

void write_diagram_csv_file(const std::string& path, const PersistenceDiagram& diagram) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write diagram CSV '" + path + "'");
    write_diagram_csv(out, diagram);
}

}  // namespace topotrack
