#include "krongcrf/randnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace krongcrf {

namespace {

Index max_edges(Index n) { return n * (n - 1) / 2; }

// Pair index <-> (i, j) with i < j, enumerating pairs (0,1), (0,2), (1,2), ...
std::pair<Index, Index> pair_from_index(Index idx) {
    // idx = j(j-1)/2 + i for 0 <= i < j
    const auto j = static_cast<Index>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(idx))) / 2.0);
    Index jj = j;
    while (jj * (jj - 1) / 2 > idx) --jj;
    while ((jj + 1) * jj / 2 <= idx) ++jj;
    return {idx - jj * (jj - 1) / 2, jj};
}

} // namespace

GraphTopology gen_erdos_renyi(Index n, double rho, RngStream& rng) {
    if (n < 2 || rho <= 0.0 || rho > 1.0) {
        throw InvalidMatrix("gen_erdos_renyi needs n >= 2 and 0 < rho <= 1");
    }
    const Index total = max_edges(n);
    const auto m = static_cast<Index>(std::floor(rho * static_cast<double>(total)));

    // Partial Fisher-Yates over all pair indices; O(total) memory is fine at
    // the orders we generate (n <= a few hundred).
    std::vector<Index> pool(static_cast<std::size_t>(total));
    std::iota(pool.begin(), pool.end(), Index{0});
    GraphTopology g;
    g.n = n;
    g.edges.reserve(static_cast<std::size_t>(m));
    for (Index k = 0; k < m; ++k) {
        const auto pick = k + static_cast<Index>(rng.below(static_cast<std::uint64_t>(total - k)));
        std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(pick)]);
        g.edges.push_back(pair_from_index(pool[static_cast<std::size_t>(k)]));
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

GraphTopology gen_watts_strogatz(Index n, double rho, double p_rewire, RngStream& rng) {
    const auto half_k = static_cast<Index>(std::llround(rho * static_cast<double>(n - 1) / 2.0));
    const Index k = 2 * half_k;
    if (k < 2 || k >= n) {
        throw DegreeOutOfRange("watts-strogatz ring degree " + std::to_string(k) +
                               " out of range for n = " + std::to_string(n));
    }

    std::set<std::pair<Index, Index>> edges;
    auto ordered = [](Index a, Index b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
    for (Index i = 0; i < n; ++i) {
        for (Index m = 1; m <= half_k; ++m) {
            edges.insert(ordered(i, (i + m) % n));
        }
    }

    // Rewire each lattice edge independently, keeping the edge count fixed.
    // A rewire that would duplicate an edge or self-loop keeps the original.
    GraphTopology g;
    g.n = n;
    if (p_rewire > 0.0) {
        std::vector<std::pair<Index, Index>> lattice(edges.begin(), edges.end());
        for (const auto& [u, v] : lattice) {
            if (rng.uniform() >= p_rewire) continue;
            const auto w = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
            if (w == u || edges.count(ordered(u, w)) > 0) continue;
            edges.erase({u, v});
            edges.insert(ordered(u, w));
        }
    }
    g.edges.assign(edges.begin(), edges.end());
    return g;
}

Index barabasi_albert_attachment(Index n, double rho) {
    const auto target = std::floor(rho * static_cast<double>(max_edges(n)));
    const Index cap = n / 2;
    const double disc = static_cast<double>(n) * static_cast<double>(n) - 4.0 * target;
    if (disc < 0.0) return cap;
    // Smaller root of m(n - m) = target, rounded to the nearest integer.
    const double root = (static_cast<double>(n) - std::sqrt(disc)) / 2.0;
    const auto m = static_cast<Index>(std::llround(root));
    return std::clamp(m, Index{1}, cap);
}

GraphTopology gen_barabasi_albert(Index n, double rho, RngStream& rng) {
    if (n < 3 || rho <= 0.0) {
        throw InvalidMatrix("gen_barabasi_albert needs n >= 3 and rho > 0");
    }
    const Index m = barabasi_albert_attachment(n, rho);

    GraphTopology g;
    g.n = n;
    g.edges.reserve(static_cast<std::size_t>(m * (n - m)));
    // m seed vertices start edgeless; every later vertex attaches m edges to
    // distinct targets drawn proportionally to degree (repeated-nodes trick).
    std::vector<Index> repeated;
    repeated.reserve(static_cast<std::size_t>(2 * m * (n - m)));
    for (Index v = m; v < n; ++v) {
        std::set<Index> targets;
        while (static_cast<Index>(targets.size()) < m) {
            Index t;
            if (repeated.empty()) {
                t = static_cast<Index>(rng.below(static_cast<std::uint64_t>(v)));
            } else {
                t = repeated[static_cast<std::size_t>(rng.below(repeated.size()))];
            }
            targets.insert(t);
        }
        for (Index t : targets) {
            g.edges.emplace_back(t, v);
            repeated.push_back(t);
            repeated.push_back(v);
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

SimilarityMatrix assign_weights(const GraphTopology& g, const Vector& y_noisy) {
    if (y_noisy.size() != g.n) {
        throw DimensionMismatch("attribute vector length must equal vertex count");
    }
    Matrix s = Matrix::Zero(g.n, g.n);
    for (const auto& [i, j] : g.edges) {
        const double w = std::exp(-std::abs(y_noisy[i] - y_noisy[j]));
        s(i, j) = w;
        s(j, i) = w;
    }
    return SimilarityMatrix(std::move(s));
}

} // namespace krongcrf
