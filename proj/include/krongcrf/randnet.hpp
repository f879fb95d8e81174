#pragma once

#include "krongcrf/graph.hpp"
#include "krongcrf/rng.hpp"

#include <utility>
#include <vector>

namespace krongcrf {

/// Unweighted simple graph as an explicit edge list (no self-loops, no
/// duplicates; pairs stored with first < second).
struct GraphTopology {
    Index n = 0;
    std::vector<std::pair<Index, Index>> edges;

    Index edge_count() const { return static_cast<Index>(edges.size()); }
};

/// G(n, M) with M = floor(rho * n(n-1)/2) distinct edges chosen uniformly.
GraphTopology gen_erdos_renyi(Index n, double rho, RngStream& rng);

/// Ring lattice of even degree k = 2*round(rho*(n-1)/2), each edge rewired
/// independently with probability p_rewire. Edge count stays n*k/2.
/// Throws DegreeOutOfRange when k < 2 or k >= n.
GraphTopology gen_watts_strogatz(Index n, double rho, double p_rewire, RngStream& rng);

/// Preferential attachment with m chosen so that the final count m(n-m) best
/// matches floor(rho*n(n-1)/2); m is capped at floor(n/2), so densities above
/// ~50% saturate.
GraphTopology gen_barabasi_albert(Index n, double rho, RngStream& rng);

/// Attachment count used by gen_barabasi_albert for the given (n, rho).
Index barabasi_albert_attachment(Index n, double rho);

/// Weighted similarity matrix with w(i,j) = exp(-|y[i] - y[j]|) on the edges
/// of g (the absolute difference keeps the matrix symmetric).
SimilarityMatrix assign_weights(const GraphTopology& g, const Vector& y_noisy);

} // namespace krongcrf
