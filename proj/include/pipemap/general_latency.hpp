#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "pipemap/model.hpp"

namespace pipemap {

// Layered DAG whose source-to-sink paths are exactly the general mappings
// (any stage -> processor assignment, no replication). Vertex (i, u) means
// stage i runs on processor u; layer 0 holds the source `in`, layer n+1 the
// sink `out`. Edge weights:
//   in -> (1, v)          delta_0 / b_{in,v}
//   (i, u) -> (i+1, v)    w_i / s_u + (u != v ? delta_i / b_{u,v} : 0)
//   (n, u) -> out         w_n / s_u + delta_n / b_{u,out}
// Edges over absent links are omitted.
struct LayeredGraph {
  struct Edge {
    // Edge leaves layer `layer` (0 = source) and enters layer + 1.
    std::size_t layer = 0;
    Endpoint from;
    Endpoint to;
    double weight = 0.0;
  };

  std::size_t stages = 0;
  std::size_t processors = 0;
  // Grouped by layer, then by `from`, then by `to`.
  std::vector<Edge> edges;

  std::size_t vertex_count() const { return stages * processors + 2; }
};

LayeredGraph build_layered_graph(const Pipeline& pipeline,
                                 const Platform& platform);

// One edge per line: "<layer> <from> <to> <weight>", endpoints as processor
// ids or in/out, weights with 17 significant digits.
void write_layered_graph(std::ostream& os, const LayeredGraph& graph,
                         const Platform& platform);

struct GeneralMapping {
  // assignment[i] is the processor index running stage i + 1.
  std::vector<std::size_t> assignment;
  double latency = 0.0;
};

// Shortest path through the layered graph by forward relaxation in layer
// order, O(n m^2). At equal distance the smaller predecessor index wins.
// Returns nullopt when the sink is unreachable.
std::optional<GeneralMapping> min_latency_general(const Pipeline& pipeline,
                                                  const Platform& platform);

// Path weight of an explicit assignment, summed edge by edge in path order.
// Returns kInfeasibleLatency-style +inf when it crosses an absent link.
double general_mapping_latency(const Pipeline& pipeline,
                               const Platform& platform,
                               const std::vector<std::size_t>& assignment);

}  // namespace pipemap
