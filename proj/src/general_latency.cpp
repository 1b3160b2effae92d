#include "pipemap/general_latency.hpp"

#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace pipemap {

namespace {

constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Weight of the edge leaving `from` in `layer` towards `to`, or nullopt for
// an absent link.
std::optional<double> edge_weight(const Pipeline& pipeline,
                                  const Platform& platform, std::size_t layer,
                                  Endpoint from, Endpoint to) {
  double weight = 0.0;
  if (from.kind == Endpoint::Kind::kProcessor) {
    weight = pipeline.work(layer) / platform.processor(from.index).speed;
  }
  if (from == to) return weight;
  const std::optional<double> bw = platform.bandwidth(from, to);
  if (!bw) return std::nullopt;
  return weight + pipeline.volume(layer) / *bw;
}

}  // namespace

LayeredGraph build_layered_graph(const Pipeline& pipeline,
                                 const Platform& platform) {
  LayeredGraph graph;
  graph.stages = pipeline.stages();
  graph.processors = platform.size();
  const std::size_t n = graph.stages;
  const std::size_t m = graph.processors;
  graph.edges.reserve((n - 1) * m * m + 2 * m);

  auto add = [&](std::size_t layer, Endpoint from, Endpoint to) {
    if (auto w = edge_weight(pipeline, platform, layer, from, to)) {
      graph.edges.push_back({layer, from, to, *w});
    }
  };
  for (std::size_t v = 0; v < m; ++v) add(0, Endpoint::in(), Endpoint::proc(v));
  for (std::size_t layer = 1; layer < n; ++layer) {
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t v = 0; v < m; ++v) {
        add(layer, Endpoint::proc(u), Endpoint::proc(v));
      }
    }
  }
  for (std::size_t u = 0; u < m; ++u) add(n, Endpoint::proc(u), Endpoint::out());
  return graph;
}

void write_layered_graph(std::ostream& os, const LayeredGraph& graph,
                         const Platform& platform) {
  auto name = [&](Endpoint e) -> std::string {
    switch (e.kind) {
      case Endpoint::Kind::kIn:
        return "in";
      case Endpoint::Kind::kOut:
        return "out";
      case Endpoint::Kind::kProcessor:
        break;
    }
    return platform.processor(e.index).id;
  };
  const auto precision = os.precision(17);
  for (const LayeredGraph::Edge& e : graph.edges) {
    os << e.layer << ' ' << name(e.from) << ' ' << name(e.to) << ' '
       << e.weight << '\n';
  }
  os.precision(precision);
}

std::optional<GeneralMapping> min_latency_general(const Pipeline& pipeline,
                                                  const Platform& platform) {
  const std::size_t n = pipeline.stages();
  const std::size_t m = platform.size();

  // dist[i][u]: shortest distance from the source to vertex (i + 1, u).
  std::vector<std::vector<double>> dist(n, std::vector<double>(m, kUnreachable));
  std::vector<std::vector<std::size_t>> pred(n, std::vector<std::size_t>(m, 0));

  for (std::size_t v = 0; v < m; ++v) {
    if (auto w = edge_weight(pipeline, platform, 0, Endpoint::in(),
                             Endpoint::proc(v))) {
      dist[0][v] = *w;
    }
  }
  for (std::size_t layer = 1; layer < n; ++layer) {
    for (std::size_t u = 0; u < m; ++u) {
      const double base = dist[layer - 1][u];
      if (base == kUnreachable) continue;
      for (std::size_t v = 0; v < m; ++v) {
        auto w = edge_weight(pipeline, platform, layer, Endpoint::proc(u),
                             Endpoint::proc(v));
        if (!w) continue;
        // Strict comparison with u ascending keeps the smallest predecessor.
        if (base + *w < dist[layer][v]) {
          dist[layer][v] = base + *w;
          pred[layer][v] = u;
        }
      }
    }
  }

  double best = kUnreachable;
  std::size_t last = 0;
  for (std::size_t u = 0; u < m; ++u) {
    if (dist[n - 1][u] == kUnreachable) continue;
    auto w = edge_weight(pipeline, platform, n, Endpoint::proc(u),
                         Endpoint::out());
    if (!w) continue;
    if (dist[n - 1][u] + *w < best) {
      best = dist[n - 1][u] + *w;
      last = u;
    }
  }
  if (best == kUnreachable) return std::nullopt;

  GeneralMapping result;
  result.latency = best;
  result.assignment.assign(n, 0);
  result.assignment[n - 1] = last;
  for (std::size_t layer = n - 1; layer > 0; --layer) {
    result.assignment[layer - 1] = pred[layer][result.assignment[layer]];
  }
  return result;
}

double general_mapping_latency(const Pipeline& pipeline,
                               const Platform& platform,
                               const std::vector<std::size_t>& assignment) {
  const std::size_t n = pipeline.stages();
  if (assignment.size() != n) {
    throw std::invalid_argument("assignment must cover every stage");
  }
  for (std::size_t u : assignment) {
    if (u >= platform.size()) throw std::invalid_argument("unknown processor");
  }
  auto step = [&](std::size_t layer, Endpoint from, Endpoint to) {
    return edge_weight(pipeline, platform, layer, from, to)
        .value_or(kUnreachable);
  };
  double total = step(0, Endpoint::in(), Endpoint::proc(assignment[0]));
  for (std::size_t layer = 1; layer < n; ++layer) {
    total += step(layer, Endpoint::proc(assignment[layer - 1]),
                  Endpoint::proc(assignment[layer]));
  }
  return total + step(n, Endpoint::proc(assignment[n - 1]), Endpoint::out());
}

}  // namespace pipemap
