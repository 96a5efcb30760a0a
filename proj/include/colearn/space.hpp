#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "colearn/metrics.hpp"

namespace colearn {

struct WeightedEdge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  double phi = 0.0;
};

/// Maximum spanning forest over the nonzero-proximity graph.
struct SpanningForest {
  std::vector<WeightedEdge> edges;
  std::size_t components = 0;
  double total_weight() const;
};

/// Kruskal on edges ordered by (phi descending, a, b); ties resolve to the
/// lowest index pair. Disconnected inputs produce a spanning forest.
SpanningForest max_spanning_tree(const ProximityMatrix& phi);

/// All unordered pairs with phi strictly above `cutoff`, in (a, b) order.
std::vector<WeightedEdge> threshold_network(const ProximityMatrix& phi, double cutoff);

enum class EdgeOrigin { Mst, Threshold, Both };
const char* to_string(EdgeOrigin origin);

struct SpaceEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double phi = 0.0;
  EdgeOrigin origin = EdgeOrigin::Mst;
};

/// Undirected industry graph with per-node size attribute (firm count).
class IndustrySpaceGraph {
 public:
  IndustrySpaceGraph() = default;
  IndustrySpaceGraph(std::vector<double> node_sizes, std::vector<SpaceEdge> edges);

  std::size_t nodes() const { return sizes_.size(); }
  double node_size(std::size_t a) const { return sizes_[a]; }
  const std::vector<SpaceEdge>& edges() const { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t a) const { return adjacency_[a]; }
  std::size_t degree(std::size_t a) const { return adjacency_[a].size(); }
  bool connected() const;

 private:
  std::vector<double> sizes_;
  std::vector<SpaceEdge> edges_;  // sorted by (a, b)
  std::vector<std::vector<std::size_t>> adjacency_;
};

IndustrySpaceGraph superpose(const std::vector<WeightedEdge>& mst_edges,
                             const std::vector<WeightedEdge>& threshold_edges, std::vector<double> node_sizes);

/// source, target, phi, origin
void write_edge_list(std::ostream& out, const IndustrySpaceGraph& graph, const IndustryRegistry& industries);
/// GraphML with node label/sector/size and edge phi/origin attributes.
void write_graphml(std::ostream& out, const IndustrySpaceGraph& graph, const IndustryRegistry& industries);

}  // namespace colearn
