#include "colearn/space.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace colearn {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (rank_[x] < rank_[y]) std::swap(x, y);
    parent_[y] = x;
    if (rank_[x] == rank_[y]) ++rank_[x];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

double SpanningForest::total_weight() const {
  double sum = 0.0;
  for (const auto& e : edges) sum += e.phi;
  return sum;
}

SpanningForest max_spanning_tree(const ProximityMatrix& phi) {
  const auto n = phi.size();
  std::vector<WeightedEdge> candidates;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (phi.values(a, b) > 0) candidates.push_back({a, b, phi.values(a, b)});
  std::stable_sort(candidates.begin(), candidates.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
    if (x.phi != y.phi) return x.phi > y.phi;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  SpanningForest forest;
  DisjointSets sets(n);
  for (const auto& e : candidates) {
    if (sets.unite(e.a, e.b)) forest.edges.push_back(e);
    if (forest.edges.size() + 1 == n) break;
  }
  forest.components = n - forest.edges.size();
  return forest;
}

std::vector<WeightedEdge> threshold_network(const ProximityMatrix& phi, double cutoff) {
  std::vector<WeightedEdge> edges;
  const auto n = phi.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (phi.values(a, b) > cutoff) edges.push_back({a, b, phi.values(a, b)});
  return edges;
}

const char* to_string(EdgeOrigin origin) {
  switch (origin) {
    case EdgeOrigin::Mst: return "mst";
    case EdgeOrigin::Threshold: return "threshold";
    case EdgeOrigin::Both: return "both";
  }
  return "?";
}

IndustrySpaceGraph::IndustrySpaceGraph(std::vector<double> node_sizes, std::vector<SpaceEdge> edges)
    : sizes_(std::move(node_sizes)), edges_(std::move(edges)), adjacency_(sizes_.size()) {
  for (auto& e : edges_) {
    if (e.a == e.b) throw std::invalid_argument("IndustrySpaceGraph: self-loop");
    if (e.a >= sizes_.size() || e.b >= sizes_.size()) throw std::out_of_range("IndustrySpaceGraph: bad node");
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const SpaceEdge& x, const SpaceEdge& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; });
  for (std::size_t k = 1; k < edges_.size(); ++k)
    if (edges_[k].a == edges_[k - 1].a && edges_[k].b == edges_[k - 1].b)
      throw std::invalid_argument("IndustrySpaceGraph: duplicate edge");
  for (const auto& e : edges_) {
    adjacency_[e.a].push_back(e.b);
    adjacency_[e.b].push_back(e.a);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

bool IndustrySpaceGraph::connected() const {
  if (sizes_.empty()) return true;
  std::vector<bool> seen(sizes_.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (const auto w : adjacency_[v])
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == sizes_.size();
}

IndustrySpaceGraph superpose(const std::vector<WeightedEdge>& mst_edges,
                             const std::vector<WeightedEdge>& threshold_edges, std::vector<double> node_sizes) {
  auto key = [](const WeightedEdge& e) { return std::make_pair(std::min(e.a, e.b), std::max(e.a, e.b)); };
  std::vector<SpaceEdge> merged;
  for (const auto& e : mst_edges) {
    const auto [a, b] = key(e);
    merged.push_back({a, b, e.phi, EdgeOrigin::Mst});
  }
  for (const auto& e : threshold_edges) {
    const auto [a, b] = key(e);
    auto it = std::find_if(merged.begin(), merged.end(), [&](const SpaceEdge& s) { return s.a == a && s.b == b; });
    if (it != merged.end()) {
      it->origin = EdgeOrigin::Both;
    } else {
      merged.push_back({a, b, e.phi, EdgeOrigin::Threshold});
    }
  }
  return IndustrySpaceGraph(std::move(node_sizes), std::move(merged));
}

void write_edge_list(std::ostream& out, const IndustrySpaceGraph& graph, const IndustryRegistry& industries) {
  out << "source,target,phi,origin\n";
  for (const auto& e : graph.edges())
    out << industries[e.a].code.label() << ',' << industries[e.b].code.label() << ',' << format_exact(e.phi) << ','
        << to_string(e.origin) << '\n';
}

void write_graphml(std::ostream& out, const IndustrySpaceGraph& graph, const IndustryRegistry& industries) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
         "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
         "  <key id=\"name\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n"
         "  <key id=\"sector\" for=\"node\" attr.name=\"sector\" attr.type=\"string\"/>\n"
         "  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"double\"/>\n"
         "  <key id=\"phi\" for=\"edge\" attr.name=\"phi\" attr.type=\"double\"/>\n"
         "  <key id=\"origin\" for=\"edge\" attr.name=\"origin\" attr.type=\"string\"/>\n"
         "  <graph id=\"industry_space\" edgedefault=\"undirected\">\n";
  for (std::size_t a = 0; a < graph.nodes(); ++a) {
    const auto& ind = industries[a];
    out << "    <node id=\"" << ind.code.label() << "\">\n"
        << "      <data key=\"label\">" << ind.code.label() << "</data>\n"
        << "      <data key=\"name\">" << xml_escape(ind.name) << "</data>\n"
        << "      <data key=\"sector\">" << ind.code.sector << "</data>\n"
        << "      <data key=\"size\">" << format_exact(graph.node_size(a)) << "</data>\n"
        << "    </node>\n";
  }
  std::size_t k = 0;
  for (const auto& e : graph.edges()) {
    out << "    <edge id=\"e" << k++ << "\" source=\"" << industries[e.a].code.label() << "\" target=\""
        << industries[e.b].code.label() << "\">\n"
        << "      <data key=\"phi\">" << format_exact(e.phi) << "</data>\n"
        << "      <data key=\"origin\">" << to_string(e.origin) << "</data>\n"
        << "    </edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

}  // namespace colearn
