#pragma once

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mvpois {

inline constexpr std::size_t kMaxPatternVertices = 10;
inline constexpr std::size_t kMaxHostVertices = 12;
inline constexpr std::size_t kMaxHostPairs = kMaxHostVertices * (kMaxHostVertices - 1) / 2;

// Unordered vertex pair, stored with first < second (0-based).
using Edge = std::pair<int, int>;
using EdgeList = std::vector<Edge>;
// Edge set of a complete graph on at most kMaxHostVertices vertices.
using EdgeMask = std::bitset<kMaxHostPairs>;

// Bit index of the pair {a, b}; independent of the host size.
inline std::size_t pair_index(int a, int b) {
  if (a > b) std::swap(a, b);
  return static_cast<std::size_t>(b) * static_cast<std::size_t>(b - 1) / 2 + static_cast<std::size_t>(a);
}

EdgeMask to_mask(const EdgeList& edges);

// Fixed small simple graph without isolated vertices.
class PatternGraph {
 public:
  PatternGraph(std::size_t vertices, EdgeList edges, std::string name = {});

  static PatternGraph edge();
  static PatternGraph path(std::size_t edge_count);
  static PatternGraph cycle(std::size_t length);
  static PatternGraph complete(std::size_t vertices);
  static PatternGraph star(std::size_t leaves);

  // A builtin name (edge, triangle, path_k, cycle_k, complete_k, star_k) or
  // the edge-list form "v=5; edges=1-2,2-3,...". Throws ParameterError with
  // the column of the first offending character.
  static PatternGraph parse(const std::string& text);

  std::size_t vertex_count() const { return vertices_; }
  std::size_t edge_count() const { return edges_.size(); }
  const EdgeList& edges() const { return edges_; }
  const std::string& name() const { return name_; }
  double density() const { return static_cast<double>(edges_.size()) / static_cast<double>(vertices_); }

 private:
  std::size_t vertices_;
  EdgeList edges_;
  std::string name_;
};

// "a|b|..." where each chunk is an edge-list pattern or a comma-separated
// list of builtin names.
std::vector<PatternGraph> parse_pattern_list(const std::string& text);

std::uint64_t automorphism_count(const PatternGraph& h);

// Distinct copies of h on the labeled vertex set {0, ..., v-1}; there are v!/a of them.
std::vector<EdgeList> labeled_copies(const PatternGraph& h);

bool isomorphic(const PatternGraph& a, const PatternGraph& b);

struct DensityBalance {
  double density = 0.0;
  bool strictly_balanced = false;
  // A densest proper subgraph with at least one edge (absent for a single edge).
  std::optional<PatternGraph> witness;
};

DensityBalance density_and_balance(const PatternGraph& h);

// Pairs of copies of (H_i, H_j) placed on s labeled vertices whose vertex sets
// cover all s vertices, classified by shared edges k. `identical` counts the
// pairs with equal edge sets (only when the patterns are isomorphic).
struct OverlapTable {
  std::size_t edges_i = 0;
  std::size_t edges_j = 0;
  std::size_t vertices_i = 0;
  std::size_t vertices_j = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> entries;    // (k, s) -> N_{k,s}
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> identical;  // subset of entries
  // Minimum number of vertices incident to the shared edges, over pairs that
  // share k >= 1 edges and are not identical.
  std::map<std::size_t, std::size_t> min_incident;

  std::uint64_t count(std::size_t k, std::size_t s) const;
  // sum_{k,s} N_{k,s} C(n, s) which must equal |Gamma_i| |Gamma_j|.
  double total_pairs(std::size_t n) const;
};

OverlapTable overlap_table(const PatternGraph& hi, const PatternGraph& hj);

struct SharedEdgeStats {
  std::size_t max_shared = 0;                // M
  std::map<std::size_t, std::size_t> ell;    // k -> l_k for k = 1..M, 0 when infeasible
  std::vector<std::size_t> feasible;         // K
};

// With include_identical, an identical pair contributes k = e and l = v.
SharedEdgeStats shared_edge_stats(const OverlapTable& table, bool include_identical = false);
SharedEdgeStats shared_edge_stats(const PatternGraph& hi, const PatternGraph& hj, bool include_identical = false);

struct GammaEta {
  // min over proper subgraphs H' with e' > 0 of v' - e'/alpha
  double gamma_subgraph = 0.0;
  // min over feasible k < e_H of l_k - k/alpha for distinct overlapping copies
  // (+inf when two distinct copies never share an edge)
  std::optional<double> gamma_overlap;
  // same including the identical pair (k = e_H, l = v_H)
  std::optional<double> gamma_overlap_full;
  double eta = 0.0;  // v (d/alpha - 1)
};

GammaEta gamma_eta(const PatternGraph& h, double alpha);

// Every distinct copy of h in K_n (n <= kMaxHostVertices).
std::vector<EdgeMask> enumerate_copies(const PatternGraph& h, std::size_t n);

// Map the labeled copy through `vertices` (copy vertex x -> vertices[x]).
EdgeList relabel(const EdgeList& copy, const std::vector<int>& vertices);

std::string describe(const PatternGraph& h);

}  // namespace mvpois
