#include "mvpois/graph_patterns.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "mvpois/errors.hpp"
#include "mvpois/stats.hpp"

namespace mvpois {

EdgeMask to_mask(const EdgeList& edges) {
  EdgeMask m;
  for (const auto& [a, b] : edges) m.set(pair_index(a, b));
  return m;
}

PatternGraph::PatternGraph(std::size_t vertices, EdgeList edges, std::string name)
    : vertices_(vertices), edges_(std::move(edges)), name_(std::move(name)) {
  if (vertices_ == 0) throw ParameterError("pattern: needs at least one vertex");
  if (edges_.empty()) throw ParameterError("pattern: needs at least one edge");
  std::vector<int> degree(vertices_, 0);
  for (auto& [a, b] : edges_) {
    if (a == b) throw ParameterError("pattern: self-loop");
    if (a > b) std::swap(a, b);
    if (a < 0 || static_cast<std::size_t>(b) >= vertices_) throw ParameterError("pattern: vertex out of range");
    ++degree[static_cast<std::size_t>(a)];
    ++degree[static_cast<std::size_t>(b)];
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw ParameterError("pattern: repeated edge");
  }
  if (std::find(degree.begin(), degree.end(), 0) != degree.end()) {
    throw ParameterError("pattern: isolated vertex");
  }
  if (name_.empty()) name_ = describe(*this);
}

PatternGraph PatternGraph::edge() { return PatternGraph(2, {{0, 1}}, "edge"); }

PatternGraph PatternGraph::path(std::size_t edge_count) {
  if (edge_count == 0) throw ParameterError("path_k: k must be at least 1");
  EdgeList e;
  for (std::size_t i = 0; i < edge_count; ++i) e.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
  return PatternGraph(edge_count + 1, std::move(e), "path_" + std::to_string(edge_count));
}

PatternGraph PatternGraph::cycle(std::size_t length) {
  if (length < 3) throw ParameterError("cycle_k: k must be at least 3");
  EdgeList e;
  for (std::size_t i = 0; i < length; ++i) {
    e.emplace_back(static_cast<int>(i), static_cast<int>((i + 1) % length));
  }
  return PatternGraph(length, std::move(e), "cycle_" + std::to_string(length));
}

PatternGraph PatternGraph::complete(std::size_t vertices) {
  if (vertices < 2) throw ParameterError("complete_k: k must be at least 2");
  EdgeList e;
  for (std::size_t a = 0; a < vertices; ++a) {
    for (std::size_t b = a + 1; b < vertices; ++b) e.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  return PatternGraph(vertices, std::move(e), "complete_" + std::to_string(vertices));
}

PatternGraph PatternGraph::star(std::size_t leaves) {
  if (leaves == 0) throw ParameterError("star_k: k must be at least 1");
  EdgeList e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, static_cast<int>(i));
  return PatternGraph(leaves + 1, std::move(e), "star_" + std::to_string(leaves));
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(const std::string& text, std::size_t column, const std::string& what) {
  std::ostringstream msg;
  msg << "pattern \"" << text << "\": line 1, column " << column + 1 << ": " << what;
  throw ParameterError(msg.str());
}

class EdgeListParser {
 public:
  explicit EdgeListParser(const std::string& text) : text_(text) {}

  PatternGraph parse() {
    expect_word("v");
    expect('=');
    const std::size_t v = number();
    skip_space();
    expect(';');
    expect_word("edges");
    expect('=');
    EdgeList edges;
    while (true) {
      const std::size_t a_pos = skip_space();
      const std::size_t a = number();
      expect('-');
      const std::size_t b_pos = skip_space();
      const std::size_t b = number();
      if (a == 0 || a > v) parse_error(text_, a_pos, "vertex " + std::to_string(a) + " outside 1.." + std::to_string(v));
      if (b == 0 || b > v) parse_error(text_, b_pos, "vertex " + std::to_string(b) + " outside 1.." + std::to_string(v));
      if (a == b) parse_error(text_, b_pos, "self-loop");
      edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
      skip_space();
      if (pos_ == text_.size()) break;
      expect(',');
    }
    try {
      return PatternGraph(v, std::move(edges));
    } catch (const ParameterError& e) {
      parse_error(text_, 0, e.what());
    }
  }

 private:
  std::size_t skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return pos_;
  }
  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) parse_error(text_, pos_, std::string("expected '") + c + "'");
    ++pos_;
  }
  void expect_word(const std::string& w) {
    skip_space();
    if (text_.compare(pos_, w.size(), w) != 0) parse_error(text_, pos_, "expected \"" + w + "\"");
    pos_ += w.size();
  }
  std::size_t number() {
    skip_space();
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + static_cast<std::size_t>(text_[pos_] - '0');
      if (value > 1000) parse_error(text_, start, "number too large");
      ++pos_;
    }
    if (pos_ == start) parse_error(text_, start, "expected a number");
    return value;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

PatternGraph PatternGraph::parse(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) parse_error(raw, 0, "empty pattern");
  if (text.rfind("v", 0) == 0 && text.find('=') != std::string::npos) return EdgeListParser(text).parse();
  if (text == "edge") return edge();
  if (text == "triangle") return PatternGraph(3, {{0, 1}, {1, 2}, {0, 2}}, "triangle");
  const auto underscore = text.find('_');
  if (underscore != std::string::npos) {
    const std::string kind = text.substr(0, underscore);
    const std::string arg = text.substr(underscore + 1);
    if (arg.empty() || !std::all_of(arg.begin(), arg.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      parse_error(text, underscore + 1, "expected a size after '_'");
    }
    if (arg.size() > 3) parse_error(text, underscore + 1, "size too large");
    const auto k = static_cast<std::size_t>(std::stoul(arg));
    try {
      if (kind == "path") return path(k);
      if (kind == "cycle") return cycle(k);
      if (kind == "complete") return complete(k);
      if (kind == "star") return star(k);
    } catch (const ParameterError& e) {
      parse_error(text, underscore + 1, e.what());
    }
  }
  parse_error(text, 0, "unknown pattern name");
}

std::vector<PatternGraph> parse_pattern_list(const std::string& text) {
  std::vector<PatternGraph> out;
  std::stringstream chunks(text);
  std::string chunk;
  while (std::getline(chunks, chunk, '|')) {
    const std::string t = trim(chunk);
    if (t.rfind("v", 0) == 0 && t.find('=') != std::string::npos) {
      out.push_back(PatternGraph::parse(t));
      continue;
    }
    std::stringstream names(t);
    std::string name;
    while (std::getline(names, name, ',')) out.push_back(PatternGraph::parse(name));
  }
  if (out.empty()) throw ParameterError("pattern list: no patterns given");
  return out;
}

namespace {

void check_vertex_cap(const PatternGraph& h) {
  if (h.vertex_count() > kMaxPatternVertices) {
    throw ResourceError("pattern has " + std::to_string(h.vertex_count()) + " vertices; the enumeration cap is " +
                        std::to_string(kMaxPatternVertices));
  }
}

EdgeMask permuted_mask(const EdgeList& edges, const std::vector<int>& perm) {
  EdgeMask m;
  for (const auto& [a, b] : edges) {
    m.set(pair_index(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]));
  }
  return m;
}

std::size_t incident_vertices(const EdgeMask& mask, std::size_t host) {
  std::uint32_t seen = 0;
  for (std::size_t b = 1; b < host; ++b) {
    for (std::size_t a = 0; a < b; ++a) {
      if (mask.test(pair_index(static_cast<int>(a), static_cast<int>(b)))) seen |= (1u << a) | (1u << b);
    }
  }
  return static_cast<std::size_t>(std::popcount(seen));
}

// (vertex count, edge count) of the subgraph spanned by the chosen edges.
std::pair<std::size_t, std::size_t> spanned(const EdgeList& edges, std::uint32_t subset) {
  std::uint32_t seen = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if ((subset >> i) & 1u) {
      seen |= (1u << edges[i].first) | (1u << edges[i].second);
      ++count;
    }
  }
  return {static_cast<std::size_t>(std::popcount(seen)), count};
}

void check_subset_cap(const PatternGraph& h) {
  if (h.edge_count() > 24) throw ResourceError("pattern has too many edges for subgraph enumeration");
}

}  // namespace

std::uint64_t automorphism_count(const PatternGraph& h) {
  check_vertex_cap(h);
  const EdgeMask base = to_mask(h.edges());
  std::vector<int> perm(h.vertex_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    if (permuted_mask(h.edges(), perm) == base) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

std::vector<EdgeList> labeled_copies(const PatternGraph& h) {
  check_vertex_cap(h);
  std::unordered_set<EdgeMask> seen;
  std::vector<EdgeList> out;
  std::vector<int> perm(h.vertex_count());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    EdgeList image;
    for (const auto& [a, b] : h.edges()) {
      int x = perm[static_cast<std::size_t>(a)];
      int y = perm[static_cast<std::size_t>(b)];
      if (x > y) std::swap(x, y);
      image.emplace_back(x, y);
    }
    if (seen.insert(to_mask(image)).second) {
      std::sort(image.begin(), image.end());
      out.push_back(std::move(image));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool isomorphic(const PatternGraph& a, const PatternGraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  check_vertex_cap(a);
  const EdgeMask target = to_mask(b.edges());
  std::vector<int> perm(a.vertex_count());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (permuted_mask(a.edges(), perm) == target) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

DensityBalance density_and_balance(const PatternGraph& h) {
  check_subset_cap(h);
  const std::size_t e = h.edge_count();
  const std::size_t v = h.vertex_count();
  DensityBalance out;
  out.density = h.density();
  out.strictly_balanced = true;
  std::uint32_t best = 0;
  std::size_t best_v = 1;
  std::size_t best_e = 0;
  const std::uint32_t full = (e == 32) ? ~0u : ((1u << e) - 1u);
  for (std::uint32_t subset = 1; subset < full; ++subset) {
    const auto [sv, se] = spanned(h.edges(), subset);
    // d' < d  <=>  e' v < e v'
    if (se * v >= e * sv) out.strictly_balanced = false;
    if (sv < v && se * best_v > best_e * sv) {
      best = subset;
      best_v = sv;
      best_e = se;
    }
  }
  if (best != 0) {
    std::vector<int> relabel_map(v, -1);
    int next = 0;
    EdgeList edges;
    for (std::size_t i = 0; i < e; ++i) {
      if (!((best >> i) & 1u)) continue;
      auto [a, b] = h.edges()[i];
      if (relabel_map[static_cast<std::size_t>(a)] < 0) relabel_map[static_cast<std::size_t>(a)] = next++;
      if (relabel_map[static_cast<std::size_t>(b)] < 0) relabel_map[static_cast<std::size_t>(b)] = next++;
      edges.emplace_back(relabel_map[static_cast<std::size_t>(a)], relabel_map[static_cast<std::size_t>(b)]);
    }
    out.witness = PatternGraph(static_cast<std::size_t>(next), std::move(edges));
  }
  return out;
}

std::uint64_t OverlapTable::count(std::size_t k, std::size_t s) const {
  auto it = entries.find({k, s});
  return it == entries.end() ? 0 : it->second;
}

double OverlapTable::total_pairs(std::size_t n) const {
  CompensatedSum total;
  for (const auto& [key, c] : entries) {
    total.add(static_cast<double>(c) * binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(key.second)));
  }
  return total.value();
}

namespace {

std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

OverlapTable overlap_table(const PatternGraph& hi, const PatternGraph& hj) {
  const std::size_t vi = hi.vertex_count();
  const std::size_t vj = hj.vertex_count();
  if (vi + vj > kMaxHostVertices) {
    throw ResourceError("overlap_table: v_i + v_j = " + std::to_string(vi + vj) + " exceeds the cap of " +
                        std::to_string(kMaxHostVertices));
  }
  OverlapTable table;
  table.edges_i = hi.edge_count();
  table.edges_j = hj.edge_count();
  table.vertices_i = vi;
  table.vertices_j = vj;

  const auto copies_i = labeled_copies(hi);
  const auto copies_j = labeled_copies(hj);
  std::vector<EdgeMask> masks_i;
  for (const auto& c : copies_i) masks_i.push_back(to_mask(c));

  // Every placement (A, B) covering s = vi + vj - t vertices with |A n B| = t
  // is a relabeling of A = {0..vi-1}, B = {vi-t .. vi-t+vj-1}; there are
  // s! / (t! (vi-t)! (vj-t)!) of them.
  for (std::size_t t = 0; t <= std::min(vi, vj); ++t) {
    const std::size_t s = vi + vj - t;
    const std::uint64_t placements = factorial(s) / (factorial(t) * factorial(vi - t) * factorial(vj - t));
    std::vector<int> shift(vj);
    std::iota(shift.begin(), shift.end(), static_cast<int>(vi - t));
    std::map<std::size_t, std::uint64_t> by_k;
    std::map<std::size_t, std::uint64_t> identical_by_k;
    for (const auto& cj : copies_j) {
      const EdgeMask mj = to_mask(relabel(cj, shift));
      for (const auto& mi : masks_i) {
        const EdgeMask shared = mi & mj;
        const std::size_t k = shared.count();
        ++by_k[k];
        if (mi == mj) {
          ++identical_by_k[k];
        } else if (k > 0) {
          const std::size_t l = incident_vertices(shared, s);
          auto it = table.min_incident.find(k);
          if (it == table.min_incident.end() || l < it->second) table.min_incident[k] = l;
        }
      }
    }
    for (const auto& [k, c] : by_k) table.entries[{k, s}] += c * placements;
    for (const auto& [k, c] : identical_by_k) table.identical[{k, s}] += c * placements;
  }
  return table;
}

SharedEdgeStats shared_edge_stats(const OverlapTable& table, bool include_identical) {
  SharedEdgeStats stats;
  std::map<std::size_t, std::size_t> ell = table.min_incident;
  if (include_identical) {
    for (const auto& [key, c] : table.identical) {
      if (c == 0 || key.first == 0) continue;
      auto it = ell.find(key.first);
      if (it == ell.end() || key.second < it->second) ell[key.first] = key.second;
    }
  }
  for (const auto& [k, l] : ell) stats.max_shared = std::max(stats.max_shared, k);
  for (std::size_t k = 1; k <= stats.max_shared; ++k) {
    auto it = ell.find(k);
    stats.ell[k] = it == ell.end() ? 0 : it->second;
    if (stats.ell[k] > 0) stats.feasible.push_back(k);
  }
  return stats;
}

SharedEdgeStats shared_edge_stats(const PatternGraph& hi, const PatternGraph& hj, bool include_identical) {
  return shared_edge_stats(overlap_table(hi, hj), include_identical);
}

GammaEta gamma_eta(const PatternGraph& h, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("gamma_eta: alpha must be positive");
  check_subset_cap(h);
  GammaEta out;
  const std::size_t e = h.edge_count();
  out.gamma_subgraph = std::numeric_limits<double>::infinity();
  const std::uint32_t full = (1u << e) - 1u;
  for (std::uint32_t subset = 1; subset < full; ++subset) {
    const auto [sv, se] = spanned(h.edges(), subset);
    out.gamma_subgraph = std::min(out.gamma_subgraph, static_cast<double>(sv) - static_cast<double>(se) / alpha);
  }
  out.eta = static_cast<double>(h.vertex_count()) * (h.density() / alpha - 1.0);

  if (2 * h.vertex_count() <= kMaxHostVertices) {
    const auto table = overlap_table(h, h);
    const auto proper = shared_edge_stats(table, false);
    double g = std::numeric_limits<double>::infinity();
    for (auto k : proper.feasible) {
      if (k < e) g = std::min(g, static_cast<double>(proper.ell.at(k)) - static_cast<double>(k) / alpha);
    }
    out.gamma_overlap = g;
    out.gamma_overlap_full =
        std::min(g, static_cast<double>(h.vertex_count()) - static_cast<double>(e) / alpha);
  }
  return out;
}

EdgeList relabel(const EdgeList& copy, const std::vector<int>& vertices) {
  EdgeList out;
  out.reserve(copy.size());
  for (const auto& [a, b] : copy) {
    int x = vertices[static_cast<std::size_t>(a)];
    int y = vertices[static_cast<std::size_t>(b)];
    if (x > y) std::swap(x, y);
    out.emplace_back(x, y);
  }
  return out;
}

std::vector<EdgeMask> enumerate_copies(const PatternGraph& h, std::size_t n) {
  if (n > kMaxHostVertices) {
    throw ResourceError("enumerate_copies: host of " + std::to_string(n) + " vertices exceeds the cap of " +
                        std::to_string(kMaxHostVertices));
  }
  const std::size_t v = h.vertex_count();
  std::vector<EdgeMask> out;
  if (v > n) return out;
  const auto copies = labeled_copies(h);
  // Iterate v-subsets of {0..n-1} in lexicographic order.
  std::vector<int> subset(v);
  std::iota(subset.begin(), subset.end(), 0);
  while (true) {
    for (const auto& c : copies) out.push_back(to_mask(relabel(c, subset)));
    std::size_t i = v;
    while (i > 0 && subset[i - 1] == static_cast<int>(n - v + i - 1)) --i;
    if (i == 0) break;
    ++subset[i - 1];
    for (std::size_t j = i; j < v; ++j) subset[j] = subset[j - 1] + 1;
  }
  return out;
}

std::string describe(const PatternGraph& h) {
  std::ostringstream os;
  os << "v=" << h.vertex_count() << "; edges=";
  for (std::size_t i = 0; i < h.edges().size(); ++i) {
    if (i) os << ',';
    os << h.edges()[i].first + 1 << '-' << h.edges()[i].second + 1;
  }
  return os.str();
}

}  // namespace mvpois
