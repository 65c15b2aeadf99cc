#pragma once

// Stallings subgroup graphs: folded, base-pointed, label-deterministic core
// graphs representing finitely generated subgroups of a free group.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <queue>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shapeq/word.hpp"

namespace shapeq {

/// Edge read positively source -> target with its generator label, and
/// negatively target -> source with the inverse label.
struct Edge {
  std::uint32_t source = 0;
  std::uint32_t target = 0;
  std::uint32_t label = 0;

  friend constexpr bool operator==(const Edge&, const Edge&) = default;
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Labeled directed multigraph with a base vertex. Produced folded by fold().
class SubgroupGraph {
 public:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  explicit SubgroupGraph(Alphabet alphabet, std::size_t vertex_count = 1,
                         std::uint32_t base = 0)
      : alphabet_(std::move(alphabet)), vertex_count_(vertex_count), base_(base) {
    if (vertex_count_ == 0 || base_ >= vertex_count_) {
      throw InvalidArgument("subgroup graph needs a base vertex");
    }
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::uint32_t base() const noexcept { return base_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool folded() const noexcept { return folded_; }

  std::uint32_t add_vertex() { return static_cast<std::uint32_t>(vertex_count_++); }

  void add_edge(std::uint32_t source, std::uint32_t target, std::uint32_t label) {
    if (source >= vertex_count_ || target >= vertex_count_) {
      throw InvalidArgument("edge endpoint out of range");
    }
    if (label >= alphabet_.rank()) throw GeneratorOutOfRange(label, alphabet_.rank());
    edges_.push_back({source, target, label});
    folded_ = false;
    out_.clear();
    in_.clear();
  }

  /// Appends a closed path at the base spelling `w`.
  void add_base_loop(const Word& w) {
    if (!(w.alphabet() == alphabet_)) throw AlphabetMismatch();
    auto letters = w.letters();
    std::uint32_t current = base_;
    for (std::size_t i = 0; i < letters.size(); ++i) {
      std::uint32_t next = i + 1 == letters.size() ? base_ : add_vertex();
      if (letters[i].sign > 0) {
        add_edge(current, next, letters[i].generator);
      } else {
        add_edge(next, current, letters[i].generator);
      }
      current = next;
    }
  }

  /// Target of the edge labeled `l` leaving `v` (l inverse: the edge entering
  /// `v` read backwards). Requires a folded graph; kNone when absent.
  std::uint32_t step(std::uint32_t v, Letter l) const {
    const auto& table = l.sign > 0 ? out_ : in_;
    return table[static_cast<std::size_t>(v) * alphabet_.rank() + l.generator];
  }

  /// Total number of half-edges at each vertex (a loop counts twice).
  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> deg(vertex_count_, 0);
    for (const Edge& e : edges_) {
      ++deg[e.source];
      ++deg[e.target];
    }
    return deg;
  }

 private:
  friend SubgroupGraph fold(const SubgroupGraph& graph);

  void index_folded() {
    const std::size_t k = alphabet_.rank();
    out_.assign(vertex_count_ * k, kNone);
    in_.assign(vertex_count_ * k, kNone);
    for (const Edge& e : edges_) {
      out_[e.source * k + e.label] = e.target;
      in_[e.target * k + e.label] = e.source;
    }
    folded_ = true;
  }

  Alphabet alphabet_;
  std::size_t vertex_count_;
  std::uint32_t base_;
  std::vector<Edge> edges_;
  bool folded_ = false;
  std::vector<std::uint32_t> out_;
  std::vector<std::uint32_t> in_;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }

  std::uint32_t find(std::uint32_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  /// Returns {winner, loser}; the loser's root now points at the winner.
  std::pair<std::uint32_t, std::uint32_t> unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return {a, b};
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::size_t> size_;
};

struct HalfEdge {
  std::int64_t label;  // +(g+1) along the edge, -(g+1) against it
  std::uint32_t to;
};

}  // namespace detail

/// Folds to label-determinism, then trims to the core (no degree-1 vertices
/// other than the base). Vertices are renumbered in breadth-first order from
/// the base, which becomes vertex 0.
inline SubgroupGraph fold(const SubgroupGraph& graph) {
  const std::size_t n = graph.vertex_count();
  detail::UnionFind uf(n);
  std::vector<std::vector<detail::HalfEdge>> adj(n);
  for (const Edge& e : graph.edges()) {
    const auto g = static_cast<std::int64_t>(e.label) + 1;
    adj[e.source].push_back({g, e.target});
    adj[e.target].push_back({-g, e.source});
  }

  std::vector<char> queued(n, 1);
  std::queue<std::uint32_t> work;
  for (std::uint32_t v = 0; v < n; ++v) work.push(v);
  auto enqueue = [&](std::uint32_t v) {
    if (!queued[v]) {
      queued[v] = 1;
      work.push(v);
    }
  };

  std::unordered_map<std::int64_t, std::uint32_t> seen;
  while (!work.empty()) {
    std::uint32_t v = work.front();
    work.pop();
    queued[v] = 0;
    if (uf.find(v) != v) continue;  // merged away; its edges moved to the root

    seen.clear();
    auto& list = adj[v];
    std::vector<detail::HalfEdge> kept;
    kept.reserve(list.size());
    bool merged = false;
    for (std::size_t i = 0; i < list.size(); ++i) {
      detail::HalfEdge h{list[i].label, uf.find(list[i].to)};
      auto [it, inserted] = seen.try_emplace(h.label, h.to);
      if (inserted) {
        kept.push_back(h);
        continue;
      }
      std::uint32_t other = uf.find(it->second);
      if (other != h.to) {
        // Two equally labeled edges leave v towards different vertices.
        auto [winner, loser] = uf.unite(other, h.to);
        auto& into = adj[winner];
        auto& from = adj[loser];
        into.insert(into.end(), from.begin(), from.end());
        from.clear();
        from.shrink_to_fit();
        enqueue(winner);
        it->second = winner;
        if (winner == v || loser == v) {
          // v's own list changed underneath; rescan it from scratch.
          merged = true;
          break;
        }
      }
      // Duplicate edge: drop it here; its mirror is dropped at the other end.
      enqueue(h.to);
    }
    if (merged) {
      enqueue(uf.find(v));
      continue;
    }
    list = std::move(kept);
  }

  // Collect surviving edges from positive half-edges.
  std::vector<Edge> edges;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (uf.find(v) != v) continue;
    for (const auto& h : adj[v]) {
      if (h.label > 0) {
        edges.push_back({v, uf.find(h.to), static_cast<std::uint32_t>(h.label - 1)});
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  // Trim hanging trees.
  const std::uint32_t base = uf.find(graph.base());
  std::vector<std::size_t> deg(n, 0);
  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    ++deg[edges[i].source];
    ++deg[edges[i].target];
    incident[edges[i].source].push_back(i);
    if (edges[i].target != edges[i].source) incident[edges[i].target].push_back(i);
  }
  std::vector<char> edge_alive(edges.size(), 1);
  std::vector<std::uint32_t> leaves;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (v != base && uf.find(v) == v && deg[v] == 1) leaves.push_back(v);
  }
  while (!leaves.empty()) {
    std::uint32_t v = leaves.back();
    leaves.pop_back();
    if (deg[v] != 1) continue;
    for (std::size_t i : incident[v]) {
      if (!edge_alive[i]) continue;
      edge_alive[i] = 0;
      std::uint32_t u = edges[i].source == v ? edges[i].target : edges[i].source;
      --deg[v];
      --deg[u];
      if (u != base && deg[u] == 1) leaves.push_back(u);
      break;
    }
  }

  // Renumber breadth-first from the base over alive edges.
  std::vector<std::vector<std::pair<std::int64_t, std::uint32_t>>> nbr(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!edge_alive[i]) continue;
    const auto g = static_cast<std::int64_t>(edges[i].label) + 1;
    nbr[edges[i].source].push_back({g, edges[i].target});
    nbr[edges[i].target].push_back({-g, edges[i].source});
  }
  std::vector<std::uint32_t> order(n, SubgroupGraph::kNone);
  std::vector<std::uint32_t> visit{base};
  order[base] = 0;
  for (std::size_t head = 0; head < visit.size(); ++head) {
    auto& list = nbr[visit[head]];
    std::sort(list.begin(), list.end());
    for (const auto& [label, to] : list) {
      if (order[to] == SubgroupGraph::kNone) {
        order[to] = static_cast<std::uint32_t>(visit.size());
        visit.push_back(to);
      }
    }
  }

  SubgroupGraph result(graph.alphabet(), visit.size(), 0);
  std::vector<Edge> renamed;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!edge_alive[i] || order[edges[i].source] == SubgroupGraph::kNone) continue;
    renamed.push_back({order[edges[i].source], order[edges[i].target], edges[i].label});
  }
  std::sort(renamed.begin(), renamed.end());
  for (const Edge& e : renamed) result.add_edge(e.source, e.target, e.label);
  result.index_folded();
  return result;
}

/// A finitely generated subgroup: its folded core graph plus the generators it
/// was built from.
class SubgroupHandle {
 public:
  SubgroupHandle(SubgroupGraph graph, std::vector<Word> generators)
      : graph_(std::move(graph)), generators_(std::move(generators)) {
    if (!graph_.folded()) throw InvalidArgument("subgroup handle needs a folded graph");
  }

  const SubgroupGraph& graph() const noexcept { return graph_; }
  const std::vector<Word>& generators() const noexcept { return generators_; }
  const Alphabet& alphabet() const noexcept { return graph_.alphabet(); }

 private:
  SubgroupGraph graph_;
  std::vector<Word> generators_;
};

/// Subgroup generated by `gens`; identity words are ignored.
inline SubgroupHandle subgroup_from_words(const Alphabet& alphabet, std::vector<Word> gens) {
  SubgroupGraph bouquet(alphabet);
  for (const Word& w : gens) {
    if (!(w.alphabet() == alphabet)) throw AlphabetMismatch();
    bouquet.add_base_loop(w);
  }
  return SubgroupHandle(fold(bouquet), std::move(gens));
}

/// Membership by reading `w` from the base through the folded graph.
inline bool contains(const SubgroupHandle& sub, const Word& w) {
  if (!(w.alphabet() == sub.alphabet())) throw AlphabetMismatch();
  const SubgroupGraph& g = sub.graph();
  std::uint32_t v = g.base();
  for (Letter l : w.letters()) {
    v = g.step(v, l);
    if (v == SubgroupGraph::kNone) return false;
  }
  return v == g.base();
}

/// Rank of the subgroup: first Betti number E - V + 1 of the core graph.
inline std::size_t rank(const SubgroupHandle& sub) {
  const SubgroupGraph& g = sub.graph();
  return g.edge_count() + 1 - g.vertex_count();
}

/// Equality as based labeled graphs: a simultaneous deterministic walk from
/// the two base vertices must define a label-preserving bijection.
inline bool subgroup_equal(const SubgroupHandle& a, const SubgroupHandle& b) {
  if (!(a.alphabet() == b.alphabet())) throw AlphabetMismatch();
  const SubgroupGraph& ga = a.graph();
  const SubgroupGraph& gb = b.graph();
  if (ga.vertex_count() != gb.vertex_count() || ga.edge_count() != gb.edge_count()) {
    return false;
  }
  const std::size_t k = ga.alphabet().rank();
  std::vector<std::uint32_t> map(ga.vertex_count(), SubgroupGraph::kNone);
  std::vector<std::uint32_t> back(gb.vertex_count(), SubgroupGraph::kNone);
  std::vector<std::uint32_t> stack{ga.base()};
  map[ga.base()] = gb.base();
  back[gb.base()] = ga.base();
  while (!stack.empty()) {
    std::uint32_t v = stack.back();
    stack.pop_back();
    std::uint32_t w = map[v];
    for (std::uint32_t g = 0; g < k; ++g) {
      for (Letter l : {gen(g), inv(g)}) {
        std::uint32_t va = ga.step(v, l);
        std::uint32_t wb = gb.step(w, l);
        if ((va == SubgroupGraph::kNone) != (wb == SubgroupGraph::kNone)) return false;
        if (va == SubgroupGraph::kNone) continue;
        if (map[va] == SubgroupGraph::kNone && back[wb] == SubgroupGraph::kNone) {
          map[va] = wb;
          back[wb] = va;
          stack.push_back(va);
        } else if (map[va] != wb || back[wb] != va) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace shapeq
