#include "ctfactor/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "ctfactor/error.hpp"
#include "ctfactor/kernels.hpp"

namespace ctfactor {

namespace {

constexpr std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << (i % 64); }

void check_vertex(const ThresholdedGraph& g, std::size_t i) {
  if (i >= g.p()) throw IndexError("vertex " + std::to_string(i) + " out of range for p = " + std::to_string(g.p()));
}

}  // namespace

ThresholdedGraph::ThresholdedGraph(std::size_t p, double tau)
    : p_(p), words_(kernels::words_for_bits(p)), tau_(tau), rows_(p * words_, 0), degree_(p, 0) {
  for (std::size_t i = 0; i < p_; ++i) rows_[i * words_ + i / 64] |= bit(i);
}

ThresholdedGraph ThresholdedGraph::from_edges(std::size_t p, const std::vector<Pair>& edges) {
  ThresholdedGraph g(p, 0.0);
  for (const auto& [i, j] : edges) g.add_edge(i, j);
  return g;
}

bool ThresholdedGraph::adjacent(std::size_t i, std::size_t j) const {
  return i != j && (rows_[i * words_ + j / 64] & bit(j)) != 0;
}

void ThresholdedGraph::add_edge(std::size_t i, std::size_t j) {
  check_vertex(*this, i);
  check_vertex(*this, j);
  if (i == j || adjacent(i, j)) return;
  rows_[i * words_ + j / 64] |= bit(j);
  rows_[j * words_ + i / 64] |= bit(i);
  ++degree_[i];
  ++degree_[j];
}

void ThresholdedGraph::finish_degrees() {
  for (std::size_t i = 0; i < p_; ++i) {
    std::size_t count = 0;
    for (std::size_t w = 0; w < words_; ++w) count += static_cast<std::size_t>(std::popcount(rows_[i * words_ + w]));
    degree_[i] = count - 1;
  }
}

std::size_t ThresholdedGraph::edge_count() const {
  std::size_t total = 0;
  for (std::size_t d : degree_) total += d;
  return total / 2;
}

std::vector<Pair> ThresholdedGraph::edges() const {
  std::vector<Pair> out;
  for (std::size_t i = 0; i < p_; ++i) {
    for (std::size_t j = i + 1; j < p_; ++j) {
      if (adjacent(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

ThresholdedGraph build_graph(const Matrix& r, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("threshold must lie in [0, 1], got " + std::to_string(tau));
  if (r.rows() != r.cols() || r.rows() == 0) throw DomainError("correlation matrix must be square and non-empty");
  const auto p = static_cast<std::size_t>(r.rows());
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    if (!(std::fabs(r(i, i) - 1.0) <= 1e-9)) {
      throw DomainError("correlation diagonal entry " + std::to_string(i) + " is not 1");
    }
  }
  if (!is_symmetric(r, 1e-9)) throw DomainError("correlation matrix is not symmetric");

  // Rows are read from the lower triangle mirrored, so tiny asymmetries in
  // the input cannot produce a directed edge.
  const Matrix sym = is_symmetric(r) ? r : Matrix(r.triangularView<Eigen::Lower>()).selfadjointView<Eigen::Lower>();

  ThresholdedGraph g;
  g.p_ = p;
  g.words_ = kernels::words_for_bits(p);
  g.tau_ = tau;
  g.rows_.assign(p * g.words_, 0);
  g.degree_.assign(p, 0);
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < p; ++i) {
    std::uint64_t* row = g.rows_.data() + i * g.words_;
    k.threshold_mask(sym.col(static_cast<Eigen::Index>(i)).data(), p, tau, row);
    row[i / 64] |= bit(i);
  }
  g.finish_degrees();
  return g;
}

std::vector<std::size_t> neighborhood(const ThresholdedGraph& g, std::size_t i) {
  check_vertex(g, i);
  std::vector<std::size_t> out;
  const auto row = g.closed_row(i);
  for (std::size_t w = 0; w < row.size(); ++w) {
    for (std::uint64_t word = row[w]; word != 0; word &= word - 1) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
    }
  }
  return out;
}

bool is_clique(const ThresholdedGraph& g, std::span<const std::size_t> vertices) {
  for (std::size_t v : vertices) check_vertex(g, v);
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      if (vertices[a] != vertices[b] && !g.adjacent(vertices[a], vertices[b])) return false;
    }
  }
  return true;
}

CliqueSet independent_maximal_cliques(const ThresholdedGraph& g) {
  const auto& k = kernels::active();
  const std::size_t words = g.words();
  CliqueSet out;
  std::map<std::vector<std::uint64_t>, std::size_t> index_of;

  for (std::size_t i = 0; i < g.p(); ++i) {
    const auto row = g.closed_row(i);
    // ne(i) is a clique iff ne(i) is contained in ne(j) for every j in ne(i).
    bool clique = true;
    for (std::size_t w = 0; w < words && clique; ++w) {
      for (std::uint64_t word = row[w]; word != 0; word &= word - 1) {
        const std::size_t j = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
        if (j == i) continue;
        if (g.degree(j) < g.degree(i) || !k.is_subset(row.data(), g.closed_row(j).data(), words)) {
          clique = false;
          break;
        }
      }
    }
    if (!clique) continue;

    std::vector<std::uint64_t> key(row.begin(), row.end());
    auto [it, inserted] = index_of.emplace(std::move(key), out.cliques.size());
    if (inserted) {
      out.cliques.push_back(neighborhood(g, i));
      out.unique_members.push_back({i});
    } else {
      out.unique_members[it->second].push_back(i);
    }
  }
  return out;
}

namespace {

using Mask = std::uint32_t;

void bron_kerbosch(const std::vector<Mask>& adj, Mask r, Mask p, Mask x, std::vector<Mask>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  // Pivot on the vertex of P u X with the most neighbors in P.
  Mask candidates = p | x;
  std::size_t pivot = static_cast<std::size_t>(std::countr_zero(candidates));
  int best = -1;
  for (Mask m = candidates; m != 0; m &= m - 1) {
    const auto u = static_cast<std::size_t>(std::countr_zero(m));
    const int c = std::popcount(p & adj[u]);
    if (c > best) {
      best = c;
      pivot = u;
    }
  }
  for (Mask m = p & ~adj[pivot]; m != 0; m &= m - 1) {
    const auto v = static_cast<std::size_t>(std::countr_zero(m));
    const Mask vb = Mask{1} << v;
    bron_kerbosch(adj, r | vb, p & adj[v], x & adj[v], out);
    p &= ~vb;
    x |= vb;
  }
}

std::vector<std::size_t> mask_vertices(Mask m) {
  std::vector<std::size_t> out;
  for (; m != 0; m &= m - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  return out;
}

std::vector<Mask> maximal_clique_masks(const ThresholdedGraph& g) {
  if (g.p() > kBruteForceMaxVertices) {
    throw TooLarge("brute-force clique enumeration is limited to " + std::to_string(kBruteForceMaxVertices) +
                   " vertices, got " + std::to_string(g.p()));
  }
  std::vector<Mask> adj(g.p(), 0);
  for (std::size_t i = 0; i < g.p(); ++i) {
    for (std::size_t j = 0; j < g.p(); ++j) {
      if (g.adjacent(i, j)) adj[i] |= Mask{1} << j;
    }
  }
  std::vector<Mask> found;
  const Mask all = g.p() == 32 ? ~Mask{0} : (Mask{1} << g.p()) - 1;
  if (g.p() > 0) bron_kerbosch(adj, 0, all, 0, found);
  return found;
}

}  // namespace

std::vector<std::vector<std::size_t>> maximal_cliques(const ThresholdedGraph& g) {
  std::vector<std::vector<std::size_t>> out;
  for (Mask m : maximal_clique_masks(g)) out.push_back(mask_vertices(m));
  std::sort(out.begin(), out.end());
  return out;
}

CliqueSet brute_force_independent_cliques(const ThresholdedGraph& g) {
  const std::vector<Mask> all = maximal_clique_masks(g);
  std::vector<std::size_t> membership(g.p(), 0);
  for (Mask m : all) {
    for (std::size_t v : mask_vertices(m)) ++membership[v];
  }
  struct Entry {
    std::vector<std::size_t> clique;
    std::vector<std::size_t> unique;
  };
  std::vector<Entry> kept;
  for (Mask m : all) {
    Entry e{mask_vertices(m), {}};
    for (std::size_t v : e.clique) {
      if (membership[v] == 1) e.unique.push_back(v);
    }
    if (!e.unique.empty()) kept.push_back(std::move(e));
  }
  std::sort(kept.begin(), kept.end(), [](const Entry& a, const Entry& b) { return a.unique.front() < b.unique.front(); });
  CliqueSet out;
  for (auto& e : kept) {
    out.cliques.push_back(std::move(e.clique));
    out.unique_members.push_back(std::move(e.unique));
  }
  return out;
}

Structure structure_from_cliques(const CliqueSet& cs, std::size_t p) {
  if (cs.empty()) throw EmptyCliqueSet("no independent maximal cliques to map to a structure");
  std::vector<std::size_t> order(cs.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cs.unique_members[a].front() < cs.unique_members[b].front();
  });
  std::vector<std::vector<std::size_t>> columns;
  columns.reserve(cs.size());
  for (std::size_t k : order) columns.push_back(cs.cliques[k]);
  return Structure::from_columns(p, columns);
}

}  // namespace ctfactor
