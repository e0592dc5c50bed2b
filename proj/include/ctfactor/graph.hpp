#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ctfactor/model.hpp"
#include "ctfactor/numerics.hpp"

namespace ctfactor {

/// Undirected graph on p vertices stored as closed-neighborhood bitset rows:
/// row i holds i itself and every neighbor of i.
class ThresholdedGraph {
 public:
  ThresholdedGraph() = default;
  /// Edgeless graph.
  ThresholdedGraph(std::size_t p, double tau);
  static ThresholdedGraph from_edges(std::size_t p, const std::vector<Pair>& edges);

  std::size_t p() const { return p_; }
  double tau() const { return tau_; }
  std::size_t words() const { return words_; }

  bool adjacent(std::size_t i, std::size_t j) const;
  /// Closed neighborhood of i as a bitset row.
  std::span<const std::uint64_t> closed_row(std::size_t i) const {
    return {rows_.data() + i * words_, words_};
  }
  std::size_t degree(std::size_t i) const { return degree_[i]; }
  std::size_t edge_count() const;
  std::vector<Pair> edges() const;

  void add_edge(std::size_t i, std::size_t j);

 private:
  friend ThresholdedGraph build_graph(const Matrix& r, double tau);
  void finish_degrees();

  std::size_t p_ = 0;
  std::size_t words_ = 0;
  double tau_ = 0.0;
  std::vector<std::uint64_t> rows_;
  std::vector<std::size_t> degree_;
};

/// Independent maximal cliques with the vertices that are members of no other
/// maximal clique. Cliques are listed by increasing smallest unique member.
struct CliqueSet {
  std::vector<std::vector<std::size_t>> cliques;
  std::vector<std::vector<std::size_t>> unique_members;

  std::size_t size() const { return cliques.size(); }
  bool empty() const { return cliques.empty(); }
  friend bool operator==(const CliqueSet&, const CliqueSet&) = default;
};

/// Edge (i, j) iff |r(i, j)| > tau, i != j. Throws DomainError if tau is
/// outside [0, 1], r is not square/symmetric, or its diagonal is not 1
/// within 1e-9.
ThresholdedGraph build_graph(const Matrix& r, double tau);

/// {i} together with every neighbor of i, ascending.
std::vector<std::size_t> neighborhood(const ThresholdedGraph& g, std::size_t i);

bool is_clique(const ThresholdedGraph& g, std::span<const std::size_t> vertices);

/// Every closed neighborhood that is itself a clique is an independent
/// maximal clique, and every independent maximal clique arises this way from
/// each of its unique members. One pass over the vertices therefore finds
/// all of them.
CliqueSet independent_maximal_cliques(const ThresholdedGraph& g);

inline constexpr std::size_t kBruteForceMaxVertices = 25;

/// Reference: enumerate all maximal cliques (Bron-Kerbosch with pivoting),
/// keep those owning a vertex that lies in no other maximal clique.
/// Throws TooLarge above kBruteForceMaxVertices.
CliqueSet brute_force_independent_cliques(const ThresholdedGraph& g);

/// All maximal cliques, each sorted, in lexicographic order. Same size guard.
std::vector<std::vector<std::size_t>> maximal_cliques(const ThresholdedGraph& g);

/// d = number of cliques, support = {(i, k) : i in clique k}. Columns
/// follow the CliqueSet order. Throws EmptyCliqueSet.
Structure structure_from_cliques(const CliqueSet& cs, std::size_t p);

}  // namespace ctfactor
