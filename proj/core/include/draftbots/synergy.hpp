#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "draftbots/card_set.hpp"
#include "draftbots/draft_log.hpp"

namespace draftbots {

/// Co-draft statistics over final collections. Matrices are S x S row-major.
struct SynergyMatrices {
  std::size_t set_size = 0;
  std::size_t collections = 0;
  /// fraction of collections holding at least one copy of card i
  std::vector<double> p;
  /// fraction of collections holding both i and j
  std::vector<double> p_joint;
  /// p_joint / (p_i p_j), 0 where a card was never drafted
  std::vector<double> synergy;
  /// 1 - synergy / max synergy
  std::vector<double> distance;
  double max_synergy = 0.0;
  /// Cards with p > 0, ascending. Only these enter the embedding.
  std::vector<CardIndex> drafted;

  std::size_t at(CardIndex i, CardIndex j) const { return std::size_t{i} * set_size + j; }
};

/// Throws Error on an empty corpus.
SynergyMatrices cooccurrence(const std::vector<DraftLog>& logs, std::size_t set_size,
                             bool human_only = false);

struct Embedding {
  /// one (x, y) per point of the distance matrix
  std::vector<std::array<double, 2>> coords;
  /// Pearson correlation between target and embedded distances
  double r = 0.0;
  int iterations = 0;
  /// r after each accepted step, starting with the initial value
  std::vector<double> r_history;
};

struct EmbedOptions {
  int max_iterations = 5000;
  double tolerance = 1e-6;
  double initial_step = 0.05;
};

/// Pearson correlation over the off-diagonal pairs i < j.
double embedding_correlation(const std::vector<double>& distance, std::size_t n,
                             const std::vector<std::array<double, 2>>& coords);

/// Gradient ascent on the Pearson correlation between `distance` (n x n,
/// symmetric) and planar Euclidean distances; the step halves whenever a
/// trial step lowers r, so r never decreases. Throws Error if not symmetric.
Embedding embed_2d(const std::vector<double>& distance, std::size_t n, std::uint64_t seed,
                   const EmbedOptions& options = {});

/// Embeds the drafted cards of `m` (coordinates follow m.drafted).
Embedding embed_synergy(const SynergyMatrices& m, std::uint64_t seed, const EmbedOptions& options = {});

/// CSV: name,color,x,y with one row per card; undrafted cards get empty x,y.
void export_plot_data(const SynergyMatrices& m, const Embedding& embedding, const CardSet& set,
                      const std::filesystem::path& path);

}  // namespace draftbots
