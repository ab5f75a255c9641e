#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "draftbots/card_set.hpp"

namespace draftbots {

/// Pair counts over a set of size S, each stored S x S row-major.
///   m(i,j)     both i and j were in a first-pick pack
///   m_gt(i,j)  ... and i was the card taken
///   n(i,j)     i was in the pack while j was already collected
///   n_to(i,j)  ... and i was the card taken
struct BayesCounts {
  std::size_t set_size = 0;
  std::vector<std::uint32_t> m, m_gt, n, n_to;

  BayesCounts() = default;
  explicit BayesCounts(std::size_t s)
      : set_size(s), m(s * s, 0), m_gt(s * s, 0), n(s * s, 0), n_to(s * s, 0) {}

  std::size_t at(CardIndex i, CardIndex j) const { return std::size_t{i} * set_size + j; }

  /// Element-wise sum; counts from independent shards merge this way.
  BayesCounts& operator+=(const BayesCounts& other);
  friend bool operator==(const BayesCounts&, const BayesCounts&) = default;
};

/// Smoothed log-probability ranking model assembled from pair counts.
struct BayesModel {
  std::string set_code;
  BayesCounts counts;
  /// score_i = sum over j != i of log((m_gt(i,j) + 1) / (m(i,j) + 2))
  std::vector<double> first_pick_scores;
  /// Q(i,j) = log((n_to(i,j) + 1) / (n(i,j) + 2)), row-major
  std::vector<double> q;

  std::size_t set_size() const { return counts.set_size; }
  double q_at(CardIndex i, CardIndex j) const { return q[counts.at(i, j)]; }

  static BayesModel from_counts(std::string set_code, BayesCounts counts);
};

}  // namespace draftbots
