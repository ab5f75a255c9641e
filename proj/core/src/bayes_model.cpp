#include "draftbots/bayes_model.hpp"

#include <cmath>

#include "draftbots/error.hpp"

namespace draftbots {

BayesCounts& BayesCounts::operator+=(const BayesCounts& other) {
  if (other.set_size != set_size) throw Error("cannot merge counts of different set sizes");
  for (std::size_t k = 0; k < m.size(); ++k) {
    m[k] += other.m[k];
    m_gt[k] += other.m_gt[k];
    n[k] += other.n[k];
    n_to[k] += other.n_to[k];
  }
  return *this;
}

BayesModel BayesModel::from_counts(std::string set_code, BayesCounts counts) {
  BayesModel model;
  model.set_code = std::move(set_code);
  const std::size_t s = counts.set_size;
  model.q.resize(s * s);
  model.first_pick_scores.assign(s, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      const std::size_t k = i * s + j;
      model.q[k] = std::log((static_cast<double>(counts.n_to[k]) + 1.0) /
                            (static_cast<double>(counts.n[k]) + 2.0));
      if (i != j) {
        model.first_pick_scores[i] += std::log((static_cast<double>(counts.m_gt[k]) + 1.0) /
                                               (static_cast<double>(counts.m[k]) + 2.0));
      }
    }
  }
  model.counts = std::move(counts);
  return model;
}

}  // namespace draftbots
