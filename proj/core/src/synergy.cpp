#include "draftbots/synergy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "draftbots/error.hpp"
#include "draftbots/random.hpp"

namespace draftbots {

namespace {

struct PairData {
  std::vector<double> target;
  std::vector<std::pair<std::size_t, std::size_t>> index;
};

PairData pairs_of(const std::vector<double>& distance, std::size_t n) {
  PairData p;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      p.target.push_back(distance[i * n + j]);
      p.index.emplace_back(i, j);
    }
  }
  return p;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> euclid(const PairData& pd, const std::vector<std::array<double, 2>>& x) {
  std::vector<double> e(pd.index.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    const auto [i, j] = pd.index[k];
    e[k] = std::hypot(x[i][0] - x[j][0], x[i][1] - x[j][1]);
  }
  return e;
}

/// Gradient of the Pearson correlation with respect to every coordinate.
std::vector<std::array<double, 2>> gradient(const PairData& pd,
                                            const std::vector<std::array<double, 2>>& x,
                                            const std::vector<double>& e) {
  const auto& d = pd.target;
  const auto n = static_cast<double>(d.size());
  double md = 0, me = 0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    md += d[k];
    me += e[k];
  }
  md /= n;
  me /= n;
  double sde = 0, sdd = 0, see = 0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    sde += (d[k] - md) * (e[k] - me);
    sdd += (d[k] - md) * (d[k] - md);
    see += (e[k] - me) * (e[k] - me);
  }
  std::vector<std::array<double, 2>> g(x.size(), {0.0, 0.0});
  if (sdd <= 0.0 || see <= 0.0) return g;
  const double r = sde / std::sqrt(sdd * see);
  const double inv = 1.0 / std::sqrt(sdd * see);
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (e[k] <= 0.0) continue;
    const double dr_de = (d[k] - md) * inv - r * (e[k] - me) / see;
    const auto [i, j] = pd.index[k];
    for (int c = 0; c < 2; ++c) {
      const double de = (x[i][static_cast<std::size_t>(c)] - x[j][static_cast<std::size_t>(c)]) / e[k];
      g[i][static_cast<std::size_t>(c)] += dr_de * de;
      g[j][static_cast<std::size_t>(c)] -= dr_de * de;
    }
  }
  return g;
}

}  // namespace

SynergyMatrices cooccurrence(const std::vector<DraftLog>& logs, std::size_t set_size,
                             bool human_only) {
  SynergyMatrices m;
  m.set_size = set_size;
  m.p.assign(set_size, 0.0);
  m.p_joint.assign(set_size * set_size, 0.0);
  m.synergy.assign(set_size * set_size, 0.0);
  m.distance.assign(set_size * set_size, 1.0);

  std::vector<CardIndex> present;
  for (const DraftLog& log : logs) {
    if (human_only && log.seat_kind != SeatKind::human) continue;
    ++m.collections;
    const Collection c = final_collection(log, set_size);
    present.clear();
    for (CardIndex i = 0; i < set_size; ++i) {
      if (c.count(i) > 0) present.push_back(i);
    }
    for (CardIndex i : present) {
      m.p[i] += 1.0;
      for (CardIndex j : present) m.p_joint[m.at(i, j)] += 1.0;
    }
  }
  if (m.collections == 0) throw Error("cannot compute co-occurrence of an empty corpus");

  const auto n = static_cast<double>(m.collections);
  for (double& v : m.p) v /= n;
  for (double& v : m.p_joint) v /= n;
  for (CardIndex i = 0; i < set_size; ++i) {
    if (m.p[i] > 0.0) m.drafted.push_back(i);
  }
  for (CardIndex i : m.drafted) {
    for (CardIndex j : m.drafted) {
      const double s = m.p_joint[m.at(i, j)] / (m.p[i] * m.p[j]);
      m.synergy[m.at(i, j)] = s;
      m.max_synergy = std::max(m.max_synergy, s);
    }
  }
  if (m.max_synergy > 0.0) {
    for (std::size_t k = 0; k < m.distance.size(); ++k) {
      m.distance[k] = 1.0 - m.synergy[k] / m.max_synergy;
    }
  }
  return m;
}

double embedding_correlation(const std::vector<double>& distance, std::size_t n,
                             const std::vector<std::array<double, 2>>& coords) {
  const PairData pd = pairs_of(distance, n);
  return pearson(pd.target, euclid(pd, coords));
}

Embedding embed_2d(const std::vector<double>& distance, std::size_t n, std::uint64_t seed,
                   const EmbedOptions& options) {
  if (distance.size() != n * n) throw Error("distance matrix has wrong size");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = distance[i * n + j], b = distance[j * n + i];
      if (!std::isfinite(a) || !std::isfinite(b)) throw Error("distance matrix is not finite");
      if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) {
        throw Error("distance matrix is not symmetric at (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
      }
    }
  }

  Embedding out;
  Rng rng(seed);
  out.coords.resize(n);
  for (auto& c : out.coords) c = {rng.normal(), rng.normal()};
  const PairData pd = pairs_of(distance, n);
  if (pd.target.empty()) return out;

  std::vector<double> e = euclid(pd, out.coords);
  out.r = pearson(pd.target, e);
  out.r_history.push_back(out.r);

  double step = options.initial_step;
  int stalled = 0;
  for (int it = 0; it < options.max_iterations; ++it) {
    out.iterations = it + 1;
    const auto g = gradient(pd, out.coords, e);
    double gnorm = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      gnorm += g[i][0] * g[i][0] + g[i][1] * g[i][1];
      scale += out.coords[i][0] * out.coords[i][0] + out.coords[i][1] * out.coords[i][1];
    }
    gnorm = std::sqrt(gnorm);
    scale = std::sqrt(scale / static_cast<double>(n));
    if (gnorm <= 0.0 || scale <= 0.0) break;

    auto trial = out.coords;
    const double factor = step * scale * std::sqrt(static_cast<double>(n)) / gnorm;
    for (std::size_t i = 0; i < n; ++i) {
      trial[i][0] += factor * g[i][0];
      trial[i][1] += factor * g[i][1];
    }
    std::vector<double> te = euclid(pd, trial);
    const double r = pearson(pd.target, te);
    if (r > out.r) {
      const double gain = r - out.r;
      out.coords = std::move(trial);
      e = std::move(te);
      out.r = r;
      out.r_history.push_back(r);
      step *= 1.2;
      stalled = gain < options.tolerance ? stalled + 1 : 0;
      if (stalled >= 25) break;
    } else {
      step *= 0.5;
      if (step < 1e-12) break;
    }
  }
  return out;
}

Embedding embed_synergy(const SynergyMatrices& m, std::uint64_t seed, const EmbedOptions& options) {
  const std::size_t n = m.drafted.size();
  std::vector<double> sub(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) sub[a * n + b] = m.distance[m.at(m.drafted[a], m.drafted[b])];
  }
  return embed_2d(sub, n, seed, options);
}

void export_plot_data(const SynergyMatrices& m, const Embedding& embedding, const CardSet& set,
                      const std::filesystem::path& path) {
  if (m.set_size != set.size() || embedding.coords.size() != m.drafted.size()) {
    throw Error("plot data shapes do not match the set");
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "name,color,x,y\n";
  std::size_t k = 0;
  for (const Card& card : set.cards()) {
    std::string name = card.name;
    if (name.find_first_of(",\"") != std::string::npos) {
      std::string q = "\"";
      for (char c : name) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      name = q + "\"";
    }
    out << name << ',' << card.colors.color_class() << ',';
    if (k < m.drafted.size() && m.drafted[k] == card.index) {
      out << embedding.coords[k][0] << ',' << embedding.coords[k][1];
      ++k;
    } else {
      out << ',';
    }
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace draftbots
