#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace draftbots {

using CardIndex = std::uint32_t;

/// Card scarcity. The enumerator order is the rarity order used for ranking.
enum class Rarity : std::uint8_t { basic, common, uncommon, rare, mythic };

std::string_view to_string(Rarity r);
/// Throws SchemaError for an unknown name.
Rarity parse_rarity(std::string_view name);

inline constexpr int kColorCount = 5;
inline constexpr std::array<char, kColorCount> kColorLetters = {'W', 'U', 'B', 'R', 'G'};

/// Required mana symbols per color in WUBRG order.
struct ColorVector {
  std::array<int, kColorCount> mana{};

  int operator[](int color) const { return mana[static_cast<std::size_t>(color)]; }
  bool has(int color) const { return (*this)[color] > 0; }

  int num_colors() const {
    int n = 0;
    for (int m : mana) n += m > 0 ? 1 : 0;
    return n;
  }
  bool colorless() const { return num_colors() == 0; }

  /// Letters of present colors in WUBRG order, "C" for colorless.
  std::string color_class() const;

  friend bool operator==(const ColorVector&, const ColorVector&) = default;
};

struct Card {
  CardIndex index = 0;
  std::string name;
  Rarity rarity = Rarity::common;
  ColorVector colors;
  double strength = 0.0;
};

inline const ColorVector& card_colors(const Card& card) { return card.colors; }

/// Immutable card set. Cards are identified by their dense index.
class CardSet {
 public:
  CardSet() = default;
  /// Validates and re-indexes cards in the given order. Throws SchemaError.
  CardSet(std::string code, std::vector<Card> cards);

  const std::string& code() const { return code_; }
  std::size_t size() const { return cards_.size(); }
  const Card& operator[](CardIndex i) const { return cards_[i]; }
  const Card& at(CardIndex i) const;
  std::span<const Card> cards() const { return cards_; }

  std::optional<CardIndex> find(std::string_view name) const;
  std::size_t count(Rarity r) const;
  std::vector<CardIndex> indices_of(Rarity r) const;

 private:
  std::string code_;
  std::vector<Card> cards_;
};

/// Parses a set document: {code, cards:[{name, rarity, colors:[w,u,b,r,g], strength}]}.
/// Unknown keys are rejected. Throws SchemaError naming the offending record.
CardSet parse_set(std::string_view json_text);
CardSet load_set(const std::filesystem::path& path);
std::string serialize_set(const CardSet& set);

/// Multiset of card indices in a booster.
class Pack {
 public:
  Pack() = default;
  explicit Pack(std::vector<CardIndex> cards) : cards_(std::move(cards)) {}

  std::size_t size() const { return cards_.size(); }
  bool empty() const { return cards_.empty(); }
  std::span<const CardIndex> cards() const { return cards_; }
  bool contains(CardIndex card) const;
  /// Removes one copy; returns false when the card is absent.
  bool remove_one(CardIndex card);

  friend bool operator==(const Pack&, const Pack&) = default;

 private:
  std::vector<CardIndex> cards_;
};

/// Count vector over the set for one seat's picked cards.
class Collection {
 public:
  Collection() = default;
  explicit Collection(std::size_t set_size) : counts_(set_size, 0) {}

  std::size_t set_size() const { return counts_.size(); }
  std::uint32_t count(CardIndex card) const { return counts_.at(card); }
  std::span<const std::uint32_t> counts() const { return counts_; }
  std::size_t total() const { return total_; }

  /// Throws std::out_of_range when card >= set size.
  void add(CardIndex card);

  friend bool operator==(const Collection&, const Collection&) = default;

 private:
  std::vector<std::uint32_t> counts_;
  std::size_t total_ = 0;
};

inline Collection collection_add(Collection collection, CardIndex card) {
  collection.add(card);
  return collection;
}

}  // namespace draftbots
