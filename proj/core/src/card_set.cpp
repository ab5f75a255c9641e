#include "draftbots/card_set.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "draftbots/error.hpp"
#include "json.hpp"

namespace draftbots {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 5> kRarityNames = {"basic", "common", "uncommon", "rare",
                                                          "mythic"};

std::string describe(std::size_t i, const json& rec) {
  std::ostringstream os;
  os << "card #" << i;
  if (rec.is_object() && rec.contains("name") && rec["name"].is_string()) {
    os << " (" << rec["name"].get<std::string>() << ")";
  }
  return os.str();
}

Card parse_card(std::size_t i, const json& rec) {
  if (!rec.is_object()) throw SchemaError(describe(i, rec) + ": record is not an object");
  static const std::set<std::string> allowed = {"name", "rarity", "colors", "strength"};
  for (const auto& [key, value] : rec.items()) {
    if (!allowed.contains(key)) {
      throw SchemaError(describe(i, rec) + ": unknown key '" + key + "'");
    }
  }
  for (const char* key : {"name", "rarity", "colors", "strength"}) {
    if (!rec.contains(key)) throw SchemaError(describe(i, rec) + ": missing '" + key + "'");
  }
  Card card;
  if (!rec["name"].is_string() || rec["name"].get<std::string>().empty()) {
    throw SchemaError(describe(i, rec) + ": name must be a non-empty string");
  }
  card.name = rec["name"].get<std::string>();
  if (!rec["rarity"].is_string()) throw SchemaError(describe(i, rec) + ": rarity must be a string");
  try {
    card.rarity = parse_rarity(rec["rarity"].get<std::string>());
  } catch (const SchemaError& e) {
    throw SchemaError(describe(i, rec) + ": " + e.what());
  }
  const json& colors = rec["colors"];
  if (!colors.is_array() || colors.size() != kColorCount) {
    throw SchemaError(describe(i, rec) + ": colors must be an array of 5 integers");
  }
  for (int c = 0; c < kColorCount; ++c) {
    const json& v = colors[static_cast<std::size_t>(c)];
    if (!v.is_number_integer()) {
      throw SchemaError(describe(i, rec) + ": colors must be an array of 5 integers");
    }
    const auto m = v.get<std::int64_t>();
    if (m < 0) throw SchemaError(describe(i, rec) + ": negative color component");
    card.colors.mana[static_cast<std::size_t>(c)] = static_cast<int>(m);
  }
  if (!rec["strength"].is_number()) throw SchemaError(describe(i, rec) + ": strength must be a number");
  card.strength = rec["strength"].get<double>();
  return card;
}

}  // namespace

std::string_view to_string(Rarity r) { return kRarityNames[static_cast<std::size_t>(r)]; }

Rarity parse_rarity(std::string_view name) {
  for (std::size_t i = 0; i < kRarityNames.size(); ++i) {
    if (kRarityNames[i] == name) return static_cast<Rarity>(i);
  }
  throw SchemaError("unknown rarity '" + std::string(name) + "'");
}

std::string ColorVector::color_class() const {
  std::string out;
  for (int c = 0; c < kColorCount; ++c) {
    if (has(c)) out.push_back(kColorLetters[static_cast<std::size_t>(c)]);
  }
  return out.empty() ? std::string("C") : out;
}

CardSet::CardSet(std::string code, std::vector<Card> cards)
    : code_(std::move(code)), cards_(std::move(cards)) {
  if (code_.empty()) throw SchemaError("set code must be non-empty");
  if (cards_.empty()) throw SchemaError("set '" + code_ + "' has no cards");
  std::unordered_set<std::string> names;
  for (std::size_t i = 0; i < cards_.size(); ++i) {
    Card& card = cards_[i];
    card.index = static_cast<CardIndex>(i);
    if (!(card.strength >= 0.0 && card.strength <= 5.0)) {
      std::ostringstream os;
      os << "card #" << i << " (" << card.name << "): strength " << card.strength
         << " outside [0,5]";
      throw SchemaError(os.str());
    }
    for (int m : card.colors.mana) {
      if (m < 0) {
        throw SchemaError("card #" + std::to_string(i) + " (" + card.name +
                          "): negative color component");
      }
    }
    if (!names.insert(card.name).second) {
      throw SchemaError("card #" + std::to_string(i) + " (" + card.name + "): duplicate name");
    }
  }
}

const Card& CardSet::at(CardIndex i) const {
  if (i >= cards_.size()) {
    throw std::out_of_range("card index " + std::to_string(i) + " outside set of size " +
                            std::to_string(cards_.size()));
  }
  return cards_[i];
}

std::optional<CardIndex> CardSet::find(std::string_view name) const {
  auto it = std::find_if(cards_.begin(), cards_.end(),
                         [&](const Card& c) { return c.name == name; });
  if (it == cards_.end()) return std::nullopt;
  return it->index;
}

std::size_t CardSet::count(Rarity r) const {
  return static_cast<std::size_t>(
      std::count_if(cards_.begin(), cards_.end(), [r](const Card& c) { return c.rarity == r; }));
}

std::vector<CardIndex> CardSet::indices_of(Rarity r) const {
  std::vector<CardIndex> out;
  for (const Card& c : cards_) {
    if (c.rarity == r) out.push_back(c.index);
  }
  return out;
}

CardSet parse_set(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("set file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("set document must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "code" && key != "cards") throw SchemaError("set document: unknown key '" + key + "'");
  }
  if (!doc.contains("code") || !doc["code"].is_string()) {
    throw SchemaError("set document: 'code' must be a string");
  }
  if (!doc.contains("cards") || !doc["cards"].is_array()) {
    throw SchemaError("set document: 'cards' must be an array");
  }
  std::vector<Card> cards;
  cards.reserve(doc["cards"].size());
  for (std::size_t i = 0; i < doc["cards"].size(); ++i) {
    cards.push_back(parse_card(i, doc["cards"][i]));
  }
  return CardSet(doc["code"].get<std::string>(), std::move(cards));
}

CardSet load_set(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open set file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_set(buf.str());
}

std::string serialize_set(const CardSet& set) {
  json cards = json::array();
  for (const Card& c : set.cards()) {
    cards.push_back({{"name", c.name},
                     {"rarity", std::string(to_string(c.rarity))},
                     {"colors", c.colors.mana},
                     {"strength", c.strength}});
  }
  return json{{"code", set.code()}, {"cards", cards}}.dump(1);
}

bool Pack::contains(CardIndex card) const {
  return std::find(cards_.begin(), cards_.end(), card) != cards_.end();
}

bool Pack::remove_one(CardIndex card) {
  auto it = std::find(cards_.begin(), cards_.end(), card);
  if (it == cards_.end()) return false;
  cards_.erase(it);
  return true;
}

void Collection::add(CardIndex card) {
  if (card >= counts_.size()) {
    throw std::out_of_range("card index " + std::to_string(card) +
                            " outside collection of size " + std::to_string(counts_.size()));
  }
  ++counts_[card];
  ++total_;
}

}  // namespace draftbots
