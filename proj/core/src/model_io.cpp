#include "draftbots/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "draftbots/error.hpp"
#include "json.hpp"

namespace draftbots {

using nlohmann::json;

namespace {

constexpr std::string_view kMagic = "DRFTMODL";

template <typename T>
void put_le(std::string& out, T value) {
  static_assert(sizeof(T) == 4);
  std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

template <typename T>
T get_le(const char* p) {
  std::uint32_t bits = 0;
  for (int b = 0; b < 4; ++b) {
    bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[b])) << (8 * b);
  }
  return std::bit_cast<T>(bits);
}

struct ArrayOut {
  std::string name;
  std::string dtype;
  std::vector<std::size_t> shape;
  std::string payload;
};

template <typename T>
ArrayOut make_array(std::string name, const std::vector<T>& values, std::vector<std::size_t> shape) {
  ArrayOut a{std::move(name), std::is_same_v<T, float> ? "f32" : "u32", std::move(shape), {}};
  a.payload.reserve(values.size() * 4);
  for (T v : values) put_le(a.payload, v);
  return a;
}

std::string assemble(json header, const std::vector<ArrayOut>& arrays) {
  json table = json::array();
  for (const auto& a : arrays) table.push_back({{"name", a.name}, {"dtype", a.dtype}, {"shape", a.shape}});
  header["arrays"] = table;
  const std::string h = header.dump();
  std::string out(kMagic);
  put_le(out, kModelFormatVersion);
  put_le(out, static_cast<std::uint32_t>(h.size()));
  out += h;
  for (const auto& a : arrays) out += a.payload;
  return out;
}

/// Parsed container: header plus views of each array's raw bytes.
struct Container {
  json header;
  std::vector<std::pair<std::string, std::string_view>> arrays;

  std::string_view raw(const std::string& name) const {
    for (const auto& [n, v] : arrays) {
      if (n == name) return v;
    }
    throw ModelError("corrupt model container: missing array '" + name + "'");
  }

  template <typename T>
  std::vector<T> read(const std::string& name, std::size_t expected) const {
    const std::string_view v = raw(name);
    if (v.size() != expected * 4) {
      throw ModelError("corrupt model container: array '" + name + "' has wrong size");
    }
    std::vector<T> out(expected);
    for (std::size_t i = 0; i < expected; ++i) out[i] = get_le<T>(v.data() + 4 * i);
    return out;
  }
};

Container parse(std::string_view bytes, const char* want_kind, const CardSet* expected) {
  if (bytes.size() < kMagic.size() + 8 || bytes.substr(0, kMagic.size()) != kMagic) {
    throw ModelError("corrupt model container: bad magic or truncated header");
  }
  const auto version = get_le<std::uint32_t>(bytes.data() + kMagic.size());
  if (version != kModelFormatVersion) {
    throw ModelError("unsupported model container version " + std::to_string(version) +
                     " (expected " + std::to_string(kModelFormatVersion) + ")");
  }
  const auto hlen = get_le<std::uint32_t>(bytes.data() + kMagic.size() + 4);
  std::size_t pos = kMagic.size() + 8;
  if (bytes.size() < pos + hlen) throw ModelError("corrupt model container: truncated header");
  Container c;
  try {
    c.header = json::parse(bytes.substr(pos, hlen));
  } catch (const json::exception& e) {
    throw ModelError(std::string("corrupt model container: bad header (") + e.what() + ")");
  }
  pos += hlen;
  try {
    if (c.header.at("kind").get<std::string>() != want_kind) {
      throw ModelError("model container holds a '" + c.header.at("kind").get<std::string>() +
                       "' model, expected '" + want_kind + "'");
    }
    for (const json& a : c.header.at("arrays")) {
      std::size_t n = 1;
      for (const json& d : a.at("shape")) n *= d.get<std::size_t>();
      const std::string dtype = a.at("dtype").get<std::string>();
      if (dtype != "f32" && dtype != "u32") throw ModelError("corrupt model container: bad dtype");
      if (bytes.size() < pos + 4 * n) {
        throw ModelError("corrupt model container: truncated array '" +
                         a.at("name").get<std::string>() + "'");
      }
      c.arrays.emplace_back(a.at("name").get<std::string>(), bytes.substr(pos, 4 * n));
      pos += 4 * n;
    }
  } catch (const json::exception& e) {
    throw ModelError(std::string("corrupt model container: bad header (") + e.what() + ")");
  }
  if (pos != bytes.size()) throw ModelError("corrupt model container: trailing bytes");
  if (expected != nullptr) {
    const auto code = c.header.at("set_code").get<std::string>();
    const auto size = c.header.at("set_size").get<std::size_t>();
    if (code != expected->code() || size != expected->size()) {
      throw ModelError("set mismatch: model trained for '" + code + "' (" + std::to_string(size) +
                       " cards), loaded against '" + expected->code() + "' (" +
                       std::to_string(expected->size()) + " cards)");
    }
  }
  return c;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ModelError("write failed for " + path.string());
}

}  // namespace

std::string model_to_bytes(const BayesModel& model) {
  const std::size_t s = model.set_size();
  json header{{"kind", "bayes"},
              {"set_code", model.set_code},
              {"set_size", s},
              {"hyperparameters", {{"smoothing", "additive (k+1)/(n+2)"}}}};
  const std::vector<std::size_t> shape{s, s};
  return assemble(header, {make_array("m", model.counts.m, shape),
                           make_array("m_gt", model.counts.m_gt, shape),
                           make_array("n", model.counts.n, shape),
                           make_array("n_to", model.counts.n_to, shape)});
}

BayesModel bayes_from_bytes(std::string_view bytes, const CardSet* expected) {
  const Container c = parse(bytes, "bayes", expected);
  const auto s = c.header.at("set_size").get<std::size_t>();
  BayesCounts counts(s);
  counts.m = c.read<std::uint32_t>("m", s * s);
  counts.m_gt = c.read<std::uint32_t>("m_gt", s * s);
  counts.n = c.read<std::uint32_t>("n", s * s);
  counts.n_to = c.read<std::uint32_t>("n_to", s * s);
  return BayesModel::from_counts(c.header.at("set_code").get<std::string>(), std::move(counts));
}

std::string model_to_bytes(const NNetModel& model) {
  const nn::NetworkShape& sh = model.network.shape();
  json header{{"kind", "nnet"},
              {"set_code", model.set_code},
              {"set_size", sh.outputs},
              {"hyperparameters",
               {{"inputs", sh.inputs},
                {"width", sh.width},
                {"outputs", sh.outputs},
                {"hidden_layers", sh.hidden_layers},
                {"leak", sh.leak},
                {"dropout", sh.dropout},
                {"bn_epsilon", sh.bn_epsilon},
                {"bn_momentum", sh.bn_momentum}}}};
  std::vector<ArrayOut> arrays;
  const auto& p = model.network.params();
  p.visit([&](const std::string& name, const std::vector<float>& v) {
    arrays.push_back(make_array(name, v, {v.size()}));
  });
  for (std::size_t k = 0; k < p.norms.size(); ++k) {
    const std::string n = std::to_string(k + 1);
    arrays.push_back(make_array("norm" + n + ".running_mean", p.norms[k].running_mean,
                                {p.norms[k].running_mean.size()}));
    arrays.push_back(make_array("norm" + n + ".running_var", p.norms[k].running_var,
                                {p.norms[k].running_var.size()}));
  }
  return assemble(header, arrays);
}

NNetModel nnet_from_bytes(std::string_view bytes, const CardSet* expected) {
  const Container c = parse(bytes, "nnet", expected);
  nn::NetworkShape sh;
  try {
    const json& h = c.header.at("hyperparameters");
    sh.inputs = h.at("inputs").get<std::size_t>();
    sh.width = h.at("width").get<std::size_t>();
    sh.outputs = h.at("outputs").get<std::size_t>();
    sh.hidden_layers = h.at("hidden_layers").get<std::size_t>();
    sh.leak = h.at("leak").get<double>();
    sh.dropout = h.at("dropout").get<double>();
    sh.bn_epsilon = h.at("bn_epsilon").get<double>();
    sh.bn_momentum = h.at("bn_momentum").get<double>();
  } catch (const json::exception& e) {
    throw ModelError(std::string("corrupt model container: bad hyperparameters (") + e.what() + ")");
  }
  NNetModel model{c.header.at("set_code").get<std::string>(), nn::Network<float>(sh)};
  auto& p = model.network.params();
  p.visit([&](const std::string& name, std::vector<float>& v) { v = c.read<float>(name, v.size()); });
  for (std::size_t k = 0; k < p.norms.size(); ++k) {
    const std::string n = std::to_string(k + 1);
    p.norms[k].running_mean = c.read<float>("norm" + n + ".running_mean", sh.width);
    p.norms[k].running_var = c.read<float>("norm" + n + ".running_var", sh.width);
  }
  return model;
}

ModelKind model_kind(std::string_view bytes) {
  try {
    parse(bytes, "bayes", nullptr);
    return ModelKind::bayes;
  } catch (const ModelError&) {
  }
  parse(bytes, "nnet", nullptr);
  return ModelKind::nnet;
}

void save_model(const BayesModel& model, const std::filesystem::path& path) {
  write_file(path, model_to_bytes(model));
}

void save_model(const NNetModel& model, const std::filesystem::path& path) {
  write_file(path, model_to_bytes(model));
}

BayesModel load_bayes_model(const std::filesystem::path& path, const CardSet* expected) {
  return bayes_from_bytes(read_file(path), expected);
}

NNetModel load_nnet_model(const std::filesystem::path& path, const CardSet* expected) {
  return nnet_from_bytes(read_file(path), expected);
}

ModelKind peek_model_kind(const std::filesystem::path& path) { return model_kind(read_file(path)); }

}  // namespace draftbots
