#pragma once

#include <filesystem>
#include <string>

#include "draftbots/bayes_model.hpp"
#include "draftbots/card_set.hpp"
#include "draftbots/nn.hpp"

namespace draftbots {

/// Binary container: 8-byte magic "DRFTMODL", little-endian u32 version,
/// u32 header length, a JSON header (kind, set code, set size,
/// hyperparameters, array table), then the arrays in table order as
/// little-endian float32 or uint32.
inline constexpr std::uint32_t kModelFormatVersion = 1;

enum class ModelKind { bayes, nnet };

std::string model_to_bytes(const BayesModel& model);
std::string model_to_bytes(const NNetModel& model);
/// `expected` (optional) rejects models trained for a different set.
BayesModel bayes_from_bytes(std::string_view bytes, const CardSet* expected = nullptr);
NNetModel nnet_from_bytes(std::string_view bytes, const CardSet* expected = nullptr);
ModelKind model_kind(std::string_view bytes);

void save_model(const BayesModel& model, const std::filesystem::path& path);
void save_model(const NNetModel& model, const std::filesystem::path& path);
BayesModel load_bayes_model(const std::filesystem::path& path, const CardSet* expected = nullptr);
NNetModel load_nnet_model(const std::filesystem::path& path, const CardSet* expected = nullptr);
ModelKind peek_model_kind(const std::filesystem::path& path);

}  // namespace draftbots
