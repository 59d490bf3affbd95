#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "udgan/layers.hpp"
#include "udgan/param_store.hpp"

namespace udgan {

// Versioned binary container for model parameters. Round-trips byte-exactly:
// load followed by save reproduces the file bit for bit.
struct CheckpointHeader {
    std::uint32_t version = 1;
    std::string model_kind; // generator | d-general | d-special
    std::uint64_t seed = 0;
    std::vector<LayerSpec> layers;
};

std::vector<std::uint8_t> serialize_checkpoint(const CheckpointHeader& header,
                                               const ParamStore& store);

// Parses bytes; parameters are appended to `store` in file order.
CheckpointHeader deserialize_checkpoint(std::span<const std::uint8_t> bytes, ParamStore& store);

void save_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                     const ParamStore& store);
CheckpointHeader load_checkpoint(const std::filesystem::path& path, ParamStore& store);

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);
std::uint64_t file_fnv1a64(const std::filesystem::path& path);
std::string hash_hex(std::uint64_t h);

} // namespace udgan
