#pragma once
#include <cstdint>
#include <string>

#include "qadapt/nnet.hpp"

namespace qadapt {

struct Provenance {
    std::string config_hash;  // hash of the canonical config dump
    std::string env;
    std::string task;
    std::string algorithm;
    long episodes = 0;
    std::uint64_t seed = 0;

    bool operator==(const Provenance&) const = default;
};

struct Checkpoint {
    NetParams net;
    Provenance provenance;
};

// Binary format: magic, version, dims, IEEE-754 LE payload (per layer:
// weights row-major, then biases), length-prefixed provenance JSON.
// Written atomically (temp file + rename); round-trips bit-exactly.
void save_checkpoint(const NetParams& net, const Provenance& prov, const std::string& path);

// Throws std::runtime_error mentioning "corrupt checkpoint" on bad magic,
// version, truncation, or trailing garbage.
Checkpoint load_checkpoint(const std::string& path);

// FNV-1a over the text, rendered as 16 hex digits; used for config hashes.
std::string content_hash(const std::string& text);

}  // namespace qadapt
