#include "qadapt/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is little-endian; big-endian hosts need byte swaps");

namespace qadapt {

namespace {

constexpr char kMagic[8] = {'Q', 'N', 'E', 'T', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_u64(std::ostream& os, std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }

[[noreturn]] void corrupt(const std::string& why) {
    throw std::runtime_error("corrupt checkpoint: " + why);
}

std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v;
    if (!is.read(reinterpret_cast<char*>(&v), 4)) corrupt("truncated header");
    return v;
}

std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v;
    if (!is.read(reinterpret_cast<char*>(&v), 8)) corrupt("truncated header");
    return v;
}

}  // namespace

std::string content_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void save_checkpoint(const NetParams& net, const Provenance& prov, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write checkpoint: " + tmp);

        os.write(kMagic, sizeof kMagic);
        put_u32(os, kVersion);
        put_u32(os, static_cast<std::uint32_t>(net.dims.size()));
        for (int d : net.dims) put_u64(os, static_cast<std::uint64_t>(d));
        for (int l = 0; l < net.layers(); ++l) {
            os.write(reinterpret_cast<const char*>(net.w[l].data()),
                     static_cast<std::streamsize>(net.w[l].size() * sizeof(double)));
            os.write(reinterpret_cast<const char*>(net.b[l].data()),
                     static_cast<std::streamsize>(net.b[l].size() * sizeof(double)));
        }

        const nlohmann::json j = {{"config_hash", prov.config_hash}, {"env", prov.env},
                                  {"task", prov.task},               {"algorithm", prov.algorithm},
                                  {"episodes", prov.episodes},       {"seed", prov.seed}};
        const std::string meta = j.dump();
        put_u32(os, static_cast<std::uint32_t>(meta.size()));
        os.write(meta.data(), static_cast<std::streamsize>(meta.size()));
        if (!os) throw std::runtime_error("cannot write checkpoint: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move checkpoint into place: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint: " + path);

    char magic[8];
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        corrupt("bad magic");
    if (get_u32(is) != kVersion) corrupt("unsupported version");

    const std::uint32_t n_dims = get_u32(is);
    if (n_dims < 2 || n_dims > 64) corrupt("implausible dimension count");

    Checkpoint ck;
    ck.net.dims.resize(n_dims);
    for (std::uint32_t i = 0; i < n_dims; ++i) {
        const std::uint64_t d = get_u64(is);
        if (d == 0 || d > (1u << 24)) corrupt("implausible layer size");
        ck.net.dims[i] = static_cast<int>(d);
    }

    ck.net.w.resize(ck.net.layers());
    ck.net.b.resize(ck.net.layers());
    for (int l = 0; l < ck.net.layers(); ++l) {
        ck.net.w[l].resize(std::size_t(ck.net.dims[l + 1]) * ck.net.dims[l]);
        ck.net.b[l].resize(ck.net.dims[l + 1]);
        if (!is.read(reinterpret_cast<char*>(ck.net.w[l].data()),
                     static_cast<std::streamsize>(ck.net.w[l].size() * sizeof(double))))
            corrupt("truncated payload");
        if (!is.read(reinterpret_cast<char*>(ck.net.b[l].data()),
                     static_cast<std::streamsize>(ck.net.b[l].size() * sizeof(double))))
            corrupt("truncated payload");
    }

    const std::uint32_t meta_len = get_u32(is);
    std::string meta(meta_len, '\0');
    if (!is.read(meta.data(), meta_len)) corrupt("truncated provenance");
    if (is.peek() != std::ifstream::traits_type::eof()) corrupt("trailing bytes");

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(meta);
    } catch (const nlohmann::json::exception&) {
        corrupt("unparseable provenance");
    }
    ck.provenance.config_hash = j.value("config_hash", "");
    ck.provenance.env = j.value("env", "");
    ck.provenance.task = j.value("task", "");
    ck.provenance.algorithm = j.value("algorithm", "");
    ck.provenance.episodes = j.value("episodes", 0L);
    ck.provenance.seed = j.value("seed", std::uint64_t{0});
    return ck;
}

}  // namespace qadapt
