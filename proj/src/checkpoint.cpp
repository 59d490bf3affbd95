#include "udgan/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace udgan {

namespace {

constexpr char kMagic[4] = {'U', 'D', 'G', 'N'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put_u64(out, bits);
}

void put_str(std::vector<std::uint8_t>& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.insert(out.end(), s.begin(), s.end());
}

struct Reader {
    std::span<const std::uint8_t> buf;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > buf.size()) throw DataError("checkpoint: truncated data");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double d;
        std::memcpy(&d, &bits, 8);
        return d;
    }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s(reinterpret_cast<const char*>(buf.data() + pos), n);
        pos += n;
        return s;
    }
};

} // namespace

std::vector<std::uint8_t> serialize_checkpoint(const CheckpointHeader& header,
                                               const ParamStore& store) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u32(out, header.version);
    put_str(out, header.model_kind);
    put_u64(out, header.seed);
    put_u32(out, static_cast<std::uint32_t>(header.layers.size()));
    for (const auto& l : header.layers) {
        put_str(out, l.kind);
        put_u32(out, l.input_dim);
        put_u32(out, l.output_dim);
        put_u32(out, l.layer_count);
    }
    put_u32(out, static_cast<std::uint32_t>(store.size()));
    for (std::size_t i = 0; i < store.size(); ++i) {
        const auto& e = store.entry(i);
        put_str(out, e.name);
        put_u64(out, e.value.rows);
        put_u64(out, e.value.cols);
        for (double d : e.value.data) put_f64(out, d);
    }
    return out;
}

CheckpointHeader deserialize_checkpoint(std::span<const std::uint8_t> bytes, ParamStore& store) {
    Reader r{bytes};
    r.need(4);
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw DataError("checkpoint: bad magic");
    r.pos = 4;
    CheckpointHeader h;
    h.version = r.u32();
    if (h.version != 1) throw DataError("checkpoint: unsupported version");
    h.model_kind = r.str();
    h.seed = r.u64();
    const std::uint32_t nlayers = r.u32();
    for (std::uint32_t i = 0; i < nlayers; ++i) {
        LayerSpec l;
        l.kind = r.str();
        l.input_dim = r.u32();
        l.output_dim = r.u32();
        l.layer_count = r.u32();
        h.layers.push_back(std::move(l));
    }
    const std::uint32_t nparams = r.u32();
    for (std::uint32_t i = 0; i < nparams; ++i) {
        std::string name = r.str();
        const std::uint64_t rows = r.u64();
        const std::uint64_t cols = r.u64();
        Matrix m(rows, cols);
        for (double& d : m.data) d = r.f64();
        store.add(std::move(name), std::move(m));
    }
    if (r.pos != bytes.size()) throw DataError("checkpoint: trailing bytes");
    return h;
}

void save_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                     const ParamStore& store) {
    const auto bytes = serialize_checkpoint(header, store);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open checkpoint for writing: " + path.string());
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("short write to checkpoint: " + path.string());
}

CheckpointHeader load_checkpoint(const std::filesystem::path& path, ParamStore& store) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open checkpoint: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    return deserialize_checkpoint(bytes, store);
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t file_fnv1a64(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open file for hashing: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    return fnv1a64(bytes);
}

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return s;
}

} // namespace udgan
