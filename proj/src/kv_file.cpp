#include "udgan/kv_file.hpp"

#include <fstream>
#include <sstream>

namespace udgan {

KvMap parse_kv_text(const std::string& text) {
    KvMap kv;
    std::istringstream iss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(iss, line)) {
        ++lineno;
        // strip trailing CR from files written on other platforms
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        const auto eq = line.find('=', start);
        if (eq == std::string::npos)
            throw DataError("key=value file: missing '=' on line " + std::to_string(lineno));
        std::string key = line.substr(start, eq - start);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        std::string value = line.substr(eq + 1);
        std::size_t vs = value.find_first_not_of(" \t");
        value = vs == std::string::npos ? "" : value.substr(vs);
        while (!value.empty() && (value.back() == ' ' || value.back() == '\t')) value.pop_back();
        if (key.empty())
            throw DataError("key=value file: empty key on line " + std::to_string(lineno));
        kv[key] = value;
    }
    return kv;
}

KvMap load_kv_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open file: " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_kv_text(ss.str());
}

void save_kv_file(const std::filesystem::path& path, const KvMap& kv) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot write file: " + path.string());
    for (const auto& [k, v] : kv) f << k << '=' << v << '\n';
    if (!f) throw IoError("short write: " + path.string());
}

double kv_double(const KvMap& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw DataError("bad numeric value for key " + key + ": " + it->second);
    }
}

std::int64_t kv_int(const KvMap& kv, const std::string& key, std::int64_t fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        return std::stoll(it->second);
    } catch (const std::exception&) {
        throw DataError("bad integer value for key " + key + ": " + it->second);
    }
}

std::string kv_string(const KvMap& kv, const std::string& key, const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

bool kv_bool(const KvMap& kv, const std::string& key, bool fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw DataError("bad boolean value for key " + key + ": " + v);
}

} // namespace udgan
