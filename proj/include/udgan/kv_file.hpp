#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "udgan/error.hpp"

namespace udgan {

// key=value line format shared by config files, rule-constant files, timing
// reports and manifests. '#' starts a comment; blank lines are ignored.
using KvMap = std::map<std::string, std::string>;

KvMap parse_kv_text(const std::string& text);
KvMap load_kv_file(const std::filesystem::path& path);
void save_kv_file(const std::filesystem::path& path, const KvMap& kv);

double kv_double(const KvMap& kv, const std::string& key, double fallback);
std::int64_t kv_int(const KvMap& kv, const std::string& key, std::int64_t fallback);
std::string kv_string(const KvMap& kv, const std::string& key, const std::string& fallback);
bool kv_bool(const KvMap& kv, const std::string& key, bool fallback);

} // namespace udgan
