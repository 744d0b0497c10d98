#include <bgx/cache.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace bgx {

std::optional<std::string> Cache::load(const std::string& key) const {
    std::ifstream f(dir_ + "/" + key + ".cache", std::ios::binary);
    if (!f) return std::nullopt;
    std::string checksum;
    if (!std::getline(f, checksum)) return std::nullopt;
    std::stringstream rest;
    rest << f.rdbuf();
    std::string payload = rest.str();
    if (hash_hex(payload) != checksum) return std::nullopt;  // tampered or torn
    return payload;
}

void Cache::store(const std::string& key, const std::string& payload) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    std::string tmp = dir_ + "/" + key + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        f << hash_hex(payload) << "\n" << payload;
    }
    std::filesystem::rename(tmp, dir_ + "/" + key + ".cache", ec);
}

std::string Cache::get_or_compute(const std::string& key, const std::function<std::string()>& producer) const {
    if (!enabled()) return producer();
    if (auto hit = load(key)) return *hit;
    std::string fresh = producer();
    store(key, fresh);
    return fresh;
}

}  // namespace bgx
