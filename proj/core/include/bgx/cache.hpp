#pragma once

#include <bgx/numbers.hpp>

#include <functional>
#include <optional>
#include <string>

namespace bgx {

// Content-addressed text cache: entries live under dir/<key>.cache with a
// leading checksum line; corrupt entries are recomputed.
class Cache {
  public:
    Cache() = default;
    explicit Cache(std::string dir) : dir_(std::move(dir)) {}

    bool enabled() const { return !dir_.empty(); }

    std::string get_or_compute(const std::string& key, const std::function<std::string()>& producer) const;

  private:
    std::optional<std::string> load(const std::string& key) const;
    void store(const std::string& key, const std::string& payload) const;

    std::string dir_;
};

}  // namespace bgx
