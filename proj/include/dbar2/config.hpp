#pragma once
// Flat key-value config with [section] headers. Keys are stored "section.key".
#include <map>
#include <string>
#include <stdexcept>

namespace dbar2 {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& dflt) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double dflt) const;
    long get_int_or(const std::string& key, long dflt) const;

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    std::string serialize() const; // round-trips through parse_text

    const std::map<std::string, std::string>& items() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

} // namespace dbar2
