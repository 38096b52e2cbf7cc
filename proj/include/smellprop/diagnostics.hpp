#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace smellprop {

// Tallies of recoverable events (skipped messages, dropped types, unscorable
// spans) collected while processing, printed or serialized at the end.
struct Diagnostics {
    std::map<std::string, std::size_t> counters;
    std::vector<std::string> messages;

    void count(const std::string &key, std::size_t n = 1) { counters[key] += n; }
    void note(std::string message) { messages.push_back(std::move(message)); }
    std::size_t get(const std::string &key) const {
        auto it = counters.find(key);
        return it == counters.end() ? 0 : it->second;
    }
    void merge(const Diagnostics &other) {
        for (const auto &[k, v] : other.counters) counters[k] += v;
        messages.insert(messages.end(), other.messages.begin(), other.messages.end());
    }
};

inline nlohmann::json to_json(const Diagnostics &d) {
    return {{"counters", d.counters}, {"messages", d.messages}};
}

inline Diagnostics diagnostics_from_json(const nlohmann::json &j) {
    Diagnostics d;
    if (j.contains("counters")) d.counters = j.at("counters").get<std::map<std::string, std::size_t>>();
    if (j.contains("messages")) d.messages = j.at("messages").get<std::vector<std::string>>();
    return d;
}

}  // namespace smellprop
