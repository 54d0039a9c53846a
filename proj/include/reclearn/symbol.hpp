#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace reclearn {

// Interned identifier.  Constants, variable names, and predicate names all
// live in one process-wide table; equality of symbols is equality of ids.
using Symbol = std::uint32_t;

namespace detail {

class SymbolTable {
public:
    static SymbolTable& instance() {
        static SymbolTable table;
        return table;
    }

    Symbol intern(std::string_view text) {
        {
            std::shared_lock lock(mutex_);
            auto it = ids_.find(std::string(text));
            if (it != ids_.end()) return it->second;
        }
        std::unique_lock lock(mutex_);
        auto [it, inserted] = ids_.try_emplace(std::string(text), 0);
        if (inserted) {
            it->second = static_cast<Symbol>(names_.size());
            names_.push_back(it->first);
        }
        return it->second;
    }

    const std::string& name(Symbol id) const {
        std::shared_lock lock(mutex_);
        return names_[id];
    }

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, Symbol> ids_;
    std::deque<std::string> names_;  // stable storage, indexed by Symbol
};

}  // namespace detail

inline Symbol intern(std::string_view text) {
    return detail::SymbolTable::instance().intern(text);
}

inline const std::string& symbol_name(Symbol id) {
    return detail::SymbolTable::instance().name(id);
}

}  // namespace reclearn
