#pragma once

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace hierlab {

using VarId = std::uint32_t;

// Global interner for field-variable names. The standard alphabet is
// pre-registered in alphabetical order, so VarId order coincides with name
// order for it; monomials sort by VarId (the fixed total order used for
// canonical serialization).
class Symbols {
public:
    static Symbols& instance() {
        static Symbols s;
        return s;
    }

    VarId intern(const std::string& name) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = by_name_.find(name);
        if (it != by_name_.end()) return it->second;
        VarId id = static_cast<VarId>(names_.size());
        names_.push_back(name);
        by_name_.emplace(name, id);
        return id;
    }

    const std::string& name(VarId id) const {
        std::lock_guard<std::mutex> lock(mu_);
        if (id >= names_.size()) throw std::out_of_range("Symbols: unknown VarId");
        return names_[id];
    }

private:
    Symbols() {
        for (const char* n : {"q", "qbar", "r", "s", "u", "v", "w"}) {
            VarId id = static_cast<VarId>(names_.size());
            names_.emplace_back(n);
            by_name_.emplace(n, id);
        }
    }
    mutable std::mutex mu_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, VarId> by_name_;
};

inline VarId var(const std::string& name) { return Symbols::instance().intern(name); }
inline const std::string& var_name(VarId id) { return Symbols::instance().name(id); }

// The generalized-monomial symbol s = (1+v)^{-1}; x_derivative applies
// ds = -s^2 v'.
inline VarId s_var() { return var("s"); }
inline VarId s_companion() { return var("v"); }

}  // namespace hierlab
