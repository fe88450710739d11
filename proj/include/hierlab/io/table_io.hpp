#pragma once

#include "hierlab/hierarchy/tables.hpp"
#include "hierlab/poly_io.hpp"

#include <filesystem>
#include <fstream>

namespace hierlab::io {

// atomic write: temp file + rename
inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        f << content;
    }
    std::filesystem::rename(tmp, path);
}

// family/N.json entry per the polynomial schema plus metadata
inline ordered_json entry_to_json(const hierarchy::HierarchyTable& tab, int n) {
    const auto& e = tab.at(n);
    ordered_json j;
    j["family"] = hierarchy::family_name(tab.family);
    j["n"] = n;
    j["convention"] = "main-text-half";
    if (tab.family == hierarchy::Family::AKNS) {
        j["alpha"] = poly_to_json(e.alpha);
        j["beta"] = poly_to_json(e.beta);
        j["gamma"] = poly_to_json(e.gamma);
    }
    if (!e.hamiltonian.is_zero() || n == 0) j["hamiltonian"] = poly_to_json(e.hamiltonian);
    if (!e.gradients.empty()) {
        j["gradients"] = ordered_json::array();
        for (const auto& g : e.gradients) j["gradients"].push_back(poly_to_json(g));
    }
    if (!e.vector_field.empty()) {
        j["vector_field"] = ordered_json::array();
        for (const auto& g : e.vector_field) j["vector_field"].push_back(poly_to_json(g));
    }
    if (!e.flux.is_zero()) j["flux"] = poly_to_json(e.flux);
    return j;
}

inline std::string entry_pretty(const hierarchy::HierarchyTable& tab, int n) {
    const auto& e = tab.at(n);
    std::string s;
    auto line = [&s, n](const std::string& name, const DiffPoly& p) {
        if (p.is_zero() && name != "H") return;
        s += name + "_" + std::to_string(n) + " = " + pretty(p) + "\n";
    };
    if (tab.family == hierarchy::Family::AKNS) {
        line("α", e.alpha);
        line("β", e.beta);
        line("γ", e.gamma);
    }
    if (!e.hamiltonian.is_zero()) s += "H_" + std::to_string(n) + " = ∫ " + pretty(e.hamiltonian) + " dx\n";
    for (std::size_t i = 0; i < e.gradients.size(); ++i)
        s += "grad" + std::to_string(i) + "_" + std::to_string(n) + " = " + pretty(e.gradients[i]) + "\n";
    for (std::size_t i = 0; i < e.vector_field.size(); ++i)
        s += "vf" + std::to_string(i) + "_" + std::to_string(n) + " = " + pretty(e.vector_field[i]) + "\n";
    if (!e.flux.is_zero()) s += "Fl_" + std::to_string(n) + " = " + pretty(e.flux) + "\n";
    return s;
}

}  // namespace hierlab::io
