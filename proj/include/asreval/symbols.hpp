#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "asreval/kernels/levenshtein.hpp"

namespace asreval {

// Maps strings to dense ids so sequence kernels compare integers.
class SymbolTable {
public:
    kernels::Symbol intern(const std::string& s) {
        auto [it, inserted] = ids_.try_emplace(s, static_cast<kernels::Symbol>(ids_.size()));
        return it->second;
    }

    std::vector<kernels::Symbol> intern_all(std::span<const std::string> seq) {
        std::vector<kernels::Symbol> out;
        out.reserve(seq.size());
        for (const auto& s : seq) out.push_back(intern(s));
        return out;
    }

private:
    std::unordered_map<std::string, kernels::Symbol> ids_;
};

}  // namespace asreval
