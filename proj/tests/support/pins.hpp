#pragma once

#include <string_view>
#include <utility>

namespace pins {

// SHA-256 of each baseline template with every placeholder masked to "{}".
// Recomputed only when a template is deliberately changed.
inline constexpr std::pair<std::string_view, std::string_view> kBaselineTemplates[] = {
    {"baselines/vanilla", "7c45fe61d767bb05bd806f56715ad065e1575da2d2edf7ee2c6b99e81c249641"},
    {"baselines/vanilla_with_context", "9a8e2fccf427ce2dbbd4b7f14f371ebb8a6c362a40df73ceb3a3bd4139456239"},
    {"baselines/cot", "71efe8ad9748b5103ebd333b264924b548a349ff9eb56a73d6f89973fdb774d0"},
    {"baselines/freshprompt", "cfa3a4ded55c6a421eaebdd4a5a466b91878623e2085e3b0626cfdfd3f6cb6a2"},
    {"baselines/chain_of_note", "e92ff2855834fad2b0bd4a2c64d70b492b8e81e1d42b70cc0ca0d4ee8beabd0f"},
    {"baselines/react", "f355192377e5ba9af7b51aada265481585febe05443c8f6a18735733942650bd"},
    {"baselines/searchain", "5f0f3c1215bca2fe93be99fd447f2748058e676087eb2c110ca8b45f8c2d7285"},
};

}  // namespace pins
