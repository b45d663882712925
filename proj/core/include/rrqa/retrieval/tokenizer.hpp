#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rrqa {

/// Bumped whenever tokenize() changes; persisted indexes record it and are
/// rejected on mismatch.
inline constexpr int kTokenizerVersion = 1;

/// Lowercases ASCII, turns every byte that is not an ASCII letter or digit
/// into a separator (non-ASCII bytes are kept as part of tokens), and splits.
/// "Most-followed user" -> {"most", "followed", "user"}.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace rrqa
