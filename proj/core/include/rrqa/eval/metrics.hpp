#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rrqa {

/// Lowercase, drop ASCII punctuation, drop the articles a/an/the, collapse
/// whitespace. Non-ASCII bytes pass through untouched.
std::string normalize_answer(std::string_view text);

std::vector<std::string> answer_tokens(std::string_view text);

/// True iff some normalized gold equals the normalized prediction or occurs
/// in it as a contiguous run of whole tokens.
bool is_correct(std::string_view prediction, const std::vector<std::string>& gold_answers);

/// Token-multiset F1 after normalization; 0 when either side is empty.
double token_f1(std::string_view prediction, std::string_view gold);
/// Maximum over the golds; 0 for an empty list.
double token_f1(std::string_view prediction, const std::vector<std::string>& gold_answers);

}  // namespace rrqa
