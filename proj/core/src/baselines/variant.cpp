#include "rrqa/baselines/variant.hpp"

#include "rrqa/errors.hpp"

#include <array>

namespace rrqa {

namespace {

struct Entry {
    std::string_view name;
    PipelineVariant info;
};

const std::array<Entry, 14>& registry() {
    static const std::array<Entry, 14> r{{
        {"vanilla", {VariantName::vanilla, {"baselines/vanilla"}, false}},
        {"vanilla_with_context", {VariantName::vanilla_with_context, {"baselines/vanilla_with_context"}, true}},
        {"cot", {VariantName::cot, {"baselines/cot"}, false}},
        {"freshprompt", {VariantName::freshprompt, {"baselines/freshprompt"}, true}},
        {"chain_of_note", {VariantName::chain_of_note, {"baselines/chain_of_note"}, true}},
        {"self_ask", {VariantName::self_ask, {"baselines/self_ask", "rrr/reprompt"}, true}},
        {"react", {VariantName::react, {"baselines/react", "baselines/vanilla", "rrr/reprompt"}, true}},
        {"searchain",
         {VariantName::searchain, {"baselines/searchain", "baselines/searchain_feedback", "rrr/reprompt"}, true}},
        {"rrr_full",
         {VariantName::rrr_full,
          {"rrr/plan", "rrr/review", "rrr/gate", "rrr/refine_context", "rrr/refine_internal", "rrr/aggregate",
           "rrr/reprompt"},
          true}},
        {"rrr_no_decompose",
         {VariantName::rrr_no_decompose,
          {"rrr/review", "rrr/gate", "rrr/refine_context", "rrr/refine_internal", "rrr/aggregate", "rrr/reprompt"},
          true}},
        {"rrr_no_retrieval",
         {VariantName::rrr_no_retrieval,
          {"rrr/plan", "rrr/review", "rrr/gate_internal", "rrr/refine_internal", "rrr/aggregate", "rrr/reprompt"},
          false}},
        {"rrr_no_rewrite",
         {VariantName::rrr_no_rewrite,
          {"rrr/plan", "rrr/review_fixed", "rrr/gate", "rrr/refine_context", "rrr/refine_internal",
           "rrr/aggregate", "rrr/reprompt"},
          true}},
        {"self_ask_no_retrieval", {VariantName::self_ask_no_retrieval, {"baselines/self_ask", "rrr/reprompt"}, false}},
        {"searchain_no_retrieval",
         {VariantName::searchain_no_retrieval, {"baselines/searchain", "rrr/reprompt"}, false}},
    }};
    return r;
}

}  // namespace

std::string_view to_string(VariantName name) {
    for (const auto& e : registry())
        if (e.info.name == name) return e.name;
    return "unknown";
}

VariantName parse_variant(std::string_view name) {
    std::string known;
    for (const auto& e : registry()) {
        if (e.name == name) return e.info.name;
        known += known.empty() ? "" : ", ";
        known += e.name;
    }
    throw ConfigError("unknown variant '" + std::string(name) + "' (expected one of: " + known + ")");
}

const std::vector<VariantName>& all_variants() {
    static const std::vector<VariantName> all = [] {
        std::vector<VariantName> v;
        for (const auto& e : registry()) v.push_back(e.info.name);
        return v;
    }();
    return all;
}

const PipelineVariant& variant(VariantName name) {
    for (const auto& e : registry())
        if (e.info.name == name) return e.info;
    throw ConfigError("unregistered variant");
}

}  // namespace rrqa
