#include "rrqa/errors.hpp"

namespace rrqa {

namespace {

std::string orphan_message(const std::vector<std::string>& ids) {
    std::string msg = "traces without a matching record:";
    for (const auto& id : ids) msg += " " + id;
    return msg;
}

}  // namespace

UnmatchedTrace::UnmatchedTrace(std::vector<std::string> ids)
    : Error(orphan_message(ids)), ids_(std::move(ids)) {}

}  // namespace rrqa
