#include "rrqa/pipeline/recorder.hpp"

#include "rrqa/digest.hpp"

namespace rrqa {

CallRecorder::CallRecorder(ChatBackend& backend, const Retriever* retriever)
    : backend_(backend), retriever_(retriever) {}

void CallRecorder::label(std::string purpose, std::size_t step) {
    std::lock_guard lock(mu_);
    purpose_ = std::move(purpose);
    step_ = step;
}

std::vector<CallLogEntry> CallRecorder::log() const {
    std::lock_guard lock(mu_);
    return log_;
}

std::size_t CallRecorder::retriever_calls() const {
    std::lock_guard lock(mu_);
    std::size_t n = 0;
    for (const auto& e : log_)
        if (e.kind == CallKind::retriever) ++n;
    return n;
}

void CallRecorder::append(CallLogEntry entry) {
    std::lock_guard lock(mu_);
    entry.sequence = log_.size() + 1;
    entry.purpose = purpose_;
    entry.step = step_;
    log_.push_back(std::move(entry));
}

ChatExchange CallRecorder::ModelView::complete(const ModelConfig& config, std::span<const ChatMessage> messages) {
    auto ex = owner_.backend_.complete(config, messages);
    CallLogEntry e;
    e.kind = CallKind::model;
    e.prompt_digest = sha256_hex(canonical_messages(messages));
    e.response_digest = sha256_hex(ex.response_text);
    e.response = ex.response_text;
    owner_.append(std::move(e));
    return ex;
}

std::string CallRecorder::ModelView::describe() const { return owner_.backend_.describe(); }

std::vector<Document> CallRecorder::RetrieverView::search(std::string_view query, std::size_t top_k) const {
    auto docs = owner_.retriever_->search(query, top_k);
    CallLogEntry e;
    e.kind = CallKind::retriever;
    e.query = std::string(query);
    e.prompt_digest = sha256_hex(query);
    std::string ids;
    for (const auto& d : docs) {
        e.doc_ids.push_back(d.doc_id);
        ids += d.doc_id;
        ids.push_back('\n');
    }
    e.response_digest = sha256_hex(ids);
    owner_.append(std::move(e));
    return docs;
}

std::string CallRecorder::RetrieverView::describe() const { return owner_.retriever_->describe(); }

}  // namespace rrqa
