#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "promptopic/errors.hpp"

namespace promptopic {

struct ChatRequest {
    std::string system;
    std::string user;
    double temperature = 0.0;
    int max_output_tokens = 1024;
    std::string model_id;
};

struct ChatResponse {
    std::string text;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    std::string provider_id;
};

/// Rough context accounting: one token per four characters. Approximate by
/// construction; used only for the client-side overflow guard.
std::int64_t estimate_tokens(std::size_t chars);

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual ChatResponse complete(const ChatRequest& req) = 0;
    virtual std::string id() const = 0;
    /// Declared input budget in tokens; requests estimated above it are
    /// rejected with ContextOverflow before dispatch. 0 means unlimited.
    virtual std::int64_t context_tokens() const { return 0; }
};

/// Validates the request (non-empty system/user, token budget) and dispatches.
ChatResponse chat_complete(ChatProvider& provider, const ChatRequest& req);

// --- embeddings -------------------------------------------------------------

struct EmbeddingVector {
    std::vector<float> values;
    std::string source_text;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual EmbeddingVector embed(const std::string& text) = 0;
    virtual std::size_t dimension() const = 0;
    virtual std::string id() const = 0;
};

/// Validates text non-empty and the returned dimension.
EmbeddingVector embed(EmbeddingProvider& provider, const std::string& text);

/// Offline deterministic embedder: L2-normalized hashed character-trigram
/// counts (FNV-1a 64 over each trigram, bucketed mod the dimension). Text is
/// canonicalized (trimmed, ASCII-lowercased, whitespace collapsed) before
/// hashing, so trailing-space variants embed identically.
class HashedTrigramEmbedder : public EmbeddingProvider {
public:
    explicit HashedTrigramEmbedder(std::size_t dimension = 768);
    EmbeddingVector embed(const std::string& text) override;
    std::size_t dimension() const override { return dim_; }
    std::string id() const override { return "hash-trigram"; }

private:
    std::size_t dim_;
};

// --- deterministic offline chat ---------------------------------------------

/// keyword -> topics emitted when the keyword occurs in a document (extraction
/// style), or topic-substring -> general-topic name (summarization style).
using MockFixture = std::map<std::string, std::vector<std::string>>;

enum class MockStyle { extraction, summarization };

/// Deterministic stand-in for a chat backend. Extraction style scans each
/// numbered document for fixture keywords and answers one `<i>: topics` line
/// per document ("unknown" when nothing matches). Summarization style groups
/// the topic list by fixture substring into TOPIC/SUBTOPICS/EXPLANATION blocks.
class MockChatProvider : public ChatProvider {
public:
    MockChatProvider(MockFixture fixture, MockStyle style);
    ChatResponse complete(const ChatRequest& req) override;
    std::string id() const override { return "mock"; }
    std::int64_t context_tokens() const override { return context_tokens_; }
    void set_context_tokens(std::int64_t t) { context_tokens_ = t; }

private:
    MockFixture fixture_;
    MockStyle style_;
    std::int64_t context_tokens_ = 0;
};

// --- HTTP backend ------------------------------------------------------------

struct HttpResult {
    int status = 0;
    std::string body;
    bool transport_error = false;  // timeout / connection failure
    std::string error;
};

/// One POST; retries live above this layer so tests can stub the wire.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResult post(const std::string& path, const std::string& body,
                            const std::map<std::string, std::string>& headers) = 0;
};

/// cpp-httplib-backed transport for http:// and https:// base URLs.
std::unique_ptr<HttpTransport> make_httplib_transport(const std::string& base_url,
                                                      double timeout_seconds);

/// How the system prompt travels: separate chat roles, or inline wrapped in
/// <<SYS>> markers inside a single user message.
enum class PromptStyle { chat_roles, sys_token };

struct HttpProviderConfig {
    std::string base_url;  // scheme://host[:port]
    std::string endpoint = "/v1/chat/completions";
    std::string api_key_env = "OPENAI_API_KEY";  // name of the env var holding the key
    std::string model_id = "gpt-3.5-turbo";
    double timeout_seconds = 60.0;
    int max_retries = 3;  // additional attempts after the first
    int max_in_flight = 4;
    int requests_per_minute = 0;  // 0 = unlimited
    std::int64_t context_tokens = 16384;
    PromptStyle style = PromptStyle::chat_roles;
    std::chrono::milliseconds backoff_base{500};
    std::chrono::milliseconds backoff_cap{30000};
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// OpenAI-compatible chat-completions client with exponential backoff on
/// 429/5xx/transport errors. 401/403 raise AuthError immediately; overflow
/// reported by the server raises ContextOverflow.
class HttpChatProvider : public ChatProvider {
public:
    /// Transport defaults to httplib against cfg.base_url; tests inject stubs.
    explicit HttpChatProvider(HttpProviderConfig cfg,
                              std::unique_ptr<HttpTransport> transport = nullptr,
                              Sleeper sleeper = nullptr);
    ChatResponse complete(const ChatRequest& req) override;
    std::string id() const override { return "http:" + cfg_.model_id; }
    std::int64_t context_tokens() const override { return cfg_.context_tokens; }

    /// Cumulative wire attempts (including retries), for logging and tests.
    std::int64_t total_attempts() const { return attempts_.load(); }

private:
    HttpProviderConfig cfg_;
    std::string api_key_;
    std::unique_ptr<HttpTransport> transport_;
    Sleeper sleeper_;
    std::atomic<std::int64_t> attempts_{0};
};

// --- concurrency ------------------------------------------------------------

/// Bounds in-flight requests and enforces a requests-per-minute ceiling on
/// top of any ChatProvider. Thread-safe; submissions from any thread.
class Dispatcher {
public:
    Dispatcher(ChatProvider& provider, int max_in_flight, int requests_per_minute);
    ~Dispatcher();

    struct Ticket {
        std::uint64_t correlation_id;
        std::future<ChatResponse> response;
    };

    Ticket submit(ChatRequest req);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace promptopic
