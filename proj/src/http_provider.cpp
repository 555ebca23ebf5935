#include <algorithm>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "promptopic/providers.hpp"

namespace promptopic {

namespace {

class HttplibTransport : public HttpTransport {
public:
    HttplibTransport(std::string base_url, double timeout_seconds)
        : client_(base_url) {
        auto secs = static_cast<time_t>(timeout_seconds);
        auto usecs = static_cast<time_t>((timeout_seconds - static_cast<double>(secs)) * 1e6);
        client_.set_connection_timeout(secs, usecs);
        client_.set_read_timeout(secs, usecs);
        client_.set_write_timeout(secs, usecs);
    }

    HttpResult post(const std::string& path, const std::string& body,
                    const std::map<std::string, std::string>& headers) override {
        httplib::Headers h(headers.begin(), headers.end());
        auto res = client_.Post(path, h, body, "application/json");
        HttpResult out;
        if (!res) {
            out.transport_error = true;
            out.error = httplib::to_string(res.error());
            return out;
        }
        out.status = res->status;
        out.body = res->body;
        return out;
    }

private:
    httplib::Client client_;
};

bool looks_like_context_overflow(const std::string& body) {
    std::string low = body;
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return low.find("context_length") != std::string::npos ||
           low.find("context length") != std::string::npos ||
           low.find("maximum context") != std::string::npos;
}

}  // namespace

std::unique_ptr<HttpTransport> make_httplib_transport(const std::string& base_url,
                                                      double timeout_seconds) {
    return std::make_unique<HttplibTransport>(base_url, timeout_seconds);
}

HttpChatProvider::HttpChatProvider(HttpProviderConfig cfg, std::unique_ptr<HttpTransport> transport,
                                   Sleeper sleeper)
    : cfg_(std::move(cfg)), transport_(std::move(transport)), sleeper_(std::move(sleeper)) {
    if (!transport_) transport_ = make_httplib_transport(cfg_.base_url, cfg_.timeout_seconds);
    if (!sleeper_)
        sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    if (const char* key = std::getenv(cfg_.api_key_env.c_str())) api_key_ = key;
}

ChatResponse HttpChatProvider::complete(const ChatRequest& req) {
    nlohmann::json body;
    body["model"] = req.model_id.empty() ? cfg_.model_id : req.model_id;
    body["temperature"] = req.temperature;
    body["max_tokens"] = req.max_output_tokens;
    auto& messages = body["messages"] = nlohmann::json::array();
    if (cfg_.style == PromptStyle::chat_roles) {
        messages.push_back({{"role", "system"}, {"content", req.system}});
        messages.push_back({{"role", "user"}, {"content", req.user}});
    } else {
        messages.push_back(
            {{"role", "user"},
             {"content", "<<SYS>>\n" + req.system + "\n<</SYS>>\n\n" + req.user}});
    }

    std::map<std::string, std::string> headers;
    if (!api_key_.empty()) headers["Authorization"] = "Bearer " + api_key_;

    const std::string payload = body.dump();
    const int max_attempts = 1 + std::max(0, cfg_.max_retries);
    std::string last_error;
    auto delay = cfg_.backoff_base;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        attempts_.fetch_add(1);
        HttpResult res = transport_->post(cfg_.endpoint, payload, headers);

        bool retryable = false;
        if (res.transport_error) {
            retryable = true;
            last_error = "transport: " + res.error;
        } else if (res.status == 401 || res.status == 403) {
            throw AuthError("provider rejected credentials (HTTP " + std::to_string(res.status) + ")");
        } else if (res.status == 429 || res.status >= 500) {
            retryable = true;
            last_error = "HTTP " + std::to_string(res.status);
        } else if (res.status == 400 && looks_like_context_overflow(res.body)) {
            throw ContextOverflow("provider reports input too long: " + res.body);
        } else if (res.status != 200) {
            throw ProviderExhausted("unrecoverable HTTP " + std::to_string(res.status) + ": " +
                                    res.body);
        } else {
            nlohmann::json j = nlohmann::json::parse(res.body, nullptr, false);
            if (j.is_discarded() || !j.contains("choices") || j["choices"].empty()) {
                retryable = true;
                last_error = "unparseable response body";
            } else {
                ChatResponse out;
                out.text = j["choices"][0].value("message", nlohmann::json::object())
                               .value("content", "");
                if (j.contains("usage")) {
                    out.prompt_tokens = j["usage"].value("prompt_tokens", 0);
                    out.completion_tokens = j["usage"].value("completion_tokens", 0);
                }
                out.provider_id = id();
                return out;
            }
        }

        if (retryable && attempt < max_attempts) {
            sleeper_(delay);
            delay = std::min(delay * 2, cfg_.backoff_cap);
        }
    }
    throw ProviderExhausted("gave up after " + std::to_string(max_attempts) +
                            " attempts; last error: " + last_error);
}

}  // namespace promptopic
