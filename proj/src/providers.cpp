#include "promptopic/providers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <mutex>
#include <sstream>
#include <thread>

#include "promptopic/vecops.hpp"

namespace promptopic {

std::int64_t estimate_tokens(std::size_t chars) {
    return static_cast<std::int64_t>(chars / 4);
}

ChatResponse chat_complete(ChatProvider& provider, const ChatRequest& req) {
    if (req.system.empty() || req.user.empty())
        throw ConfigError("chat request needs non-empty system and user prompts");
    std::int64_t budget = provider.context_tokens();
    if (budget > 0) {
        std::int64_t est = estimate_tokens(req.system.size() + req.user.size());
        if (est > budget)
            throw ContextOverflow("estimated " + std::to_string(est) + " tokens exceeds provider context of " +
                                  std::to_string(budget));
    }
    return provider.complete(req);
}

EmbeddingVector embed(EmbeddingProvider& provider, const std::string& text) {
    if (text.empty()) throw ConfigError("cannot embed empty text");
    EmbeddingVector v = provider.embed(text);
    if (v.values.size() != provider.dimension())
        throw Error("embedding dimension mismatch: got " + std::to_string(v.values.size()) +
                    ", declared " + std::to_string(provider.dimension()));
    return v;
}

// --- HashedTrigramEmbedder ---------------------------------------------------

namespace {

std::string canonicalize_for_embedding(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::uint64_t fnv1a64(const char* data, std::size_t n) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

HashedTrigramEmbedder::HashedTrigramEmbedder(std::size_t dimension) : dim_(dimension) {}

EmbeddingVector HashedTrigramEmbedder::embed(const std::string& text) {
    EmbeddingVector v;
    v.source_text = text;
    v.values.assign(dim_, 0.0f);

    std::string canon = canonicalize_for_embedding(text);
    if (canon.empty()) canon = " ";
    if (canon.size() < 3) {
        v.values[fnv1a64(canon.data(), canon.size()) % dim_] += 1.0f;
    } else {
        for (std::size_t i = 0; i + 3 <= canon.size(); ++i)
            v.values[fnv1a64(canon.data() + i, 3) % dim_] += 1.0f;
    }

    double n = vecops::norm(v.values);
    if (n > 0.0)
        for (auto& x : v.values) x = static_cast<float>(x / n);
    return v;
}

// --- MockChatProvider ---------------------------------------------------------

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Splits "<i>: <body>" lines of a rendered user prompt.
std::vector<std::string> numbered_bodies(const std::string& user) {
    std::vector<std::string> bodies;
    std::istringstream in(user);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t i = 0;
        while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
        if (i == 0 || i >= line.size() || line[i] != ':') continue;
        bodies.push_back(trim(line.substr(i + 1)));
    }
    return bodies;
}

}  // namespace

MockChatProvider::MockChatProvider(MockFixture fixture, MockStyle style)
    : fixture_(std::move(fixture)), style_(style) {}

ChatResponse MockChatProvider::complete(const ChatRequest& req) {
    std::ostringstream out;
    if (style_ == MockStyle::extraction) {
        auto docs = numbered_bodies(req.user);
        for (std::size_t i = 0; i < docs.size(); ++i) {
            std::string text = lowercase(docs[i]);
            std::vector<std::string> topics;
            for (const auto& [keyword, mapped] : fixture_) {
                if (text.find(lowercase(keyword)) == std::string::npos) continue;
                for (const auto& t : mapped)
                    if (std::find(topics.begin(), topics.end(), t) == topics.end())
                        topics.push_back(t);
            }
            if (topics.empty()) topics.push_back("unknown");
            out << (i + 1) << ": ";
            for (std::size_t k = 0; k < topics.size(); ++k) {
                if (k) out << "; ";
                out << topics[k];
            }
            out << "\n";
        }
    } else {
        // group the incoming topic list by fixture substring
        std::vector<std::string> group_order;
        std::map<std::string, std::vector<std::string>> members;
        std::istringstream in(req.user);
        std::string line;
        while (std::getline(in, line)) {
            std::string topic = trim(line);
            if (topic.empty()) continue;
            std::string low = lowercase(topic);
            std::string group = "Others";
            for (const auto& [needle, names] : fixture_) {
                if (!names.empty() && low.find(lowercase(needle)) != std::string::npos) {
                    group = names.front();
                    break;
                }
            }
            auto& list = members[group];
            if (std::find(list.begin(), list.end(), topic) == list.end()) {
                if (list.empty()) group_order.push_back(group);
                list.push_back(topic);
            }
        }
        bool first = true;
        for (const auto& group : group_order) {
            if (!first) out << "\n";
            first = false;
            const auto& subs = members[group];
            out << "TOPIC: " << group << "\n";
            out << "SUBTOPICS: ";
            for (std::size_t k = 0; k < subs.size(); ++k) {
                if (k) out << "; ";
                out << subs[k];
            }
            out << "\n";
            out << "EXPLANATION: Groups topics such as " << subs.front() << ".\n";
        }
    }

    ChatResponse resp;
    resp.text = out.str();
    resp.prompt_tokens = estimate_tokens(req.system.size() + req.user.size());
    resp.completion_tokens = estimate_tokens(resp.text.size());
    resp.provider_id = id();
    return resp;
}

// --- Dispatcher ----------------------------------------------------------------

struct Dispatcher::Impl {
    ChatProvider& provider;
    int max_in_flight;
    std::chrono::nanoseconds min_interval{0};

    std::mutex mu;
    std::condition_variable cv;
    std::deque<std::pair<ChatRequest, std::promise<ChatResponse>>> queue;
    bool stopping = false;
    std::vector<std::thread> workers;
    std::chrono::steady_clock::time_point next_slot = std::chrono::steady_clock::now();
    std::atomic<std::uint64_t> next_id{0};

    Impl(ChatProvider& p, int in_flight, int rpm) : provider(p), max_in_flight(std::max(1, in_flight)) {
        if (rpm > 0) min_interval = std::chrono::nanoseconds(std::chrono::minutes(1)) / rpm;
        workers.reserve(static_cast<std::size_t>(max_in_flight));
        for (int i = 0; i < max_in_flight; ++i)
            workers.emplace_back([this] { run(); });
    }

    void run() {
        for (;;) {
            std::pair<ChatRequest, std::promise<ChatResponse>> job;
            {
                std::unique_lock lk(mu);
                cv.wait(lk, [&] { return stopping || !queue.empty(); });
                if (stopping && queue.empty()) return;
                job = std::move(queue.front());
                queue.pop_front();
                if (min_interval.count() > 0) {
                    auto now = std::chrono::steady_clock::now();
                    auto slot = std::max(next_slot, now);
                    next_slot = slot + min_interval;
                    lk.unlock();
                    std::this_thread::sleep_until(slot);
                }
            }
            try {
                job.second.set_value(chat_complete(provider, job.first));
            } catch (...) {
                job.second.set_exception(std::current_exception());
            }
        }
    }

    ~Impl() {
        {
            std::lock_guard lk(mu);
            stopping = true;
        }
        cv.notify_all();
        for (auto& w : workers) w.join();
    }
};

Dispatcher::Dispatcher(ChatProvider& provider, int max_in_flight, int requests_per_minute)
    : impl_(std::make_unique<Impl>(provider, max_in_flight, requests_per_minute)) {}

Dispatcher::~Dispatcher() = default;

Dispatcher::Ticket Dispatcher::submit(ChatRequest req) {
    std::promise<ChatResponse> promise;
    Ticket ticket{impl_->next_id.fetch_add(1), promise.get_future()};
    {
        std::lock_guard lk(impl_->mu);
        impl_->queue.emplace_back(std::move(req), std::move(promise));
    }
    impl_->cv.notify_one();
    return ticket;
}

}  // namespace promptopic
