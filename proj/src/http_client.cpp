#include "kgr/http_client.hpp"

#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "kgr/errors.hpp"

namespace kgr {

namespace {

struct Endpoint {
    std::string host;
    int port = 80;
    std::string path = "/";
};

Endpoint parse_endpoint(const std::string& url) {
    constexpr std::string_view scheme = "http://";
    if (url.rfind(scheme, 0) != 0)
        throw ConfigError("endpoint must start with http:// : " + url);
    std::string rest = url.substr(scheme.size());

    Endpoint ep;
    auto slash = rest.find('/');
    std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
    if (slash != std::string::npos) ep.path = rest.substr(slash);

    auto colon = hostport.find(':');
    if (colon == std::string::npos) {
        ep.host = hostport;
    } else {
        ep.host = hostport.substr(0, colon);
        ep.port = std::atoi(hostport.c_str() + colon + 1);
    }
    if (ep.host.empty() || ep.port <= 0)
        throw ConfigError("malformed endpoint: " + url);
    return ep;
}

// Simple slot counter; std::counting_semaphore needs a compile-time max.
class ConcurrencyGate {
public:
    explicit ConcurrencyGate(int slots) : slots_(slots) {}

    void acquire() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return slots_ > 0; });
        --slots_;
    }

    void release() {
        {
            std::lock_guard lock(mutex_);
            ++slots_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int slots_;
};

}  // namespace

HttpClientConfig HttpClientConfig::from_env() {
    HttpClientConfig cfg;
    const char* endpoint = std::getenv("KGR_LLM_ENDPOINT");
    if (!endpoint || !*endpoint)
        throw ConfigError("KGR_LLM_ENDPOINT is not set");
    cfg.endpoint = endpoint;
    if (const char* token = std::getenv("KGR_LLM_TOKEN")) cfg.auth_token = token;
    if (const char* timeout = std::getenv("KGR_LLM_TIMEOUT_S")) {
        cfg.timeout_seconds = std::atof(timeout);
        if (cfg.timeout_seconds <= 0)
            throw ConfigError("KGR_LLM_TIMEOUT_S must be positive");
    }
    return cfg;
}

struct HttpGenerationClient::Impl {
    HttpClientConfig cfg;
    Endpoint endpoint;
    ConcurrencyGate gate;

    Impl(HttpClientConfig c)
        : cfg(std::move(c)), endpoint(parse_endpoint(cfg.endpoint)), gate(cfg.max_concurrent) {}
};

HttpGenerationClient::HttpGenerationClient(HttpClientConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

HttpGenerationClient::~HttpGenerationClient() = default;

std::vector<std::string> HttpGenerationClient::generate(const GenerationRequest& request) {
    if (request.num_completions < 1)
        throw PreconditionError("generate: num_completions must be >= 1");

    nlohmann::json body = {
        {"prompt", request.prompt},
        {"num_completions", request.num_completions},
        {"max_new_tokens", request.max_new_tokens},
        {"temperature", request.temperature},
        {"stop_sequences", request.stop_sequences},
    };
    const std::string payload = body.dump();

    impl_->gate.acquire();
    struct Release {
        ConcurrencyGate& gate;
        ~Release() { gate.release(); }
    } release{impl_->gate};

    httplib::Client client(impl_->endpoint.host, impl_->endpoint.port);
    const auto timeout = std::chrono::duration<double>(impl_->cfg.timeout_seconds);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers headers;
    if (!impl_->cfg.auth_token.empty())
        headers.emplace("Authorization", "Bearer " + impl_->cfg.auth_token);

    int last_status = 0;
    int attempts = 0;
    for (int attempt = 0; attempt <= impl_->cfg.max_retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(impl_->cfg.backoff_base * (1 << (attempt - 1)));
        ++attempts;

        auto res = client.Post(impl_->endpoint.path, headers, payload, "application/json");
        if (!res) {
            last_status = 0;
            continue;  // transport failure: retry
        }
        last_status = res->status;
        if (res->status >= 500) continue;  // server error: retry
        if (res->status != 200)
            throw TransportError("generation endpoint returned status " +
                                     std::to_string(res->status),
                                 res->status, attempts);

        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("generation response is not JSON: ") + e.what());
        }
        if (!parsed.is_array())
            throw ParseError("generation response must be a JSON array of strings");
        std::vector<std::string> completions;
        for (const auto& item : parsed) {
            if (!item.is_string())
                throw ParseError("generation response must be a JSON array of strings");
            completions.push_back(item.get<std::string>());
        }
        if (completions.size() > static_cast<std::size_t>(request.num_completions))
            completions.resize(static_cast<std::size_t>(request.num_completions));
        return completions;
    }

    throw TransportError("generation request failed after " + std::to_string(attempts) +
                             " attempts (last status " + std::to_string(last_status) + ")",
                         last_status, attempts);
}

}  // namespace kgr
