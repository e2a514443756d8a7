#pragma once

/**
 * Reference HTTP implementation of GenerationClient.
 *
 * Wire format: the request is POSTed as JSON
 *   {"prompt", "num_completions", "max_new_tokens", "temperature",
 *    "stop_sequences"}
 * to a single configurable endpoint; the response body is a JSON array
 * of completion strings. Transport failures and 5xx responses are
 * retried with exponential backoff (generation is idempotent); 4xx are
 * not. Concurrent in-flight requests are capped.
 */

#include <chrono>
#include <memory>
#include <string>

#include "kgr/llm.hpp"

namespace kgr {

struct HttpClientConfig {
    std::string endpoint;       // e.g. http://127.0.0.1:8080/generate
    std::string auth_token;     // optional; sent as "Authorization: Bearer ..."
    double timeout_seconds = 30.0;
    int max_retries = 2;        // transport errors and 5xx only
    std::chrono::milliseconds backoff_base{250};
    int max_concurrent = 4;

    // KGR_LLM_ENDPOINT (required), KGR_LLM_TOKEN, KGR_LLM_TIMEOUT_S.
    // Throws ConfigError when the endpoint is unset.
    static HttpClientConfig from_env();
};

class HttpGenerationClient final : public GenerationClient {
public:
    explicit HttpGenerationClient(HttpClientConfig config);
    ~HttpGenerationClient() override;

    std::vector<std::string> generate(const GenerationRequest& request) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace kgr
