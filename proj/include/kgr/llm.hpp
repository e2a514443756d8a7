#pragma once

/**
 * Contract for an external text-generation service plus a deterministic
 * scripted mock. Every LLM-backed code path in the toolkit is testable
 * end-to-end against the mock without a network.
 */

#include <mutex>
#include <string>
#include <vector>

namespace kgr {

struct GenerationRequest {
    std::string prompt;
    int num_completions = 1;
    int max_new_tokens = 256;
    double temperature = 0.0;
    std::vector<std::string> stop_sequences;
};

class GenerationClient {
public:
    virtual ~GenerationClient() = default;

    // At most num_completions texts, in server order. An empty list is a
    // valid response. Throws TransportError on delivery failure.
    virtual std::vector<std::string> generate(const GenerationRequest& request) = 0;
};

// Serves a fixed script of responses in order, then throws
// MockExhaustedError. Records every request for golden-prompt assertions.
class ScriptedMockClient final : public GenerationClient {
public:
    explicit ScriptedMockClient(std::vector<std::vector<std::string>> script)
        : script_(std::move(script)) {}

    std::vector<std::string> generate(const GenerationRequest& request) override;

    const std::vector<GenerationRequest>& calls() const { return calls_; }

private:
    std::vector<std::vector<std::string>> script_;
    std::vector<GenerationRequest> calls_;
    std::size_t next_ = 0;
    std::mutex mutex_;
};

}  // namespace kgr
