#include "kgr/llm.hpp"

#include "kgr/errors.hpp"

namespace kgr {

std::vector<std::string> ScriptedMockClient::generate(const GenerationRequest& request) {
    if (request.num_completions < 1)
        throw PreconditionError("generate: num_completions must be >= 1");
    std::lock_guard lock(mutex_);
    calls_.push_back(request);
    if (next_ >= script_.size())
        throw MockExhaustedError("scripted mock exhausted after " +
                                 std::to_string(script_.size()) + " calls");
    return script_[next_++];
}

}  // namespace kgr
