#pragma once

/**
 * Instruction prompt assembly. Pure functions: identical inputs produce
 * identical bytes. Golden copies of the three templates live under
 * tests/golden/ and are asserted byte-for-byte.
 */

#include <span>
#include <string>
#include <string_view>

namespace kgr {

// "Please generate a valid relation path ...: <question>"
std::string planning_prompt(std::string_view question);

// Reasoning instruction, a "Reasoning Paths:" block with one serialized
// path per line, then a "Question:" block.
std::string reasoning_prompt(std::string_view question,
                             std::span<const std::string> reasoning_paths);

// Reasoning-with-explanation instruction; `examples_block` fills the
// few-shot slot and may be empty, in which case the slot stays empty.
std::string explanation_prompt(std::string_view question,
                               std::span<const std::string> reasoning_paths,
                               std::string_view examples_block);

}  // namespace kgr
