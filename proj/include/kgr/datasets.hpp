#pragma once

/**
 * QA example ingestion and instruction-dataset construction.
 *
 * QA file: JSON lines with fields id, question, q_entities (array),
 * answers (array). Instruction output: JSON lines with fields kind,
 * input, target.
 *
 * Examples whose entities are missing from the graph are skipped and
 * counted rather than aborting a long build; the report carries the
 * skip breakdown. Output order always follows input order, independent
 * of the number of worker threads.
 */

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgr/graph.hpp"

namespace kgr {

struct QAExample {
    std::string id;        // non-empty, unique within a file
    std::string question;
    std::vector<std::string> topic_entities;  // non-empty
    std::vector<std::string> answers;
};

struct InstructionRecord {
    std::string kind;    // "planning" or "reasoning"
    std::string input;   // prompt-formatted
    std::string target;
};

struct DatasetBuildReport {
    std::size_t examples = 0;
    std::size_t records = 0;
    std::size_t skipped_unresolved = 0;
    std::size_t skipped_no_mining = 0;
    std::size_t skipped_no_paths = 0;  // reasoning datasets only
};

// Throws ParseError naming the 1-based line number on malformed records
// and on duplicate ids.
std::vector<QAExample> load_qa(std::istream& in);
std::vector<QAExample> load_qa_file(const std::string& path);

// One record per mined plan: planning prompt as input, serialized plan
// as target.
std::vector<InstructionRecord> build_planning_dataset(std::span<const QAExample> examples,
                                                      const KnowledgeGraph& g,
                                                      std::size_t max_hops,
                                                      unsigned jobs = 1,
                                                      DatasetBuildReport* report = nullptr);

// One record per example with non-empty mining and at least one
// retrieved path: reasoning prompt over all mined plans' paths as
// input, gold answers joined by newline as target.
std::vector<InstructionRecord> build_reasoning_dataset(std::span<const QAExample> examples,
                                                       const KnowledgeGraph& g,
                                                       std::size_t max_hops,
                                                       std::optional<std::size_t> cap,
                                                       unsigned jobs = 1,
                                                       DatasetBuildReport* report = nullptr);

std::string to_jsonl(const InstructionRecord& record);
void write_instruction_jsonl(std::span<const InstructionRecord> records, std::ostream& out);

}  // namespace kgr
