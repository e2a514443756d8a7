#pragma once

/**
 * Interned knowledge-graph storage with relation-indexed adjacency.
 *
 * Entities and relations are interned to dense ids in first-seen order.
 * Triples are stored once (duplicates collapse), sorted by (subject,
 * relation, object); the objects reachable from a (subject, relation)
 * pair therefore form one contiguous ascending range. A per-subject
 * offset table narrows every lookup to that subject's edges, so a
 * neighbor query is two binary searches over a small range.
 *
 * The graph is immutable once built: any number of concurrent readers,
 * construction single-writer through GraphBuilder.
 *
 * Snapshot format (little-endian):
 *   magic "KGR1", u32 version,
 *   u64 entity count,   [u32 length + bytes] per name,
 *   u64 relation count, [u32 length + bytes] per name,
 *   u64 triple count,   (u32 subject, u32 relation, u32 object) per triple.
 */

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgr {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triple {
    EntityId subject;
    RelationId relation;
    EntityId object;

    friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Bidirectional name <-> dense id maps for entities and relations.
// Interning is a bijection and ids are dense in first-seen order.
class Vocabulary {
public:
    EntityId intern_entity(std::string_view name);
    RelationId intern_relation(std::string_view name);

    std::optional<EntityId> entity_id(std::string_view name) const;
    std::optional<RelationId> relation_id(std::string_view name) const;

    // Throw LookupError when the id is out of range.
    const std::string& entity_name(EntityId id) const;
    const std::string& relation_name(RelationId id) const;

    std::size_t entity_count() const { return entity_names_.size(); }
    std::size_t relation_count() const { return relation_names_.size(); }

private:
    std::vector<std::string> entity_names_;
    std::vector<std::string> relation_names_;
    std::unordered_map<std::string, EntityId> entity_ids_;
    std::unordered_map<std::string, RelationId> relation_ids_;
};

struct GraphStats {
    std::size_t entities = 0;
    std::size_t relations = 0;
    std::size_t triples = 0;

    friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

class KnowledgeGraph {
public:
    KnowledgeGraph() = default;

    const Vocabulary& vocab() const { return vocab_; }
    GraphStats stats() const;
    std::size_t triple_count() const { return subjects_.size(); }

    // Objects t with (e, r, t) in the graph, strictly ascending by id.
    // Throws LookupError on unresolvable ids.
    std::span<const EntityId> neighbors(EntityId e, RelationId r) const;

    // All edges leaving e, relation-major ascending. The two spans are
    // parallel: (relations[i], objects[i]) is one edge.
    struct OutEdges {
        std::span<const RelationId> relations;
        std::span<const EntityId> objects;
    };
    OutEdges out_edges(EntityId e) const;

    Triple triple(std::size_t i) const {
        return {subjects_[i], relations_[i], objects_[i]};
    }

    std::uint64_t relation_triple_count(RelationId r) const;

    void check_entity(EntityId e) const;
    void check_relation(RelationId r) const;

private:
    friend class GraphBuilder;
    friend KnowledgeGraph load_graph(std::istream& in);

    void index();  // sort staging, dedup, build offsets; called once

    Vocabulary vocab_;
    std::vector<EntityId> subjects_;    // sorted by (subject, relation, object)
    std::vector<RelationId> relations_;
    std::vector<EntityId> objects_;
    std::vector<std::uint64_t> subject_offsets_;   // entity_count() + 1
    std::vector<std::uint64_t> relation_counts_;   // triples per relation
};

// Single-writer construction; the resulting graph is immutable.
class GraphBuilder {
public:
    explicit GraphBuilder(bool add_inverse = false) : add_inverse_(add_inverse) {}

    // Interns names in first-seen order. With add_inverse, also stages
    // (object, relation + "_inv", subject).
    void add(std::string_view subject, std::string_view relation, std::string_view object);

    KnowledgeGraph finish();

private:
    bool add_inverse_;
    Vocabulary vocab_;
    std::vector<Triple> staged_;
};

// Triple file: one `subject<TAB>relation<TAB>object` per line, UTF-8,
// no header; lines starting with '#' are ignored. Malformed records
// raise ParseError naming the 1-based line number.
void read_triples_tsv(std::istream& in, GraphBuilder& builder);

KnowledgeGraph build_graph_from_tsv(std::istream& in, bool add_inverse = false);
KnowledgeGraph build_graph(std::span<const std::array<std::string, 3>> triples,
                           bool add_inverse = false);

// Canonical re-serialization in stored (id-sorted) order.
void write_triples_tsv(const KnowledgeGraph& g, std::ostream& out);

void save_graph(const KnowledgeGraph& g, std::ostream& out);
KnowledgeGraph load_graph(std::istream& in);

// Auto-detects a binary snapshot by magic, otherwise parses TSV.
KnowledgeGraph load_graph_file(const std::string& path, bool add_inverse = false);

}  // namespace kgr
