#include "kgr/graph.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "kgr/errors.hpp"

namespace kgr {

namespace {

constexpr char kSnapshotMagic[4] = {'K', 'G', 'R', '1'};
constexpr std::uint32_t kSnapshotVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw ParseError("graph snapshot: unexpected end of file");
    return v;
}

void write_string(std::ostream& out, const std::string& s) {
    write_pod(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
    auto len = read_pod<std::uint32_t>(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    if (!in) throw ParseError("graph snapshot: unexpected end of file");
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Vocabulary

EntityId Vocabulary::intern_entity(std::string_view name) {
    auto it = entity_ids_.find(std::string(name));
    if (it != entity_ids_.end()) return it->second;
    auto id = static_cast<EntityId>(entity_names_.size());
    entity_names_.emplace_back(name);
    entity_ids_.emplace(entity_names_.back(), id);
    return id;
}

RelationId Vocabulary::intern_relation(std::string_view name) {
    auto it = relation_ids_.find(std::string(name));
    if (it != relation_ids_.end()) return it->second;
    auto id = static_cast<RelationId>(relation_names_.size());
    relation_names_.emplace_back(name);
    relation_ids_.emplace(relation_names_.back(), id);
    return id;
}

std::optional<EntityId> Vocabulary::entity_id(std::string_view name) const {
    auto it = entity_ids_.find(std::string(name));
    if (it == entity_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<RelationId> Vocabulary::relation_id(std::string_view name) const {
    auto it = relation_ids_.find(std::string(name));
    if (it == relation_ids_.end()) return std::nullopt;
    return it->second;
}

const std::string& Vocabulary::entity_name(EntityId id) const {
    if (id >= entity_names_.size())
        throw LookupError("entity id " + std::to_string(id) + " out of range");
    return entity_names_[id];
}

const std::string& Vocabulary::relation_name(RelationId id) const {
    if (id >= relation_names_.size())
        throw LookupError("relation id " + std::to_string(id) + " out of range");
    return relation_names_[id];
}

// ---------------------------------------------------------------------------
// KnowledgeGraph

GraphStats KnowledgeGraph::stats() const {
    return {vocab_.entity_count(), vocab_.relation_count(), subjects_.size()};
}

void KnowledgeGraph::check_entity(EntityId e) const {
    if (e >= vocab_.entity_count())
        throw LookupError("entity id " + std::to_string(e) + " out of range");
}

void KnowledgeGraph::check_relation(RelationId r) const {
    if (r >= vocab_.relation_count())
        throw LookupError("relation id " + std::to_string(r) + " out of range");
}

std::span<const EntityId> KnowledgeGraph::neighbors(EntityId e, RelationId r) const {
    check_entity(e);
    check_relation(r);
    auto lo = subject_offsets_[e];
    auto hi = subject_offsets_[e + 1];
    auto first = relations_.begin() + static_cast<std::ptrdiff_t>(lo);
    auto last = relations_.begin() + static_cast<std::ptrdiff_t>(hi);
    auto [rb, re] = std::equal_range(first, last, r);
    auto begin = static_cast<std::size_t>(rb - relations_.begin());
    auto count = static_cast<std::size_t>(re - rb);
    return {objects_.data() + begin, count};
}

KnowledgeGraph::OutEdges KnowledgeGraph::out_edges(EntityId e) const {
    check_entity(e);
    auto lo = static_cast<std::size_t>(subject_offsets_[e]);
    auto hi = static_cast<std::size_t>(subject_offsets_[e + 1]);
    return {{relations_.data() + lo, hi - lo}, {objects_.data() + lo, hi - lo}};
}

std::uint64_t KnowledgeGraph::relation_triple_count(RelationId r) const {
    check_relation(r);
    return relation_counts_[r];
}

void KnowledgeGraph::index() {
    const std::size_t n = subjects_.size();
    subject_offsets_.assign(vocab_.entity_count() + 1, 0);
    for (std::size_t i = 0; i < n; ++i) subject_offsets_[subjects_[i] + 1]++;
    for (std::size_t i = 1; i < subject_offsets_.size(); ++i)
        subject_offsets_[i] += subject_offsets_[i - 1];

    relation_counts_.assign(vocab_.relation_count(), 0);
    for (std::size_t i = 0; i < n; ++i) relation_counts_[relations_[i]]++;
}

// ---------------------------------------------------------------------------
// GraphBuilder

void GraphBuilder::add(std::string_view subject, std::string_view relation,
                       std::string_view object) {
    Triple t;
    t.subject = vocab_.intern_entity(subject);
    t.relation = vocab_.intern_relation(relation);
    t.object = vocab_.intern_entity(object);
    staged_.push_back(t);
    if (add_inverse_) {
        std::string inv(relation);
        inv += "_inv";
        staged_.push_back({t.object, vocab_.intern_relation(inv), t.subject});
    }
}

KnowledgeGraph GraphBuilder::finish() {
    std::sort(staged_.begin(), staged_.end());
    staged_.erase(std::unique(staged_.begin(), staged_.end()), staged_.end());

    KnowledgeGraph g;
    g.vocab_ = std::move(vocab_);
    g.subjects_.reserve(staged_.size());
    g.relations_.reserve(staged_.size());
    g.objects_.reserve(staged_.size());
    for (const Triple& t : staged_) {
        g.subjects_.push_back(t.subject);
        g.relations_.push_back(t.relation);
        g.objects_.push_back(t.object);
    }
    staged_.clear();
    staged_.shrink_to_fit();
    g.index();
    return g;
}

// ---------------------------------------------------------------------------
// Text and binary I/O

void read_triples_tsv(std::istream& in, GraphBuilder& builder) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line.front() == '#') continue;

        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        auto t3 = t2 == std::string::npos ? std::string::npos : line.find('\t', t2 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos || t3 != std::string::npos) {
            throw ParseError("triple file line " + std::to_string(line_no) +
                             ": expected 3 tab-separated fields");
        }
        std::string_view s = std::string_view(line).substr(0, t1);
        std::string_view r = std::string_view(line).substr(t1 + 1, t2 - t1 - 1);
        std::string_view o = std::string_view(line).substr(t2 + 1);
        if (s.empty() || r.empty() || o.empty()) {
            throw ParseError("triple file line " + std::to_string(line_no) +
                             ": empty field");
        }
        builder.add(s, r, o);
    }
}

KnowledgeGraph build_graph_from_tsv(std::istream& in, bool add_inverse) {
    GraphBuilder builder(add_inverse);
    read_triples_tsv(in, builder);
    return builder.finish();
}

KnowledgeGraph build_graph(std::span<const std::array<std::string, 3>> triples,
                           bool add_inverse) {
    GraphBuilder builder(add_inverse);
    for (const auto& t : triples) builder.add(t[0], t[1], t[2]);
    return builder.finish();
}

void write_triples_tsv(const KnowledgeGraph& g, std::ostream& out) {
    const auto& v = g.vocab();
    for (std::size_t i = 0; i < g.triple_count(); ++i) {
        Triple t = g.triple(i);
        out << v.entity_name(t.subject) << '\t' << v.relation_name(t.relation)
            << '\t' << v.entity_name(t.object) << '\n';
    }
}

void save_graph(const KnowledgeGraph& g, std::ostream& out) {
    out.write(kSnapshotMagic, sizeof(kSnapshotMagic));
    write_pod(out, kSnapshotVersion);

    const auto& v = g.vocab();
    write_pod(out, static_cast<std::uint64_t>(v.entity_count()));
    for (std::size_t i = 0; i < v.entity_count(); ++i)
        write_string(out, v.entity_name(static_cast<EntityId>(i)));
    write_pod(out, static_cast<std::uint64_t>(v.relation_count()));
    for (std::size_t i = 0; i < v.relation_count(); ++i)
        write_string(out, v.relation_name(static_cast<RelationId>(i)));

    write_pod(out, static_cast<std::uint64_t>(g.triple_count()));
    for (std::size_t i = 0; i < g.triple_count(); ++i) {
        Triple t = g.triple(i);
        write_pod(out, t.subject);
        write_pod(out, t.relation);
        write_pod(out, t.object);
    }
}

KnowledgeGraph load_graph(std::istream& in) {
    char magic[4];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0)
        throw ParseError("graph snapshot: bad magic");
    auto version = read_pod<std::uint32_t>(in);
    if (version != kSnapshotVersion)
        throw ParseError("graph snapshot: unsupported version " + std::to_string(version));

    KnowledgeGraph g;
    auto n_entities = read_pod<std::uint64_t>(in);
    for (std::uint64_t i = 0; i < n_entities; ++i)
        g.vocab_.intern_entity(read_string(in));
    auto n_relations = read_pod<std::uint64_t>(in);
    for (std::uint64_t i = 0; i < n_relations; ++i)
        g.vocab_.intern_relation(read_string(in));

    auto n_triples = read_pod<std::uint64_t>(in);
    g.subjects_.reserve(n_triples);
    g.relations_.reserve(n_triples);
    g.objects_.reserve(n_triples);
    for (std::uint64_t i = 0; i < n_triples; ++i) {
        auto s = read_pod<EntityId>(in);
        auto r = read_pod<RelationId>(in);
        auto o = read_pod<EntityId>(in);
        if (s >= n_entities || o >= n_entities || r >= n_relations)
            throw ParseError("graph snapshot: triple id out of range");
        g.subjects_.push_back(s);
        g.relations_.push_back(r);
        g.objects_.push_back(o);
    }
    for (std::size_t i = 1; i < g.subjects_.size(); ++i) {
        Triple prev = g.triple(i - 1);
        Triple cur = g.triple(i);
        if (!(prev < cur)) throw ParseError("graph snapshot: triples not sorted");
    }
    g.index();
    return g;
}

KnowledgeGraph load_graph_file(const std::string& path, bool add_inverse) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open graph file: " + path);
    char magic[4] = {};
    in.read(magic, sizeof(magic));
    in.clear();
    in.seekg(0);
    if (std::memcmp(magic, kSnapshotMagic, sizeof(magic)) == 0) {
        return load_graph(in);
    }
    return build_graph_from_tsv(in, add_inverse);
}

}  // namespace kgr
