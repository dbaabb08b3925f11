#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgcraft/perception.hpp"

namespace kgcraft {

enum class EntityKind { environmental, conditional, abstract_entity };

const char* kind_word(EntityKind k);
std::optional<EntityKind> kind_from_word(std::string_view w);

// The closed set of relation categories an edge may carry.
inline constexpr std::array<std::string_view, 9> kRelationCategories = {
    "can use",          "can mine",        "is used to craft",
    "is used to produce", "can be put in/on", "is the fuel of",
    "includes",         "can be used to mine", "outputs",
};

bool is_known_relation(std::string_view relation);

struct EntityNode {
    std::string name;  // canonical lowercase, unique per graph
    EntityKind kind = EntityKind::environmental;
    std::optional<EnvEntityInfo> env_attr;
    std::optional<InvEntityInfo> inv_attr;

    bool attributed() const { return env_attr.has_value() || inv_attr.has_value(); }
};

struct RelationEdge {
    std::string source;
    std::string relation;
    std::string target;

    friend bool operator==(const RelationEdge&, const RelationEdge&) = default;
    friend auto operator<=>(const RelationEdge&, const RelationEdge&) = default;
};

// Text-modal dependency graph whose nodes carry per-timestep visual
// attributes once detections are embedded.
struct CrossModalGraph {
    std::vector<EntityNode> nodes;  // sorted by name
    std::vector<RelationEdge> edges;
    std::string player_node = "player";
    int64_t timestep_tag = -1;  // timestep of the last attribute embedding

    const EntityNode* find(std::string_view name) const;
    EntityNode* find(std::string_view name);
    bool has_node(std::string_view name) const;
    std::vector<const RelationEdge*> incident_edges(std::string_view name) const;
    size_t attributed_count() const;
};

struct ValidationFinding {
    std::string code;  // e.g. "dangling endpoint", "no player node"
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationFinding> findings;
    bool ok() const { return findings.empty(); }
};

// Parses a graph-definition document:
//   node <name> <kind>
//   edge <source> "<relation>" <target>
// '#' comments, order-insensitive. Names are canonicalized. Throws
// GraphError on duplicate names, unknown kinds/relations, dangling edge
// endpoints, or a missing "player" node.
CrossModalGraph load_graph(const std::string& document);
CrossModalGraph load_graph_file(const std::string& path);

// Emits the document form: nodes then edges, each lexicographically sorted.
std::string serialize_graph(const CrossModalGraph& graph);

// Checks every type invariant; findings are data, never throws.
ValidationReport validate(const CrossModalGraph& graph);

struct EmbedStats {
    int embedded_env = 0;
    int embedded_inv = 0;
    int skipped = 0;  // detections with no matching node (or abstract target)
};

// Clears all prior attributes, then sets env_attr/inv_attr from the frame.
// Topology is untouched; timestep_tag picks up frame.timestep.
EmbedStats embed_visual_attributes(CrossModalGraph& graph, const ObservationFrame& frame);

void clear_visual_attributes(CrossModalGraph& graph);

}  // namespace kgcraft
