#include "kgcraft/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "kgcraft/errors.hpp"
#include "kgcraft/names.hpp"

namespace kgcraft {

const char* kind_word(EntityKind k) {
    switch (k) {
        case EntityKind::environmental: return "environmental";
        case EntityKind::conditional: return "conditional";
        case EntityKind::abstract_entity: return "abstract";
    }
    return "environmental";
}

std::optional<EntityKind> kind_from_word(std::string_view w) {
    if (w == "environmental") return EntityKind::environmental;
    if (w == "conditional") return EntityKind::conditional;
    if (w == "abstract") return EntityKind::abstract_entity;
    return std::nullopt;
}

bool is_known_relation(std::string_view relation) {
    return std::find(kRelationCategories.begin(), kRelationCategories.end(), relation) !=
           kRelationCategories.end();
}

const EntityNode* CrossModalGraph::find(std::string_view name) const {
    for (const auto& n : nodes) {
        if (n.name == name) return &n;
    }
    return nullptr;
}

EntityNode* CrossModalGraph::find(std::string_view name) {
    for (auto& n : nodes) {
        if (n.name == name) return &n;
    }
    return nullptr;
}

bool CrossModalGraph::has_node(std::string_view name) const { return find(name) != nullptr; }

std::vector<const RelationEdge*> CrossModalGraph::incident_edges(std::string_view name) const {
    std::vector<const RelationEdge*> out;
    for (const auto& e : edges) {
        if (e.source == name || e.target == name) out.push_back(&e);
    }
    return out;
}

size_t CrossModalGraph::attributed_count() const {
    size_t n = 0;
    for (const auto& node : nodes) {
        if (node.attributed()) ++n;
    }
    return n;
}

namespace {

// Splits a graph-document line into whitespace tokens, keeping one
// double-quoted token intact (the relation phrase).
std::vector<std::string> split_doc_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
            continue;
        }
        if (!quoted && std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
            continue;
        }
        cur.push_back(c);
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

CrossModalGraph load_graph(const std::string& document) {
    CrossModalGraph g;
    std::set<std::string> seen;
    struct PendingEdge {
        RelationEdge edge;
        int line_no;
    };
    std::vector<PendingEdge> pending;

    std::istringstream in(document);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto tokens = split_doc_line(line);
        if (tokens.empty()) continue;

        if (tokens[0] == "node") {
            if (tokens.size() != 3) {
                throw GraphError("line " + std::to_string(line_no) + ": expected `node <name> <kind>`");
            }
            EntityNode node;
            node.name = canonical_name(tokens[1]);
            auto kind = kind_from_word(tokens[2]);
            if (!kind) {
                throw GraphError("line " + std::to_string(line_no) + ": unknown kind `" + tokens[2] + "`");
            }
            node.kind = *kind;
            if (!seen.insert(node.name).second) {
                throw GraphError("line " + std::to_string(line_no) + ": duplicate node name `" +
                                 node.name + "`");
            }
            g.nodes.push_back(std::move(node));
        } else if (tokens[0] == "edge") {
            if (tokens.size() != 4) {
                throw GraphError("line " + std::to_string(line_no) +
                                 ": expected `edge <source> \"<relation>\" <target>`");
            }
            RelationEdge e;
            e.source = canonical_name(tokens[1]);
            e.relation = tokens[2];
            e.target = canonical_name(tokens[3]);
            if (!is_known_relation(e.relation)) {
                throw GraphError("line " + std::to_string(line_no) + ": unknown relation category `" +
                                 e.relation + "`");
            }
            if (e.source == e.target) {
                throw GraphError("line " + std::to_string(line_no) + ": self-loop on `" + e.source + "`");
            }
            pending.push_back({std::move(e), line_no});
        } else {
            throw GraphError("line " + std::to_string(line_no) + ": unknown directive `" + tokens[0] + "`");
        }
    }

    for (auto& p : pending) {
        if (!seen.count(p.edge.source)) {
            throw GraphError("line " + std::to_string(p.line_no) + ": dangling edge endpoint `" +
                             p.edge.source + "`");
        }
        if (!seen.count(p.edge.target)) {
            throw GraphError("line " + std::to_string(p.line_no) + ": dangling edge endpoint `" +
                             p.edge.target + "`");
        }
        g.edges.push_back(std::move(p.edge));
    }
    if (!seen.count("player")) {
        throw GraphError("graph has no `player` node");
    }

    std::sort(g.nodes.begin(), g.nodes.end(),
              [](const EntityNode& a, const EntityNode& b) { return a.name < b.name; });
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

CrossModalGraph load_graph_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open graph file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return load_graph(ss.str());
}

std::string serialize_graph(const CrossModalGraph& graph) {
    std::vector<std::string> node_lines;
    node_lines.reserve(graph.nodes.size());
    for (const auto& n : graph.nodes) {
        node_lines.push_back("node " + name_token(n.name) + " " + kind_word(n.kind));
    }
    std::vector<std::string> edge_lines;
    edge_lines.reserve(graph.edges.size());
    for (const auto& e : graph.edges) {
        edge_lines.push_back("edge " + name_token(e.source) + " \"" + e.relation + "\" " +
                             name_token(e.target));
    }
    std::sort(node_lines.begin(), node_lines.end());
    std::sort(edge_lines.begin(), edge_lines.end());

    std::string out;
    for (const auto& l : node_lines) out += l + "\n";
    for (const auto& l : edge_lines) out += l + "\n";
    return out;
}

ValidationReport validate(const CrossModalGraph& graph) {
    ValidationReport report;
    auto add = [&](std::string code, std::string detail) {
        report.findings.push_back({std::move(code), std::move(detail)});
    };

    std::set<std::string> names;
    for (const auto& n : graph.nodes) {
        if (!names.insert(n.name).second) add("duplicate node", n.name);
        if (n.name != canonical_name(n.name)) add("non-canonical name", n.name);
        if (n.env_attr && n.inv_attr) add("dual attributes", n.name);
        if (n.kind == EntityKind::abstract_entity && n.attributed())
            add("attributed abstract node", n.name);
    }
    if (!names.count(graph.player_node)) add("no player node", graph.player_node);

    std::set<RelationEdge> seen_edges;
    for (const auto& e : graph.edges) {
        if (!names.count(e.source)) add("dangling endpoint", e.source + " (edge to " + e.target + ")");
        if (!names.count(e.target)) add("dangling endpoint", e.target + " (edge from " + e.source + ")");
        if (!is_known_relation(e.relation)) add("unknown relation", e.relation);
        if (e.source == e.target) add("self-loop", e.source);
        if (!seen_edges.insert(e).second)
            add("parallel edge", e.source + " --" + e.relation + "--> " + e.target);
    }
    return report;
}

EmbedStats embed_visual_attributes(CrossModalGraph& graph, const ObservationFrame& frame) {
    clear_visual_attributes(graph);
    EmbedStats stats;

    for (const auto& entry : frame.env) {
        EntityNode* node = graph.find(entry.label);
        if (!node || node->kind == EntityKind::abstract_entity) {
            ++stats.skipped;
            continue;
        }
        node->env_attr = entry.info;
        ++stats.embedded_env;
    }
    for (const auto& entry : frame.inv) {
        EntityNode* node = graph.find(entry.label);
        if (!node || node->kind == EntityKind::abstract_entity) {
            ++stats.skipped;
            continue;
        }
        if (node->env_attr) {  // one attribute per node and timestep
            ++stats.skipped;
            continue;
        }
        node->inv_attr = entry.info;
        ++stats.embedded_inv;
    }
    stats.skipped += static_cast<int>(frame.skipped.size());
    graph.timestep_tag = frame.timestep;
    return stats;
}

void clear_visual_attributes(CrossModalGraph& graph) {
    for (auto& n : graph.nodes) {
        n.env_attr.reset();
        n.inv_attr.reset();
    }
}

}  // namespace kgcraft
