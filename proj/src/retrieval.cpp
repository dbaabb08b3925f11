#include "kgcraft/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "kgcraft/errors.hpp"
#include "kgcraft/names.hpp"

namespace kgcraft {

bool phrase_in_text(const std::string& node_name, const std::string& text) {
    auto name_tokens = word_tokens(node_name);
    if (name_tokens.empty()) return false;
    for (auto& t : name_tokens) t = strip_plural(t);

    auto text_tokens = word_tokens(text);
    for (auto& t : text_tokens) t = strip_plural(t);

    if (text_tokens.size() < name_tokens.size()) return false;
    for (size_t i = 0; i + name_tokens.size() <= text_tokens.size(); ++i) {
        bool match = true;
        for (size_t j = 0; j < name_tokens.size(); ++j) {
            if (text_tokens[i + j] != name_tokens[j]) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

namespace {

// Undirected adjacency over node indices. Parallel labeled edges collapse
// to one neighbor link; crossing a node pair pulls in every stored edge
// between the pair.
struct Adjacency {
    std::vector<std::string> names;
    std::map<std::string, int> index;
    std::vector<std::vector<int>> next;
    std::map<std::pair<int, int>, std::vector<const RelationEdge*>> pair_edges;

    explicit Adjacency(const CrossModalGraph& g) {
        names.reserve(g.nodes.size());
        for (const auto& n : g.nodes) {
            index[n.name] = static_cast<int>(names.size());
            names.push_back(n.name);
        }
        next.resize(names.size());
        for (const auto& e : g.edges) {
            int s = index.at(e.source);
            int t = index.at(e.target);
            auto key = std::minmax(s, t);
            auto& bucket = pair_edges[{key.first, key.second}];
            if (bucket.empty()) {
                next[s].push_back(t);
                next[t].push_back(s);
            }
            bucket.push_back(&e);
        }
        for (auto& nbrs : next) std::sort(nbrs.begin(), nbrs.end());
    }

    const std::vector<const RelationEdge*>& between(int a, int b) const {
        auto key = std::minmax(a, b);
        return pair_edges.at({key.first, key.second});
    }
};

// Nodes that can still reach `target` without touching `blocked`.
std::vector<bool> reachable_avoiding(const Adjacency& adj, int target,
                                     const std::vector<bool>& blocked) {
    std::vector<bool> seen(adj.names.size(), false);
    if (blocked[target]) return seen;
    std::vector<int> stack{target};
    seen[target] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : adj.next[v]) {
            if (!seen[u] && !blocked[u]) {
                seen[u] = true;
                stack.push_back(u);
            }
        }
    }
    return seen;
}

struct PathCollector {
    const Adjacency& adj;
    int target;
    std::vector<int> path;
    std::vector<bool> on_path;
    std::set<int> pooled_nodes;
    std::set<const RelationEdge*> pooled_edges;

    PathCollector(const Adjacency& a, int start, int goal)
        : adj(a), target(goal), on_path(a.names.size(), false) {
        path.push_back(start);
        on_path[start] = true;
    }

    void take_path() {
        for (int v : path) pooled_nodes.insert(v);
        for (size_t i = 0; i + 1 < path.size(); ++i) {
            for (const RelationEdge* e : adj.between(path[i], path[i + 1])) {
                pooled_edges.insert(e);
            }
        }
    }

    void dfs() {
        int cur = path.back();
        if (cur == target) {
            take_path();
            return;
        }
        // Skip branches from which the target became unreachable; dead
        // ends would otherwise dominate the enumeration.
        auto ok = reachable_avoiding(adj, target, on_path);
        for (int u : adj.next[cur]) {
            if (on_path[u] || !ok[u]) continue;
            on_path[u] = true;
            path.push_back(u);
            dfs();
            path.pop_back();
            on_path[u] = false;
        }
    }
};

}  // namespace

GlobalPool path_search_pool(const CrossModalGraph& graph, const TaskSpec& task) {
    std::string target = canonical_name(task.target);
    if (!graph.has_node(target)) throw GraphError("unknown task target `" + target + "`");

    GlobalPool pool;
    if (target == graph.player_node) {
        pool.nodes.insert(graph.player_node);
        return pool;
    }
    if (!graph.has_node(graph.player_node)) return pool;

    Adjacency adj(graph);
    PathCollector collector(adj, adj.index.at(graph.player_node), adj.index.at(target));
    collector.dfs();

    for (int i : collector.pooled_nodes) pool.nodes.insert(adj.names[i]);
    for (const RelationEdge* e : collector.pooled_edges) pool.edges.insert(*e);
    return pool;
}

PooledSubgraph entity_match_pool(const GlobalPool& pool, const std::string& prompt_text,
                                 const CrossModalGraph& graph, const TaskSpec& task) {
    PooledSubgraph out;
    out.provenance = PoolProvenance::psp_emp;
    std::string target = canonical_name(task.target);

    for (const auto& name : pool.nodes) {
        const EntityNode* node = graph.find(name);
        bool anchored = name == graph.player_node || name == target;
        bool attributed = node && node->attributed();
        if (anchored || attributed || phrase_in_text(name, prompt_text)) {
            out.nodes.insert(name);
        }
    }
    for (const auto& e : pool.edges) {
        if (out.nodes.count(e.source) && out.nodes.count(e.target)) out.edges.insert(e);
    }
    return out;
}

RetrieveOutcome retrieve(const CrossModalGraph& graph, const TaskSpec& task,
                         const std::string& prompt_text) {
    RetrieveOutcome outcome;
    GlobalPool pool = path_search_pool(graph, task);
    outcome.no_path = pool.nodes.empty();
    outcome.sub = entity_match_pool(pool, prompt_text, graph, task);
    return outcome;
}

double bag_of_words_similarity(const std::string& name, const std::string& text) {
    auto name_tokens = word_tokens(name);
    if (name_tokens.empty()) return 0.0;
    auto text_tokens = word_tokens(text);
    if (text_tokens.size() < name_tokens.size()) return 0.0;

    std::map<std::string, int> name_bag;
    for (const auto& t : name_tokens) ++name_bag[t];
    double name_norm = 0.0;
    for (const auto& [t, c] : name_bag) name_norm += static_cast<double>(c) * c;
    name_norm = std::sqrt(name_norm);

    // Best cosine over sliding windows of the name's token length.
    double best = 0.0;
    size_t win = name_tokens.size();
    for (size_t i = 0; i + win <= text_tokens.size(); ++i) {
        std::map<std::string, int> window_bag;
        for (size_t j = 0; j < win; ++j) ++window_bag[text_tokens[i + j]];
        double dot = 0.0, wnorm = 0.0;
        for (const auto& [t, c] : window_bag) {
            wnorm += static_cast<double>(c) * c;
            auto it = name_bag.find(t);
            if (it != name_bag.end()) dot += static_cast<double>(c) * it->second;
        }
        if (dot > 0.0) best = std::max(best, dot / (name_norm * std::sqrt(wnorm)));
    }
    return best;
}

PooledSubgraph similarity_retrieve(const CrossModalGraph& graph, const std::string& prompt_text,
                                   const SimilarityProvider& provider,
                                   const SimilarityOptions& options) {
    PooledSubgraph out;
    out.provenance = PoolProvenance::similarity;

    std::vector<std::pair<double, std::string>> scored;
    for (const auto& n : graph.nodes) {
        scored.emplace_back(provider(n.name, prompt_text), n.name);
    }
    if (options.top_k) {
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        int k = std::max(0, *options.top_k);
        for (int i = 0; i < k && i < static_cast<int>(scored.size()); ++i) {
            out.nodes.insert(scored[i].second);
        }
    } else {
        for (const auto& [score, name] : scored) {
            if (score >= options.threshold) out.nodes.insert(name);
        }
    }
    for (const auto& e : graph.edges) {
        if (out.nodes.count(e.source) && out.nodes.count(e.target)) out.edges.insert(e);
    }
    return out;
}

namespace {

std::string attribute_line(const EntityNode& node) {
    std::ostringstream os;
    if (node.env_attr) {
        const auto& a = *node.env_attr;
        os << node.name << ": env at (" << a.x_e << "," << a.y_e << ") size (" << a.w_e << ","
           << a.h_e << "), " << range_word(a.range) << " interaction range";
    } else if (node.inv_attr) {
        const auto& a = *node.inv_attr;
        os << node.name << ": inv at (" << a.x_c << "," << a.y_c << ")";
    }
    return os.str();
}

std::string expansion_lines(const std::string& name, const CrossModalGraph& graph) {
    const EntityNode* node = graph.find(name);
    std::ostringstream os;
    os << name << " [" << (node ? kind_word(node->kind) : "unknown") << "]";
    std::vector<std::string> rels;
    for (const RelationEdge* e : graph.incident_edges(name)) {
        if (e->source == name) {
            rels.push_back("it " + e->relation + " " + e->target);
        } else {
            rels.push_back(e->source + " " + e->relation + " it");
        }
    }
    std::sort(rels.begin(), rels.end());
    for (const auto& r : rels) os << "\n  background: " << r;
    return os.str();
}

}  // namespace

std::string textualize(const PooledSubgraph& sub, const CrossModalGraph& graph,
                       bool full_attributes) {
    std::vector<std::string> edge_lines;
    for (const auto& e : sub.edges) {
        edge_lines.push_back(e.source + " --" + e.relation + "--> " + e.target);
    }
    std::sort(edge_lines.begin(), edge_lines.end());

    std::vector<std::string> attr_lines;
    for (const auto& name : sub.nodes) {
        const EntityNode* node = graph.find(name);
        if (node && node->attributed()) attr_lines.push_back(attribute_line(*node));
    }
    std::sort(attr_lines.begin(), attr_lines.end());

    std::ostringstream os;
    for (const auto& l : edge_lines) os << l << "\n";
    for (const auto& l : attr_lines) os << l << "\n";
    if (full_attributes) {
        // Per-node expansion; appended so the names-only text stays a
        // subsequence of the full text.
        for (const auto& name : sub.nodes) os << expansion_lines(name, graph) << "\n";
    }
    return os.str();
}

RetrievalMetrics fpr_fnr(const std::set<std::string>& retrieved,
                         const std::set<std::string>& oracle) {
    RetrievalMetrics m;
    if (!retrieved.empty()) {
        size_t redundant = 0;
        for (const auto& r : retrieved) {
            if (!oracle.count(r)) ++redundant;
        }
        m.fpr = static_cast<double>(redundant) / static_cast<double>(retrieved.size());
    }
    if (!oracle.empty()) {
        size_t missed = 0;
        for (const auto& o : oracle) {
            if (!retrieved.count(o)) ++missed;
        }
        m.fnr = static_cast<double>(missed) / static_cast<double>(oracle.size());
    }
    return m;
}

bool player_target_connected(const PooledSubgraph& sub, const std::string& player,
                             const std::string& target) {
    if (!sub.nodes.count(player) || !sub.nodes.count(target)) return false;
    if (player == target) return true;
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& e : sub.edges) {
        adj[e.source].push_back(e.target);
        adj[e.target].push_back(e.source);
    }
    std::set<std::string> seen{player};
    std::vector<std::string> stack{player};
    while (!stack.empty()) {
        std::string v = stack.back();
        stack.pop_back();
        if (v == target) return true;
        for (const auto& u : adj[v]) {
            if (seen.insert(u).second) stack.push_back(u);
        }
    }
    return false;
}

}  // namespace kgcraft
