#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgcraft/graph.hpp"

namespace kgcraft {

struct TaskSpec {
    std::string id;
    std::string target;              // graph node name
    std::string description;         // prose focus statement
    std::vector<std::string> cot_questions;
    std::vector<std::string> goal_milestones;  // milestone keys the episode must reach
};

// Union of nodes/edges over all simple player-to-target paths.
struct GlobalPool {
    std::set<std::string> nodes;
    std::set<RelationEdge> edges;
};

enum class PoolProvenance { psp_emp, similarity };

struct PooledSubgraph {
    std::set<std::string> nodes;
    std::set<RelationEdge> edges;
    PoolProvenance provenance = PoolProvenance::psp_emp;
};

struct RetrieveOutcome {
    PooledSubgraph sub;
    bool no_path = false;  // target unreachable from player
};

struct RetrievalMetrics {
    double fpr = 0.0;
    double fnr = 0.0;
};

// True when the node name occurs in the text as a whole-token phrase
// (case-folded, underscore/space-insensitive, naive plural 's' stripped).
bool phrase_in_text(const std::string& node_name, const std::string& text);

// PSP: edges are traversable in both directions during the search; emitted
// edges keep their stored direction and label. target == player yields
// ({player}, {}); an unreachable target yields empty sets. Throws
// GraphError on an unknown target.
GlobalPool path_search_pool(const CrossModalGraph& graph, const TaskSpec& task);

// EMP: keeps a node iff its name occurs in prompt_text, it carries a
// visual attribute, or it is the player/target anchor; keeps edges whose
// endpoints both survive.
PooledSubgraph entity_match_pool(const GlobalPool& pool, const std::string& prompt_text,
                                 const CrossModalGraph& graph, const TaskSpec& task);

// Fixed PSP -> EMP order.
RetrieveOutcome retrieve(const CrossModalGraph& graph, const TaskSpec& task,
                         const std::string& prompt_text);

// Similarity scoring hook; the default is a deterministic bag-of-words
// cosine taken over sliding prompt windows of the name's token length.
using SimilarityProvider = std::function<double(const std::string& name, const std::string& text)>;

double bag_of_words_similarity(const std::string& name, const std::string& text);

struct SimilarityOptions {
    double threshold = 0.5;
    std::optional<int> top_k;  // when set, keep the k best-scoring nodes instead
};

PooledSubgraph similarity_retrieve(const CrossModalGraph& graph, const std::string& prompt_text,
                                   const SimilarityProvider& provider = bag_of_words_similarity,
                                   const SimilarityOptions& options = {});

// One line per edge `<source> --<relation>--> <target>` (lexicographic),
// then one line per attributed node with coordinates and range word.
// `full_attributes` additionally expands every node with its kind and
// incident dependencies; the names-only text is a subsequence of it.
std::string textualize(const PooledSubgraph& sub, const CrossModalGraph& graph,
                       bool full_attributes = false);

RetrievalMetrics fpr_fnr(const std::set<std::string>& retrieved,
                         const std::set<std::string>& oracle);

// True when player and target are both present and joined by some path of
// retained edges (ignoring direction).
bool player_target_connected(const PooledSubgraph& sub, const std::string& player,
                             const std::string& target);

}  // namespace kgcraft
