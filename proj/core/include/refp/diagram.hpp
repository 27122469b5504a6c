#pragma once

#include <refp/labelset.hpp>
#include <refp/problem.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace refp {

enum class ViolationKind { cycle, no_unique_inf, no_unique_sup };

auto to_string(ViolationKind k) -> std::string;

struct Violation {
    LabelId a, b;
    ViolationKind kind;
};

// A DAG over named nodes. Succ(l) is everything reachable from l, l included.
// inf/sup tables exist only after a successful validate().
class Diagram {
  public:
    Diagram() = default;
    Diagram(std::vector<std::string> names, std::vector<std::pair<LabelId, LabelId>> edges);

    auto size() const -> std::size_t { return names_.size(); }
    auto names() const -> const std::vector<std::string> & { return names_; }
    auto name(LabelId id) const -> const std::string & { return names_.at(id); }
    auto find(const std::string & name) const -> std::optional<LabelId>;

    auto succ(LabelId a) const -> const LabelSet & { return succ_[a]; }
    auto pred(LabelId a) const -> const LabelSet & { return pred_[a]; }
    // b in Succ(a)
    auto reaches(LabelId a, LabelId b) const -> bool { return succ_[a].contains(b); }

    auto validate() -> std::optional<Violation>;
    auto validated() const -> bool { return validated_; }

    auto sup(LabelId a, LabelId b) const -> LabelId { return sup_[a * names_.size() + b]; }
    auto inf(LabelId a, LabelId b) const -> LabelId { return inf_[a * names_.size() + b]; }

    // Transitive reduction, sorted by (from name, to name).
    auto reduced_edges() const -> std::vector<std::pair<LabelId, LabelId>>;
    auto reverse() const -> Diagram;

    // Keeps node names and reachability; tables are recomputed on validate().
    friend auto operator==(const Diagram & a, const Diagram & b) -> bool
    {
        return a.names_ == b.names_ && a.succ_ == b.succ_;
    }

  private:
    std::vector<std::string> names_;
    std::vector<LabelSet> succ_, pred_;
    std::vector<LabelId> sup_, inf_;
    bool validated_ = false;
};

auto parse_diagram(const std::string & text) -> Diagram;
auto serialize_diagram(const Diagram & d) -> std::string;
auto diagram_to_json(const Diagram & d) -> nlohmann::json;
auto diagram_from_json(const nlohmann::json & j) -> Diagram;

// Nodes are the problem's labels; l -> l' when l can always be replaced by l' in an edge configuration.
auto edge_diagram(const Problem & p) -> Diagram;

// Sorted by (size, members). Throws BudgetExceeded past the cap.
auto right_closed_subsets(const Diagram & d, std::size_t cap = 1u << 20) -> std::vector<LabelSet>;

// Nodes ordered by strict superset, validated.
auto subset_diagram(const std::vector<LabelSet> & sets, const std::vector<std::string> & names) -> Diagram;

struct DefaultDiagram {
    Diagram diagram;
    std::vector<LabelSet> sets;  // per diagram node, over the problem's labels
};

// Throws BudgetExceeded past max_nodes right-closed subsets.
auto default_diagram(const Problem & p, std::size_t max_nodes = 4096) -> DefaultDiagram;

}
