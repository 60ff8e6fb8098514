#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace fredfam {

using VertexId = int;
using Edge = std::pair<VertexId, VertexId>;

/// Finite graph model of a parameter space: vertices are sample points,
/// edges say which points are joined by a continuous path.
struct ParamSpace {
    std::vector<VertexId> vertices;
    std::vector<Edge> edges;

    /// Throws StructuralError when a vertex is negative or duplicated, an edge
    /// is a self-loop or names an undeclared vertex, or there are no vertices.
    void validate() const;

    /// Edges with endpoints ordered (min, max), sorted and deduplicated.
    std::vector<Edge> canonical_edges() const;

    bool operator==(const ParamSpace& other) const;
};

/// Quotient of the space by "lies in the same connected component".
/// Each component is named by its smallest vertex id.
struct ComponentLabeling {
    std::map<VertexId, VertexId> label;
    std::size_t count = 0;

    bool operator==(const ComponentLabeling&) const = default;
};

ComponentLabeling components(const ParamSpace& space);

/// One vertex per component, ascending. With canonical labels this is the
/// sorted list of component ids.
std::vector<VertexId> representatives(const ComponentLabeling& labeling);

} // namespace fredfam
