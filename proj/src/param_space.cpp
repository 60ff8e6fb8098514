#include "fredfam/param_space.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "fredfam/errors.hpp"

namespace fredfam {

namespace {

// Disjoint sets over dense indices. The root of every set is its smallest
// member, which makes labels canonical regardless of union order.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        std::size_t root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) {
            std::size_t next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    void join(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b)
            parent_[b] = a;
        else
            parent_[a] = b;
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace

void ParamSpace::validate() const {
    if (vertices.empty()) throw StructuralError("parameter space has no vertices");
    std::set<VertexId> seen;
    for (VertexId v : vertices) {
        if (v < 0) throw StructuralError("negative vertex id " + std::to_string(v));
        if (!seen.insert(v).second)
            throw StructuralError("duplicate vertex id " + std::to_string(v));
    }
    for (const auto& [a, b] : edges) {
        if (!seen.count(a) || !seen.count(b))
            throw StructuralError("edge [" + std::to_string(a) + "," + std::to_string(b) +
                                  "] names an undeclared vertex");
        if (a == b) throw StructuralError("self-loop at vertex " + std::to_string(a));
    }
}

std::vector<Edge> ParamSpace::canonical_edges() const {
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (auto [a, b] : edges) out.emplace_back(std::min(a, b), std::max(a, b));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool ParamSpace::operator==(const ParamSpace& other) const {
    auto va = vertices, vb = other.vertices;
    std::sort(va.begin(), va.end());
    std::sort(vb.begin(), vb.end());
    return va == vb && canonical_edges() == other.canonical_edges();
}

ComponentLabeling components(const ParamSpace& space) {
    space.validate();

    std::vector<VertexId> sorted = space.vertices;
    std::sort(sorted.begin(), sorted.end());
    std::map<VertexId, std::size_t> dense;
    for (std::size_t i = 0; i < sorted.size(); ++i) dense[sorted[i]] = i;

    DisjointSets sets(sorted.size());
    for (const auto& [a, b] : space.edges) sets.join(dense.at(a), dense.at(b));

    ComponentLabeling out;
    std::set<VertexId> ids;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        VertexId id = sorted[sets.find(i)];
        out.label[sorted[i]] = id;
        ids.insert(id);
    }
    out.count = ids.size();
    return out;
}

std::vector<VertexId> representatives(const ComponentLabeling& labeling) {
    std::set<VertexId> ids;
    for (const auto& [v, id] : labeling.label) ids.insert(id);
    return {ids.begin(), ids.end()};
}

} // namespace fredfam
