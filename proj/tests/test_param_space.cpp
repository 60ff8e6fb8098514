#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fredfam/errors.hpp"
#include "fredfam/param_space.hpp"
#include "support.hpp"

using namespace fredfam;

TEST_CASE("isolated vertices are their own components") {
    const auto c = components({{0, 1}, {}});
    CHECK(c.count == 2);
    CHECK(c.label == std::map<VertexId, VertexId>{{0, 0}, {1, 1}});
    CHECK(representatives(c) == std::vector<VertexId>{0, 1});
}

TEST_CASE("a path is one component") {
    const auto c = components({{0, 1, 2}, {{0, 1}, {1, 2}}});
    CHECK(c.count == 1);
    CHECK(c.label == std::map<VertexId, VertexId>{{0, 0}, {1, 0}, {2, 0}});
    CHECK(representatives(c) == std::vector<VertexId>{0});
}

TEST_CASE("two disjoint 4-cycles") {
    ParamSpace s = testsupport::cycle4(0);
    const ParamSpace t = testsupport::cycle4(4);
    s.vertices.insert(s.vertices.end(), t.vertices.begin(), t.vertices.end());
    s.edges.insert(s.edges.end(), t.edges.begin(), t.edges.end());
    const auto c = components(s);
    CHECK(c.count == 2);
    CHECK(c.label.at(3) == 0);
    CHECK(c.label.at(6) == 4);
    CHECK(representatives(c) == std::vector<VertexId>{0, 4});
}

TEST_CASE("labels do not depend on vertex or edge order") {
    const auto a = components({{5, 2, 9, 7}, {{9, 5}, {7, 2}}});
    const auto b = components({{2, 5, 7, 9}, {{2, 7}, {5, 9}}});
    CHECK(a == b);
    CHECK(a.label.at(9) == 5);
    CHECK(a.label.at(7) == 2);
}

TEST_CASE("malformed spaces") {
    CHECK_THROWS_AS(components({{0}, {{0, 1}}}), StructuralError);
    CHECK_THROWS_AS(components({{0, 0}, {}}), StructuralError);
    CHECK_THROWS_AS(components({{0, 1}, {{1, 1}}}), StructuralError);
    CHECK_THROWS_AS(components({{}, {}}), StructuralError);
    CHECK_THROWS_AS(components({{-1}, {}}), StructuralError);
}

TEST_CASE("canonical edges and order-insensitive equality") {
    const ParamSpace s{{0, 1, 2}, {{1, 0}, {0, 1}, {2, 1}}};
    CHECK(s.canonical_edges() == std::vector<Edge>{{0, 1}, {1, 2}});
    CHECK(s == ParamSpace{{2, 1, 0}, {{1, 2}, {0, 1}}});
    CHECK_FALSE(s == ParamSpace{{0, 1, 2}, {{0, 1}}});
}

TEST_CASE("property: random graphs agree with BFS, counts, idempotence, monotone under edge insertion") {
    testsupport::Rng rng(20241016);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = testsupport::uniform_int(rng, 1, 30);
        ParamSpace s;
        for (int v = 0; v < n; ++v) s.vertices.push_back(3 * v + 1);
        std::shuffle(s.vertices.begin(), s.vertices.end(), rng);
        const int m = testsupport::uniform_int(rng, 0, n);
        for (int e = 0; e < m && n > 1; ++e) {
            const int a = testsupport::uniform_int(rng, 0, n - 1);
            int b = testsupport::uniform_int(rng, 0, n - 2);
            if (b >= a) ++b;
            s.edges.emplace_back(3 * a + 1, 3 * b + 1);
        }
        const auto c = components(s);
        CHECK(c.label == testsupport::components_bfs(s));
        CHECK(components(s) == c);

        std::set<VertexId> distinct;
        std::map<VertexId, std::size_t> sizes;
        for (auto [v, l] : c.label) {
            distinct.insert(l);
            ++sizes[l];
        }
        CHECK(c.count == distinct.size());
        std::size_t total = 0;
        for (auto [l, k] : sizes) total += k;
        CHECK(total == s.vertices.size());
        CHECK(representatives(c) == std::vector<VertexId>(distinct.begin(), distinct.end()));

        if (n > 1) {
            ParamSpace more = s;
            more.edges.emplace_back(s.vertices[0], s.vertices[1]);
            CHECK(components(more).count <= c.count);
        }
    }
}
