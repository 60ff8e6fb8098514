#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fredfam/errors.hpp"
#include "fredfam/weyl.hpp"
#include "support.hpp"

using namespace fredfam;
using namespace testsupport;

namespace {

OperatorFamily one(const OperatorSpec& s) { return OperatorFamily::constant(s); }

const ComplexGrid kGrid{-2.0, 2.0, -2.0, 2.0, 0.05};
const ComplexGrid kCoarse{-2.0, 2.0, -2.0, 2.0, 0.1};

GridSet singleton(const ComplexGrid& g, Complex z) {
    GridSet s(g);
    s.insert(static_cast<int>(std::lround((z.real() - g.re_min) / g.h)),
             static_cast<int>(std::lround((z.imag() - g.im_min) / g.h)));
    return s;
}

// Grid points of the closed disk; differences must hug the circle.
std::size_t stray_from_disk(const GridSet& s, double radius) {
    const ComplexGrid& g = s.grid();
    std::size_t stray = 0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const double r = std::abs(g.point(i, j));
            if ((r <= radius) != s.contains(i, j) && std::abs(r - radius) > g.h) ++stray;
        }
    return stray;
}

} // namespace

TEST_CASE("grid validation") {
    CHECK(kGrid.nx() == 81);
    CHECK_THROWS_AS((ComplexGrid{1.0, 0.0, 0.0, 1.0, 0.1}).validate(), PreconditionError);
    CHECK_THROWS_AS((ComplexGrid{0.0, 1.0, 0.0, 1.0, 0.0}).validate(), PreconditionError);
    CHECK_THROWS_AS((ComplexGrid{0.0, 1.0, 0.0, 1.0, 1e-5}).validate(), PreconditionError);
}

TEST_CASE("weyl_spectrum_point examples") {
    const GridSet disk = weyl_spectrum_point(shift(), kGrid);
    CHECK(stray_from_disk(disk, 1.0) == 0);
    for (auto [i, j] : disk.members()) CHECK(std::abs(kGrid.point(i, j)) < 1.0 + kGrid.h);

    CHECK(weyl_spectrum_point(diagonal({5.0}, {0.0}), kGrid) == singleton(kGrid, 0.0));
    CHECK(weyl_spectrum_point(toeplitz({{0, 1.0}}), kGrid) == singleton(kGrid, 1.0));
}

TEST_CASE("weyl_spectrum_family examples and the direct route") {
    const GridSet disk = weyl_spectrum_family(one(shift()), kCoarse);
    CHECK(disk == weyl_spectrum_family_direct(one(shift()), kCoarse));
    CHECK(stray_from_disk(disk, 1.0) == 0);

    const ComplexGrid wide{-2.5, 2.5, -2.5, 2.5, 0.1};
    const auto two = OperatorFamily({{0, 1}, {}}, {{0, shift()}, {1, toeplitz({{1, 2.0}})}});
    const GridSet big = weyl_spectrum_family(two, wide);
    CHECK(big == weyl_spectrum_family_direct(two, wide));
    CHECK(stray_from_disk(big, 2.0) == 0);

    const auto ids = OperatorFamily({{0, 1}, {{0, 1}}}, {{0, toeplitz({{0, 1.0}})}, {1, toeplitz({{0, 1.0}})}});
    CHECK(weyl_spectrum_family(ids, kCoarse) == singleton(kCoarse, 1.0));
}

TEST_CASE("essential spectra") {
    const GridSet ring = essential_spectrum_family(one(shift()), kGrid);
    for (auto [i, j] : ring.members()) CHECK(std::abs(std::abs(kGrid.point(i, j)) - 1.0) < kGrid.h);
    CHECK(ring.size() > 100);
    GridSet pair = singleton(kGrid, 0.0);
    pair.unite(singleton(kGrid, 1.0));
    CHECK(essential_spectrum_family(one(diagonal({}, {0.0, 1.0})), kGrid) == pair);
}

TEST_CASE("property: corpus families - pointwise union, direct route, essential inclusion, closedness") {
    for (const auto& entry : corpus()) {
        CAPTURE(entry.name);
        const GridSet w = weyl_spectrum_family(entry.family, kCoarse);
        GridSet u(kCoarse);
        for (const auto& p : sample_family(entry.family).points) u.unite(weyl_spectrum_point(p.spec, kCoarse));
        CHECK(w == u);
        CHECK(w == weyl_spectrum_family_direct(entry.family, kCoarse));
        CHECK(essential_spectrum_family(entry.family, kCoarse).subset_of(w));

        // Non-members far from the essential spectrum have non-member neighbours.
        FamilyProbe probe(sample_family(entry.family), {});
        for (int j = 1; j + 1 < kCoarse.ny(); ++j)
            for (int i = 1; i + 1 < kCoarse.nx(); ++i) {
                if (w.contains(i, j) || probe.min_gap(kCoarse.point(i, j)) <= 2 * kCoarse.h) continue;
                CHECK_FALSE(w.contains(i + 1, j));
                CHECK_FALSE(w.contains(i - 1, j));
                CHECK_FALSE(w.contains(i, j + 1));
                CHECK_FALSE(w.contains(i, j - 1));
            }
    }
}

TEST_CASE("property: halving h keeps interior points") {
    const ComplexGrid fine{-2.0, 2.0, -2.0, 2.0, 0.05};
    for (const auto& fam : {one(shift()), one(toeplitz({{2, 1.0}, {0, 0.3}})), one(toeplitz({{1, 1.5}, {-1, 0.4}}))}) {
        const GridSet coarse = weyl_spectrum_family(fam, kCoarse);
        const GridSet refined = weyl_spectrum_family(fam, fine);
        FamilyProbe probe(sample_family(fam), {});
        for (auto [i, j] : coarse.members()) {
            const Complex z = kCoarse.point(i, j);
            if (probe.min_gap(z) <= 2 * kCoarse.h) continue;
            CHECK(refined.contains(2 * i, 2 * j));
        }
    }
}

TEST_CASE("grid set algebra") {
    GridSet a = singleton(kGrid, 0.0), b = singleton(kGrid, 0.05);
    CHECK_FALSE(hausdorff_within(a, b, 0.04));
    CHECK(hausdorff_within(a, b, 0.05));
    CHECK(a.dilate(0.05).size() == 5);
    CHECK(a.dilate(0.0) == a);
    CHECK(hausdorff_within(GridSet(kGrid), GridSet(kGrid), 0.1));
    CHECK_FALSE(hausdorff_within(GridSet(kGrid), a, 10.0));
    CHECK_THROWS_AS(a.unite(GridSet(kCoarse)), PreconditionError);
}

TEST_CASE("kuratowski_limits examples") {
    const GridSet a = singleton(kGrid, Complex(0.5, 0.5));
    auto r = kuratowski_limits(std::vector<GridSet>(10, a), 0.1);
    CHECK(r.liminf == a.dilate(0.1));
    CHECK(r.limsup == r.liminf);
    CHECK(r.converged);

    std::vector<GridSet> shrinking;
    for (int n = 1; n <= 32; ++n) shrinking.push_back(singleton(kGrid, 1.0 / n));
    r = kuratowski_limits(shrinking, kGrid.h);
    CHECK(r.converged);
    CHECK(r.liminf.contains(40, 40)); // the origin
    // Tail points all round to 0.05; their h-dilation reaches 0.05 +- 0.05i.
    CHECK(hausdorff_within(r.liminf, singleton(kGrid, 0.0), 2 * kGrid.h));

    std::vector<GridSet> alternating;
    const GridSet p = singleton(kGrid, -1.0), q = singleton(kGrid, 1.0);
    for (int n = 0; n < 16; ++n) alternating.push_back(n % 2 ? p : q);
    r = kuratowski_limits(alternating, 0.1);
    CHECK(r.liminf.empty());
    CHECK(r.limsup == GridSet(p).unite(q).dilate(0.1));
    CHECK_FALSE(r.converged);

    CHECK_THROWS_AS(kuratowski_limits(std::vector<GridSet>(7, a), 0.1), PreconditionError);
    std::vector<GridSet> mixed(8, a);
    mixed[3] = GridSet(kCoarse);
    CHECK_THROWS_AS(kuratowski_limits(mixed, 0.1), PreconditionError);
}

TEST_CASE("property: liminf is inside limsup") {
    Rng rng(401);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<GridSet> seq;
        for (int n = 0; n < 12; ++n) {
            GridSet s(kCoarse);
            for (int k = 0; k < 30; ++k) s.insert(uniform_int(rng, 0, 40), uniform_int(rng, 0, 40));
            seq.push_back(s);
        }
        const auto r = kuratowski_limits(seq, 0.2, uniform(rng, 0.0, 0.3));
        CHECK(r.liminf.subset_of(r.limsup));
        CHECK(r.liminf.subset_of(r.limsup.dilate(r.epsilon)));
    }
}

namespace {

std::vector<OperatorFamily> sequence(const OperatorSpec& base, const OperatorSpec& pert, int last = 32) {
    std::vector<OperatorFamily> out;
    for (int n = 1; n <= last; ++n) out.push_back(one(linear_combine(1.0, base, 1.0 / n, pert)));
    return out;
}

} // namespace

TEST_CASE("semicontinuity examples") {
    const double eps = 2 * kCoarse.h;
    auto r = semicontinuity_check(sequence(shift(), toeplitz({}, unit_rank_one(0, 0))), one(shift()), kCoarse, eps);
    CHECK(r.holds);
    CHECK_FALSE(r.witness);
    r = semicontinuity_check(sequence(shift(), toeplitz({{0, 1.0}})), one(shift()), kCoarse, eps);
    CHECK(r.holds);
    r = semicontinuity_check(std::vector<OperatorFamily>(10, one(shift())), one(shift()), kCoarse, eps);
    CHECK(r.holds);

    const auto far = std::vector<OperatorFamily>(10, one(toeplitz({{1, 1.0}, {0, 0.05}})));
    CHECK_THROWS_AS(semicontinuity_check(far, one(toeplitz({{1, 1.0}, {0, 0.5}})), kCoarse, eps), InconclusiveError);
}

TEST_CASE("limit scenario examples") {
    const double eps = 2 * kCoarse.h;
    auto r = limit_scenario_check(LimitScenario::Commuting, sequence(shift(), toeplitz({{2, 1.0}})), one(shift()), kCoarse, eps);
    CHECK(r.holds);
    CHECK(hausdorff_within(r.report.liminf, weyl_spectrum_point(shift(), kCoarse), eps));

    const OperatorSpec normal = diagonal({0.5}, {0.0, 1.0});
    r = limit_scenario_check(LimitScenario::Normal, sequence(normal, diagonal({1.0}, {0.0, 0.0})), one(normal), kCoarse, eps);
    CHECK(r.holds);
    GridSet pair = singleton(kCoarse, 0.0);
    pair.unite(singleton(kCoarse, 1.0));
    CHECK(r.limit_weyl == pair);

    const OperatorSpec td = diagonal({1.0, 0.5, 1.0 / 3, 0.25}, {0.0});
    r = limit_scenario_check(LimitScenario::TotallyDisconnected, sequence(td, diagonal({1.0, 1.0, 1.0, 1.0}, {0.0})), one(td),
                             kCoarse, eps);
    CHECK(r.holds);
    CHECK(r.limit_weyl == singleton(kCoarse, 0.0));

    r = limit_scenario_check(LimitScenario::EssentialConvergence, sequence(shift(), toeplitz({{0, 1.0}})), one(shift()), kCoarse,
                             eps);
    CHECK(r.holds);
}

TEST_CASE("limit scenario hypotheses are certified") {
    const double eps = 2 * kCoarse.h;
    CHECK_THROWS_AS(limit_scenario_check(LimitScenario::Commuting, sequence(shift(), backward_shift()), one(shift()), kCoarse, eps),
                    HypothesisViolationError);
    CHECK_THROWS_AS(limit_scenario_check(LimitScenario::Commuting, sequence(shift(), toeplitz({}, unit_rank_one(0, 0))),
                                         one(shift()), kCoarse, eps),
                    HypothesisViolationError);
    CHECK_THROWS_AS(limit_scenario_check(LimitScenario::TotallyDisconnected, sequence(shift(), toeplitz({{2, 1.0}})), one(shift()),
                                         kCoarse, eps),
                    HypothesisViolationError);
    const OperatorSpec d = diagonal({0.5}, {0.0, 1.0}, unit_rank_one(0, 1));
    CHECK_THROWS_AS(limit_scenario_check(LimitScenario::Normal, sequence(d, diagonal({1.0}, {0.0, 0.0})), one(d), kCoarse, eps),
                    HypothesisViolationError);
    // Essential spectra of S + S*/n do not approach the unit circle's.
    CHECK_THROWS_AS(limit_scenario_check(LimitScenario::EssentialConvergence, std::vector<OperatorFamily>(10, one(toeplitz({{1, 1.0}, {-1, 0.5}}))),
                                         one(shift()), kCoarse, 0.3),
                    HypothesisViolationError);
    CHECK(std::string(to_string(limit_scenario_from_string("normal"))) == "normal");
    CHECK_THROWS_AS(limit_scenario_from_string("bogus"), SchemaError);
}
