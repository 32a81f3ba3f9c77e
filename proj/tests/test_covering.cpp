#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <mshep/covering.hpp>
#include <mshep/nodes.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

using namespace mshep;

namespace {

// brute-force k nearest by (squared distance, index); the library must agree
std::vector<int> knn_oracle(const NodeSet& nodes, int anchor, int k) {
    const Vec2 a = nodes.point(anchor);
    std::vector<std::pair<double, int>> d;
    for (int i = 0; i < nodes.size(); ++i)
        d.emplace_back((nodes.point(i) - a).squaredNorm(), i);
    std::sort(d.begin(), d.end());
    std::vector<int> out;
    for (int i = 0; i < k; ++i) out.push_back(d[static_cast<size_t>(i)].second);
    return out;
}

// |det| of the 3x3 degree-1 Vandermonde on three node indices
double det3(const NodeSet& nodes, int a, int b, int c) {
    const Vec2 pa = nodes.point(a), pb = nodes.point(b), pc = nodes.point(c);
    return std::abs((pb[0] - pa[0]) * (pc[1] - pa[1]) - (pb[1] - pa[1]) * (pc[0] - pa[0]));
}

NodeSet collinear_set() {
    // every node on the line y = x, including the origin slot and the
    // far-field partner; large enough that tau + q candidates exist
    std::vector<Vec2> pts;
    for (int i = 1; i <= 20; ++i) pts.emplace_back(0.18 * i, 0.18 * i);
    return partition_nodes(pts, {Vec2(4, 4)}, "collinear");
}

} // namespace

TEST_CASE("nearest neighbors match the brute-force oracle") {
    NodeSet ns = halton_nodeset(300, 20);
    for (int anchor : {0, 5, 77, ns.origin_index(), ns.size() - 1}) {
        for (int k : {1, 6, 16, 40}) {
            auto got = nearest_neighbors(ns, anchor, k);
            auto want = knn_oracle(ns, anchor, k);
            REQUIRE(got.size() == want.size());
            for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
        }
        // the anchor is its own nearest neighbor
        CHECK(nearest_neighbors(ns, anchor, 1)[0] == anchor);
    }
    CHECK_THROWS_AS(nearest_neighbors(ns, 0, ns.size() + 1), SolverError);
}

TEST_CASE("nearest neighbors break distance ties by index") {
    // four points equidistant from the anchor at (1,1)
    NodeSet ns = partition_nodes({Vec2(1, 1), Vec2(2, 1), Vec2(1, 2), Vec2(0.5, 1),
                                  Vec2(1, 0.5)});
    // distances from node 0: 1, 1, 0.5, 0.5 for nodes 1..4
    auto got = nearest_neighbors(ns, 0, 5);
    REQUIRE(got.size() == 5);
    CHECK(got[0] == 0);
    CHECK(got[1] == 3); // 0.5 before 0.5, lower index first
    CHECK(got[2] == 4);
    CHECK(got[3] == 1); // 1.0 before 1.0, lower index first
    CHECK(got[4] == 2);
}

TEST_CASE("degree-1 Leja selection maximizes the Vandermonde determinant") {
    // p=1 needs tau=3 points; greedy Leja on a pivoted elimination picks the
    // anchor plus the two candidates maximizing |det| greedily.  For p=1 the
    // first non-anchor pick is the farthest candidate (largest first pivot),
    // and the greedy determinant is within the 2-approximation of the best.
    NodeSet ns = halton_nodeset(40, 8);
    for (int anchor : {0, 3, 17}) {
        auto cand = nearest_neighbors(ns, anchor, 9);
        auto sel = leja_select(ns, cand, anchor, 1);
        REQUIRE(sel.size() == 3);
        CHECK(sel[0] == anchor);

        // exhaustive best determinant over candidate pairs
        double best = 0;
        for (size_t i = 0; i < cand.size(); ++i)
            for (size_t j = i + 1; j < cand.size(); ++j)
                if (cand[i] != anchor && cand[j] != anchor)
                    best = std::max(best, det3(ns, anchor, cand[i], cand[j]));
        const double got = det3(ns, anchor, sel[1], sel[2]);
        CHECK(got > 0);
        CHECK(got >= 0.4 * best); // greedy quality bound, frozen from the oracle
    }
}

TEST_CASE("Leja selection requires the anchor among the candidates") {
    NodeSet ns = halton_nodeset(40, 8);
    std::vector<int> cand = {1, 2, 3, 4, 5, 6, 7, 8};
    CHECK_THROWS_AS(leja_select(ns, cand, 0, 2), SolverError);
}

TEST_CASE("degree-2 simplex with q=0: every subset is the full six-point set") {
    NodeSet ns = partition_nodes(uniform_simplex_nodes(2), {}, "simplex2");
    // layout: 3 interior-edge midpoints come out as interior or far-field
    // depending on position; the covering is built over all nodes regardless
    Covering cov = build_covering(ns, 2, 0);
    CHECK(cov.tau == 6);
    REQUIRE(cov.subsets.rows() == ns.size());
    for (int j = 0; j < cov.subsets.rows(); ++j) {
        std::set<int> got;
        for (int c = 0; c < cov.tau; ++c) got.insert(cov.subsets(j, c));
        CHECK(got.size() == 6);
        // q=0 leaves no slack: the subset must be exactly the six nodes
        std::set<int> all;
        for (int i = 0; i < ns.size(); ++i) all.insert(i);
        CHECK(got == all);
        CHECK(cov.subsets(j, 0) == j); // anchor first
    }
}

TEST_CASE("covering structure on a Halton set") {
    NodeSet ns = halton_nodeset(400, 25);
    Covering cov = build_covering(ns, 2, 10);
    CHECK(cov.p == 2);
    CHECK(cov.tau == 6);
    REQUIRE(cov.subsets.rows() == ns.size());

    // each subset holds tau distinct valid indices with the anchor first
    for (int j = 0; j < cov.subsets.rows(); ++j) {
        CHECK(cov.subsets(j, 0) == j);
        std::set<int> seen;
        for (int c = 0; c < cov.tau; ++c) {
            const int i = cov.subsets(j, c);
            CHECK(i >= 0);
            CHECK(i < ns.size());
            seen.insert(i);
        }
        CHECK(static_cast<int>(seen.size()) == cov.tau);
        // selected points are well-conditioned for local interpolation
        std::vector<int> subset(cov.tau);
        for (int c = 0; c < cov.tau; ++c) subset[static_cast<size_t>(c)] = cov.subsets(j, c);
        CHECK(subset_vandermonde_condition(ns, subset, 2) < kSubsetCondLimit);
    }

    // reverse map is exactly the transpose of the membership relation
    REQUIRE(static_cast<int>(cov.reverse.size()) == ns.size());
    size_t total = 0;
    for (int i = 0; i < ns.size(); ++i) {
        const auto& J = cov.reverse[static_cast<size_t>(i)];
        CHECK(std::is_sorted(J.begin(), J.end()));
        CHECK(!J.empty()); // every node anchors its own subset, so J_i != {}
        for (int j : J) {
            bool member = false;
            for (int c = 0; c < cov.tau; ++c) member |= cov.subsets(j, c) == i;
            CHECK(member);
        }
        total += J.size();
    }
    CHECK(total == static_cast<size_t>(ns.size()) * 6); // m subsets of tau members each

    // deterministic: identical inputs give identical subsets
    Covering again = build_covering(ns, 2, 10);
    CHECK((again.subsets - cov.subsets).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("collinear node set exhausts q-escalation") {
    NodeSet ns = collinear_set();
    CHECK_THROWS_WITH_AS(build_covering(ns, 2, 10),
                         doctest::Contains("degenerate neighborhood"), SolverError);
}

TEST_CASE("q-escalation rescues a near-collinear neighborhood") {
    // 16 tightly spaced nodes on a line segment would be selected as the
    // nearest candidates of the middle anchors; the off-line nodes that make
    // interpolation solvable only enter at larger q
    std::vector<Vec2> pts;
    for (int i = 0; i < 16; ++i) pts.emplace_back(2.0 + 0.01 * i, 2.0 + 0.01 * i);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 6; ++j) pts.emplace_back(1.4 + 0.28 * i, 2.6 + 0.22 * j);
    NodeSet ns = partition_nodes(pts, {}, "near-collinear");

    Covering cov = build_covering(ns, 2, 10);
    CHECK(cov.max_q_used > 10); // at least one anchor needed the escalation
    for (int j = 0; j < cov.subsets.rows(); ++j) {
        std::vector<int> subset;
        for (int c = 0; c < cov.tau; ++c) subset.push_back(cov.subsets(j, c));
        CHECK(subset_vandermonde_condition(ns, subset, 2) < kSubsetCondLimit);
    }
}

TEST_CASE("insufficient nodes is a structured error") {
    NodeSet tiny = partition_nodes({Vec2(1, 1), Vec2(2, 1)});
    // 4 nodes total (two interior + origin + none far-field) cannot seat tau=6
    CHECK_THROWS_WITH_AS(build_covering(tiny, 2, 0), doctest::Contains("insufficient"),
                         SolverError);
}
