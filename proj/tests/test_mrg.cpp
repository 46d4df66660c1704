#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <map>
#include <set>
#include <vector>

#include "cluttergen/mrg.hpp"
#include "cluttergen/oracles.hpp"
#include "cluttergen/sim.hpp"

using namespace cluttergen;

namespace {

const MrgCorpus& corpus() {
    static MrgCorpus c = mrgCorpus();
    return c;
}

// Children-first peeling: repeatedly emit everything nothing rests on.
// Fails (returns empty) only when mutual support blocks the peel.
std::vector<int> peelOrder(const Mrg& mrg) {
    std::set<int> remaining = mrg.objects();
    std::vector<int> order;
    while (!remaining.empty()) {
        std::vector<int> freeNow;
        for (int i : remaining) {
            bool carries = false;
            for (int j : remaining) {
                if (j != i && mrg.parents.at(j).count(i)) {
                    carries = true;
                    break;
                }
            }
            if (!carries) freeNow.push_back(i);
        }
        if (freeNow.empty()) return {};
        for (int f : freeNow) {
            order.push_back(f);
            remaining.erase(f);
        }
    }
    return order;
}

bool hasBidirectional(const Mrg& mrg) {
    for (const auto& [i, par] : mrg.parents)
        for (int j : par)
            if (mrg.parents.at(j).count(i)) return true;
    return false;
}

} // namespace

TEST_CASE("relationship config rejects non-positive settings") {
    CHECK_NOTHROW(MrgConfig{}.validate());
    MrgConfig c;
    c.epsilonTranslation = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = MrgConfig{};
    c.epsilonRotation = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = MrgConfig{};
    c.perturbSteps = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = MrgConfig{};
    c.dt = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    CHECK(MrgConfig{}.epsilonTranslation == doctest::Approx(0.01));
    CHECK(MrgConfig{}.epsilonRotation == doctest::Approx(degToRad(5.0)));
    CHECK(MrgConfig{}.perturbSteps == 100);
    CHECK(MrgConfig{}.dt == doctest::Approx(1.0 / 240.0));
}

TEST_CASE("relation labels derive from parent sets alone") {
    Mrg m;
    m.parents[0] = {};
    m.parents[1] = {0};       // 1 rests on 0
    m.parents[2] = {3};       // 2 and 3 hold each other
    m.parents[3] = {2};

    CHECK(m.relation(0, 1) == RelationLabel::Parent);
    CHECK(m.relation(1, 0) == RelationLabel::Child);
    CHECK(m.relation(2, 3) == RelationLabel::Bidirectional);
    CHECK(m.relation(3, 2) == RelationLabel::Bidirectional);
    CHECK(m.relation(0, 2) == RelationLabel::None);
    CHECK_THROWS_AS(m.relation(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(m.relation(0, 9), std::invalid_argument);

    auto mat = m.matrix();
    CHECK(mat.size() == 12);  // 4*3 ordered pairs
    for (const auto& [i, j, lab] : mat) {
        RelationLabel back = m.relation(j, i);
        if (lab == RelationLabel::Parent) CHECK(back == RelationLabel::Child);
        if (lab == RelationLabel::Child) CHECK(back == RelationLabel::Parent);
        if (lab == RelationLabel::Bidirectional) CHECK(back == RelationLabel::Bidirectional);
        if (lab == RelationLabel::None) CHECK(back == RelationLabel::None);
    }

    CHECK(relationLabelToString(RelationLabel::None) == "none");
    CHECK(relationLabelToString(RelationLabel::Parent) == "parent");
    CHECK(relationLabelToString(RelationLabel::Child) == "child");
    CHECK(relationLabelToString(RelationLabel::Bidirectional) == "bidirectional");
}

TEST_CASE("single object scene has an empty graph") {
    const auto& rec = corpusScene(corpus(), "single_box");
    Mrg m = extractMrg(rec, corpus().library);
    REQUIRE(m.parents.size() == 1);
    CHECK(m.parents.at(0).empty());
    CHECK(m.matrix().empty());
    CHECK(graspableSet(m) == std::set<int>{0});
}

TEST_CASE("a box resting on another is its child") {
    const auto& rec = corpusScene(corpus(), "stack_centered");
    Mrg m = extractMrg(rec, corpus().library);
    CHECK(m.parents.at(1) == std::set<int>{0});
    CHECK(m.parents.at(0).empty());
    CHECK(m.relation(0, 1) == RelationLabel::Parent);
    CHECK(m.relation(1, 0) == RelationLabel::Child);
}

TEST_CASE("three stack produces the expected parent chain") {
    const auto& rec = corpusScene(corpus(), "three_stack");
    Mrg m = extractMrg(rec, corpus().library);
    CHECK(m.parents.at(0) == std::set<int>{1});
    CHECK(m.parents.at(1) == std::set<int>{2});
    CHECK(m.parents.at(2).empty());

    CHECK(graspableSet(m) == std::set<int>{0});
    CHECK(descendants(m, 2) == std::set<int>{0, 1});
    CHECK(descendants(m, 1) == std::set<int>{0});
    CHECK(descendants(m, 0).empty());
    CHECK_THROWS_AS(descendants(m, 7), std::invalid_argument);

    CHECK(orderValid(m, {0, 1, 2}));
    CHECK_FALSE(orderValid(m, {2, 1, 0}));
    CHECK_FALSE(orderValid(m, {0, 2, 1}));
    CHECK_THROWS_AS(orderValid(m, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(orderValid(m, {0, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(orderValid(m, {0, 1, 2, 3}), std::invalid_argument);
}

TEST_CASE("leaning wedges support each other") {
    Mrg m = extractMrg(corpus().leaningPair, corpus().library);
    REQUIRE(m.parents.size() == 2);
    CHECK(m.parents.at(0) == std::set<int>{1});
    CHECK(m.parents.at(1) == std::set<int>{0});
    CHECK(m.relation(0, 1) == RelationLabel::Bidirectional);

    CHECK(graspableSet(m).empty());
    CHECK_FALSE(orderValid(m, {0, 1}));
    CHECK_FALSE(orderValid(m, {1, 0}));
}

TEST_CASE("objects directly on the table relate to nothing") {
    for (const char* name : {"two_disjoint", "side_by_side"}) {
        const auto& rec = corpusScene(corpus(), name);
        Mrg m = extractMrg(rec, corpus().library);
        for (const auto& [i, j, lab] : m.matrix()) CHECK(lab == RelationLabel::None);
        CHECK(graspableSet(m) == m.objects());
        CHECK(orderValid(m, {0, 1}));
        CHECK(orderValid(m, {1, 0}));
    }
}

TEST_CASE("bridge decks depend on the pillars that carry weight") {
    Mrg sym = extractMrg(corpusScene(corpus(), "bridge_symmetric"), corpus().library);
    CHECK(sym.parents.at(2) == std::set<int>{0, 1});
    CHECK(sym.parents.at(0).empty());
    CHECK(sym.parents.at(1).empty());

    Mrg asym = extractMrg(corpusScene(corpus(), "bridge_asymmetric"), corpus().library);
    CHECK(asym.parents.at(2) == std::set<int>{0});

    Mrg triple = extractMrg(corpusScene(corpus(), "three_pillar_bridge"), corpus().library);
    CHECK(triple.parents.at(3).empty());
}

TEST_CASE("perturbation extraction matches quasi-static support analysis") {
    auto t0 = std::chrono::steady_clock::now();
    int scenes = 0;
    for (const auto& [name, rec] : corpus().boxScenes) {
        CAPTURE(name);
        World w = restoreScene(rec, corpus().library);
        auto expected = supportOracle(w);
        Mrg got = extractMrg(rec, corpus().library);
        std::map<int, std::set<int>> gotParents(got.parents.begin(), got.parents.end());
        CHECK(gotParents == expected);
        ++scenes;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(scenes >= 20);
    CHECK(secs < 60.0);
    MESSAGE("corpus equivalence over ", scenes, " scenes in ", secs, " s");
}

TEST_CASE("support analysis rejects non-box scenes") {
    World w = restoreScene(corpus().leaningPair, corpus().library);
    CHECK_THROWS_AS(supportOracle(w), std::invalid_argument);
}

TEST_CASE("extraction is repeatable and leaves the record untouched") {
    const auto& rec = corpusScene(corpus(), "offset_tower");
    SceneRecord copy = rec;
    Mrg a = extractMrg(rec, corpus().library);
    Mrg b = extractMrg(rec, corpus().library);
    CHECK(a.parents == b.parents);
    REQUIRE(copy.objects.size() == rec.objects.size());
    for (std::size_t k = 0; k < rec.objects.size(); ++k) {
        CHECK(rec.objects[k].pose.translation.x == copy.objects[k].pose.translation.x);
        CHECK(rec.objects[k].pose.translation.z == copy.objects[k].pose.translation.z);
        CHECK(rec.objects[k].pose.rotation.w == copy.objects[k].pose.rotation.w);
    }
}

TEST_CASE("generated scenes yield internally consistent graphs") {
    ModelLibrary lib = ModelLibrary::builtin();
    for (std::uint64_t seed : {101ull, 202ull, 303ull}) {
        SceneRecord rec = generateScene(lib, 6, seed);
        Mrg m = extractMrg(rec, lib);

        CHECK(m.parents.size() == rec.objects.size());
        for (const auto& [i, par] : m.parents) CHECK_FALSE(par.count(i));
        for (const auto& [i, j, lab] : m.matrix()) {
            RelationLabel back = m.relation(j, i);
            if (lab == RelationLabel::Parent) CHECK(back == RelationLabel::Child);
            if (lab == RelationLabel::None) CHECK(back == RelationLabel::None);
        }

        std::set<int> grasp = graspableSet(m);
        for (int g : grasp) {
            for (const auto& [j, par] : m.parents) CHECK_FALSE(par.count(g));
        }

        if (!hasBidirectional(m)) {
            std::vector<int> order = peelOrder(m);
            REQUIRE_FALSE(order.empty());
            CHECK(orderValid(m, order));
        }
    }
}
