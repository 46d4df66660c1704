#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cluttergen/scene.hpp"

namespace cluttergen {

enum class RelationLabel { None, Parent, Child, Bidirectional };

std::string relationLabelToString(RelationLabel label);

struct MrgConfig {
    double epsilonTranslation = 0.01;        // m
    double epsilonRotation = degToRad(5.0);  // rad
    int perturbSteps = 100;
    double dt = 1.0 / 240.0;
    void validate() const;  // every field strictly positive
};

// Per-object parent sets: j in parents[i] means removing j disturbs i, i.e.
// i rests (directly) on j. Every scene object has a key, supported or not.
struct Mrg {
    std::map<int, std::set<int>> parents;

    std::set<int> objects() const;

    // Pure function of the parent sets. Requires i != j and both present:
    // Bidirectional if each supports the other, Parent if i supports j only,
    // Child if j supports i only, None otherwise.
    RelationLabel relation(int i, int j) const;

    // All ordered pairs (i, j), i != j, with their labels.
    std::vector<std::tuple<int, int, RelationLabel>> matrix() const;
};

// Leave-one-out perturbation: for every target i and candidate j, restore
// the scene, make everything static except i, delete j, run
// cfg.perturbSteps steps, and record j as a parent of i when i's pose moved
// beyond either epsilon. Deterministic; the record is left untouched.
Mrg extractMrg(const SceneRecord& record, const ModelLibrary& lib,
               const MrgConfig& cfg = {});

// Objects safe to pick right now: those appearing in no parent set
// (nothing rests on them).
std::set<int> graspableSet(const Mrg& mrg);

// True iff the order (a permutation of the scene's objects — anything else
// throws) lifts every supported object before its supporters and the scene
// has no bidirectional pair (those admit no safe sequential order).
bool orderValid(const Mrg& mrg, const std::vector<int>& order);

// Transitive closure of "rests on id": the objects that would be disturbed,
// directly or through intermediaries, by removing id.
std::set<int> descendants(const Mrg& mrg, int id);

} // namespace cluttergen
