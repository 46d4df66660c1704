#include "cluttergen/mrg.hpp"

#include <algorithm>
#include <stdexcept>

#include "cluttergen/sim.hpp"

namespace cluttergen {

std::string relationLabelToString(RelationLabel label) {
    switch (label) {
        case RelationLabel::None: return "none";
        case RelationLabel::Parent: return "parent";
        case RelationLabel::Child: return "child";
        case RelationLabel::Bidirectional: return "bidirectional";
    }
    throw std::invalid_argument("unknown relation label");
}

void MrgConfig::validate() const {
    if (!(epsilonTranslation > 0.0)) throw std::invalid_argument("epsilonTranslation must be positive");
    if (!(epsilonRotation > 0.0)) throw std::invalid_argument("epsilonRotation must be positive");
    if (perturbSteps <= 0) throw std::invalid_argument("perturbSteps must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
}

std::set<int> Mrg::objects() const {
    std::set<int> ids;
    for (const auto& [id, par] : parents) ids.insert(id);
    return ids;
}

RelationLabel Mrg::relation(int i, int j) const {
    if (i == j) throw std::invalid_argument("relation requires two distinct objects");
    auto pi = parents.find(i);
    auto pj = parents.find(j);
    if (pi == parents.end() || pj == parents.end())
        throw std::invalid_argument("relation queried for an object outside the graph");
    bool supportsJ = pj->second.count(i) > 0;  // i is a parent of j
    bool supportsI = pi->second.count(j) > 0;  // j is a parent of i
    if (supportsJ && supportsI) return RelationLabel::Bidirectional;
    if (supportsJ) return RelationLabel::Parent;
    if (supportsI) return RelationLabel::Child;
    return RelationLabel::None;
}

std::vector<std::tuple<int, int, RelationLabel>> Mrg::matrix() const {
    std::vector<std::tuple<int, int, RelationLabel>> out;
    for (const auto& [i, pi] : parents)
        for (const auto& [j, pj] : parents)
            if (i != j) out.emplace_back(i, j, relation(i, j));
    return out;
}

Mrg extractMrg(const SceneRecord& record, const ModelLibrary& lib, const MrgConfig& cfg) {
    cfg.validate();
    Mrg out;
    std::map<int, Pose> restPose;
    for (const auto& obj : record.objects) {
        if (out.parents.count(obj.objectId))
            throw std::invalid_argument("duplicate object id in scene record");
        out.parents[obj.objectId] = {};
        restPose[obj.objectId] = obj.pose;
    }

    World base = restoreScene(record, lib);
    for (const auto& [target, unusedT] : out.parents) {
        for (const auto& [candidate, unusedC] : out.parents) {
            if (candidate == target) continue;
            World w = base;
            for (auto& b : w.bodies())
                b.mode = (b.id == target) ? BodyMode::Dynamic : BodyMode::Static;
            w.removeBody(candidate);
            for (int s = 0; s < cfg.perturbSteps; ++s) w.step(cfg.dt);
            const Body* moved = w.find(target);
            if (!moved) throw std::logic_error("perturbation target vanished");
            PoseDelta d = poseDelta(restPose[target], moved->pose);
            if (d.translation > cfg.epsilonTranslation || d.rotationAngle > cfg.epsilonRotation)
                out.parents[target].insert(candidate);
        }
    }
    return out;
}

std::set<int> graspableSet(const Mrg& mrg) {
    std::set<int> supporters;
    for (const auto& [id, par] : mrg.parents) supporters.insert(par.begin(), par.end());
    std::set<int> out;
    for (const auto& [id, par] : mrg.parents)
        if (!supporters.count(id)) out.insert(id);
    return out;
}

bool orderValid(const Mrg& mrg, const std::vector<int>& order) {
    std::set<int> seen(order.begin(), order.end());
    if (seen.size() != order.size() || seen != mrg.objects())
        throw std::invalid_argument("order is not a permutation of the scene's objects");

    std::map<int, std::size_t> rank;
    for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k;

    for (const auto& [child, par] : mrg.parents) {
        for (int parent : par) {
            if (mrg.parents.at(parent).count(child)) return false;  // bidirectional
            if (rank.at(child) > rank.at(parent)) return false;     // supporter lifted first
        }
    }
    return true;
}

std::set<int> descendants(const Mrg& mrg, int id) {
    if (!mrg.parents.count(id))
        throw std::invalid_argument("descendants queried for an object outside the graph");
    // children[i] = objects that rest on i
    std::map<int, std::set<int>> children;
    for (const auto& [child, par] : mrg.parents)
        for (int parent : par) children[parent].insert(child);

    std::set<int> out;
    std::vector<int> stack{id};
    while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        for (int c : children[cur])
            if (out.insert(c).second) stack.push_back(c);
    }
    return out;
}

} // namespace cluttergen
