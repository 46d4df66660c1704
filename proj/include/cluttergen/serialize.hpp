#pragma once

#include <map>
#include <string>
#include <vector>

#include "cluttergen/grasp2d.hpp"
#include "cluttergen/grasp3d.hpp"
#include "cluttergen/mrg.hpp"
#include "cluttergen/scene.hpp"
#include "cluttergen/sensor.hpp"

namespace cluttergen {

// Every annotation file carries this version; readers reject anything else.
inline constexpr int kSchemaVersion = 1;

// All writers emit sorted keys and shortest-roundtrip doubles, so a fixed
// value always serializes to the same bytes. Readers throw
// std::runtime_error on malformed text, missing fields, or a schema
// mismatch, and round-trip their writer's output exactly.
//
// Conventions: poses are {"translation":[x,y,z],"rotation":[w,x,y,z]};
// angles are radians except Grasp2D's "alphaDegrees"; object ids appear as
// string keys where JSON requires them.

std::string sceneToJson(const SceneRecord& record);
SceneRecord sceneFromJson(const std::string& text);

std::string mrgToJson(const Mrg& mrg, const std::string& sceneId);
Mrg mrgFromJson(const std::string& text);

std::string grasps3dToJson(const std::map<int, GraspSet>& sets, const std::string& sceneId);
std::map<int, GraspSet> grasps3dFromJson(const std::string& text);

std::string grasps2dToJson(const std::vector<Grasp2D>& grasps, const std::string& sceneId,
                           int cameraIndex);
std::vector<Grasp2D> grasps2dFromJson(const std::string& text, int* cameraIndex = nullptr);

std::string bboxesToJson(const std::vector<BBox2D>& boxes, const std::string& sceneId,
                         int cameraIndex);
std::vector<BBox2D> bboxesFromJson(const std::string& text, int* cameraIndex = nullptr);

// Whole-file helpers; throw std::runtime_error on I/O failure.
void writeTextFile(const std::string& path, const std::string& text);
std::string readTextFile(const std::string& path);

} // namespace cluttergen
