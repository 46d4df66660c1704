#pragma once

#include <string>

#include "cluttergen/cloud.hpp"
#include "cluttergen/mesh.hpp"

namespace cluttergen {

// Reads an ASCII OBJ (v/f records, polygon faces fan-triangulated) or an STL
// file (binary or ASCII, auto-detected). Format chosen by extension; winding
// is repaired to point outward. Throws std::runtime_error on I/O or parse
// failure.
TriMesh loadMesh(const std::string& path);

// ASCII OBJ with v/f records only; full double precision so a load
// round-trips the geometry exactly.
void writeObj(const std::string& path, const TriMesh& mesh);

// Binary little-endian PLY with per-vertex x,y,z (float), red,green,blue
// (uchar), object_id (int). Deterministic byte output for identical input.
void writeCloudPly(const std::string& path, const PointCloud& cloud);
PointCloud readCloudPly(const std::string& path);

} // namespace cluttergen
