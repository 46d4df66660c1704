#pragma once

#include <string>
#include <vector>

#include "cluttergen/geom.hpp"
#include "cluttergen/mesh.hpp"

namespace cluttergen {

// Procedural watertight meshes with outward winding, AABB centered at the
// origin. These form the default model library; external meshes are loaded
// through mesh_io.

TriMesh makeBox(double sx, double sy, double sz);
TriMesh makeCylinder(double radius, double height, int segments = 24);
// Thin box; kept as its own maker so libraries can tag the category.
TriMesh makeSlab(double sx, double sy, double thickness);
// L-shaped cross-section in xy (outer sx*sy, inner notch cut from the +x/+y
// corner), extruded along z.
TriMesh makeLPrism(double sx, double sy, double legX, double legY, double height);
// Right-triangle cross-section in xz: horizontal base, vertical back on the
// -x side, hypotenuse sloping up from +x; extruded along y. Rests on its base.
TriMesh makeWedge(double base, double height, double width);
// UV sphere, for tests that need a known diameter.
TriMesh makeSphere(double radius, int rings = 16, int segments = 24);

// Generic extrusion of a counterclockwise simple polygon along +z, centered
// so the AABB midpoint is the origin. Triangulation by ear clipping.
TriMesh extrudePolygon(const std::vector<Vec2>& ccwPolygon, double height);

} // namespace cluttergen
