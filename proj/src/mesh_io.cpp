#include "cluttergen/mesh_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cluttergen {

namespace {

std::string lowercaseExt(const std::string& path) {
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

TriMesh loadObj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mesh file: " + path);
    TriMesh mesh;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue;
        if (tag == "v") {
            Vec3 v;
            if (!(ss >> v.x >> v.y >> v.z)) throw std::runtime_error("bad vertex line: " + line);
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ss >> tok) {
                // "i", "i/t", "i/t/n", "i//n" — the first field is the vertex.
                int v = std::stoi(tok.substr(0, tok.find('/')));
                if (v < 0) v = static_cast<int>(mesh.vertices.size()) + v + 1;
                idx.push_back(v - 1);
            }
            if (idx.size() < 3) throw std::runtime_error("face with <3 vertices: " + line);
            for (size_t k = 2; k < idx.size(); ++k)
                mesh.triangles.push_back({idx[0], idx[static_cast<int>(k) - 1], idx[k]});
        }
    }
    return mesh;
}

// STL carries no indexing; weld identical vertex positions.
TriMesh weldTriangleSoup(const std::vector<Vec3>& soup) {
    TriMesh mesh;
    std::map<std::array<double, 3>, int> seen;
    for (size_t i = 0; i + 2 < soup.size(); i += 3) {
        std::array<int, 3> tri;
        for (int k = 0; k < 3; ++k) {
            const Vec3& v = soup[i + k];
            std::array<double, 3> key{v.x, v.y, v.z};
            auto it = seen.find(key);
            if (it == seen.end()) {
                it = seen.emplace(key, static_cast<int>(mesh.vertices.size())).first;
                mesh.vertices.push_back(v);
            }
            tri[k] = it->second;
        }
        if (tri[0] != tri[1] && tri[1] != tri[2] && tri[0] != tri[2])
            mesh.triangles.push_back(tri);
    }
    return mesh;
}

TriMesh loadStl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open mesh file: " + path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    // Binary STL: 80-byte header + uint32 count + 50 bytes per facet.
    bool binary = false;
    if (content.size() >= 84) {
        uint32_t count;
        std::memcpy(&count, content.data() + 80, 4);
        binary = content.size() == 84 + static_cast<size_t>(count) * 50;
    }

    std::vector<Vec3> soup;
    if (binary) {
        uint32_t count;
        std::memcpy(&count, content.data() + 80, 4);
        for (uint32_t f = 0; f < count; ++f) {
            const char* rec = content.data() + 84 + static_cast<size_t>(f) * 50;
            for (int k = 0; k < 3; ++k) {
                float xyz[3];
                std::memcpy(xyz, rec + 12 + k * 12, 12);  // skip the facet normal
                soup.emplace_back(xyz[0], xyz[1], xyz[2]);
            }
        }
    } else {
        std::istringstream ss(content);
        std::string tok;
        while (ss >> tok) {
            if (tok == "vertex") {
                Vec3 v;
                if (!(ss >> v.x >> v.y >> v.z)) throw std::runtime_error("bad STL vertex");
                soup.push_back(v);
            }
        }
    }
    if (soup.size() < 3) throw std::runtime_error("STL contains no facets: " + path);
    return weldTriangleSoup(soup);
}

template <class T>
void appendLe(std::string& out, T value) {
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    out.append(buf, sizeof(T));
}

} // namespace

TriMesh loadMesh(const std::string& path) {
    std::string ext = lowercaseExt(path);
    TriMesh mesh;
    if (ext == "obj") mesh = loadObj(path);
    else if (ext == "stl") mesh = loadStl(path);
    else throw std::runtime_error("unsupported mesh format: " + path);
    mesh.repairWinding();
    mesh.validate();
    return mesh;
}

void writeObj(const std::string& path, const TriMesh& mesh) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << std::setprecision(17);
    for (const auto& v : mesh.vertices) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
    for (const auto& t : mesh.triangles)
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

void writeCloudPly(const std::string& path, const PointCloud& cloud) {
    std::string body;
    body.reserve(cloud.points.size() * 19);
    for (const auto& p : cloud.points) {
        appendLe(body, static_cast<float>(p.position.x));
        appendLe(body, static_cast<float>(p.position.y));
        appendLe(body, static_cast<float>(p.position.z));
        for (int c = 0; c < 3; ++c) {
            double v = std::clamp(p.color[c], 0.0, 1.0);
            appendLe(body, static_cast<uint8_t>(std::lround(v * 255.0)));
        }
        appendLe(body, static_cast<int32_t>(p.objectId));
    }

    std::ostringstream header;
    header << "ply\nformat binary_little_endian 1.0\n"
           << "element vertex " << cloud.points.size() << "\n"
           << "property float x\nproperty float y\nproperty float z\n"
           << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
           << "property int object_id\n"
           << "end_header\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write PLY: " + path);
    out << header.str() << body;
    if (!out) throw std::runtime_error("short write on PLY: " + path);
}

PointCloud readCloudPly(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open PLY: " + path);

    std::string line;
    size_t count = 0;
    bool headerDone = false;
    std::vector<std::string> props;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "format") {
            std::string fmt;
            ss >> fmt;
            if (fmt != "binary_little_endian")
                throw std::runtime_error("unsupported PLY format: " + fmt);
        } else if (tag == "element") {
            std::string name;
            ss >> name >> count;
            if (name != "vertex") throw std::runtime_error("unexpected PLY element: " + name);
        } else if (tag == "property") {
            std::string type, name;
            ss >> type >> name;
            props.push_back(type + " " + name);
        } else if (tag == "end_header") {
            headerDone = true;
            break;
        }
    }
    if (!headerDone) throw std::runtime_error("PLY header not terminated: " + path);
    const std::vector<std::string> expected{"float x",    "float y",     "float z",
                                            "uchar red",  "uchar green", "uchar blue",
                                            "int object_id"};
    if (props != expected) throw std::runtime_error("unexpected PLY vertex layout: " + path);

    PointCloud cloud;
    cloud.points.resize(count);
    for (auto& p : cloud.points) {
        float xyz[3];
        uint8_t rgb[3];
        int32_t id;
        in.read(reinterpret_cast<char*>(xyz), 12);
        in.read(reinterpret_cast<char*>(rgb), 3);
        in.read(reinterpret_cast<char*>(&id), 4);
        if (!in) throw std::runtime_error("truncated PLY body: " + path);
        p.position = {xyz[0], xyz[1], xyz[2]};
        p.color = {rgb[0] / 255.0, rgb[1] / 255.0, rgb[2] / 255.0};
        p.objectId = id;
    }
    return cloud;
}

} // namespace cluttergen
