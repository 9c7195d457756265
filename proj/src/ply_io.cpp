#include "scanplan/ply_io.hpp"

#include "scanplan/config.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>

namespace scanplan {

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, const std::string& what,
                             std::size_t line_or_offset, bool binary = false) {
    raise(ErrorCode::ParseError, path.string() + ": " + what + " (" +
                                     (binary ? "byte offset " : "line ") +
                                     std::to_string(line_or_offset) + ")");
}

enum class ScalarType { Char, UChar, Short, UShort, Int, UInt, Float, Double };

std::size_t scalar_size(ScalarType t) {
    switch (t) {
        case ScalarType::Char:
        case ScalarType::UChar: return 1;
        case ScalarType::Short:
        case ScalarType::UShort: return 2;
        case ScalarType::Int:
        case ScalarType::UInt:
        case ScalarType::Float: return 4;
        case ScalarType::Double: return 8;
    }
    return 0;
}

ScalarType scalar_type(const std::string& name, const std::filesystem::path& path,
                       std::size_t line) {
    if (name == "char" || name == "int8") return ScalarType::Char;
    if (name == "uchar" || name == "uint8") return ScalarType::UChar;
    if (name == "short" || name == "int16") return ScalarType::Short;
    if (name == "ushort" || name == "uint16") return ScalarType::UShort;
    if (name == "int" || name == "int32") return ScalarType::Int;
    if (name == "uint" || name == "uint32") return ScalarType::UInt;
    if (name == "float" || name == "float32") return ScalarType::Float;
    if (name == "double" || name == "float64") return ScalarType::Double;
    parse_fail(path, "unknown property type '" + name + "'", line);
}

double decode_scalar(const char* bytes, ScalarType t) {
    switch (t) {
        case ScalarType::Char: {
            std::int8_t v;
            std::memcpy(&v, bytes, 1);
            return v;
        }
        case ScalarType::UChar: {
            std::uint8_t v;
            std::memcpy(&v, bytes, 1);
            return v;
        }
        case ScalarType::Short: {
            std::int16_t v;
            std::memcpy(&v, bytes, 2);
            return v;
        }
        case ScalarType::UShort: {
            std::uint16_t v;
            std::memcpy(&v, bytes, 2);
            return v;
        }
        case ScalarType::Int: {
            std::int32_t v;
            std::memcpy(&v, bytes, 4);
            return v;
        }
        case ScalarType::UInt: {
            std::uint32_t v;
            std::memcpy(&v, bytes, 4);
            return v;
        }
        case ScalarType::Float: {
            float v;
            std::memcpy(&v, bytes, 4);
            return v;
        }
        case ScalarType::Double: {
            double v;
            std::memcpy(&v, bytes, 8);
            return v;
        }
    }
    return 0.0;
}

struct PlyProperty {
    std::string name;
    ScalarType type = ScalarType::Float;
    bool is_list = false;
    ScalarType count_type = ScalarType::UChar;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> properties;
};

struct VertexLayout {
    int x = -1, y = -1, z = -1;
    int nx = -1, ny = -1, nz = -1;
    int ox = -1, oy = -1, oz = -1;
};

LoadedGeometry assemble(std::vector<Point3> points, std::vector<Dir3> normals,
                        std::vector<Point3> origins,
                        std::vector<std::array<std::uint32_t, 3>> triangles) {
    if (!triangles.empty()) {
        TriangleMesh mesh;
        mesh.vertices = std::move(points);
        mesh.triangles = std::move(triangles);
        mesh.validate();
        mesh.update_derived();
        return mesh;
    }
    PointCloud cloud;
    cloud.points = std::move(points);
    cloud.normals = std::move(normals);
    cloud.origins = std::move(origins);
    cloud.validate();
    return cloud;
}

LoadedGeometry load_ply(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoError, "cannot open " + path.string());

    std::string line;
    std::size_t line_no = 0;
    const auto next_line = [&]() {
        if (!std::getline(in, line)) parse_fail(path, "unexpected end of header", line_no);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++line_no;
    };

    next_line();
    if (line != "ply") parse_fail(path, "missing 'ply' magic", line_no);

    bool binary = false;
    std::vector<PlyElement> elements;
    for (;;) {
        next_line();
        std::istringstream words(line);
        std::string word;
        words >> word;
        if (word == "comment" || word == "obj_info" || word.empty()) continue;
        if (word == "format") {
            std::string fmt, version;
            words >> fmt >> version;
            if (fmt == "ascii") {
                binary = false;
            } else if (fmt == "binary_little_endian") {
                binary = true;
            } else {
                raise(ErrorCode::UnsupportedFeature,
                      path.string() + ": unsupported PLY format '" + fmt + "'");
            }
        } else if (word == "element") {
            PlyElement el;
            words >> el.name >> el.count;
            elements.push_back(el);
        } else if (word == "property") {
            if (elements.empty()) parse_fail(path, "property before element", line_no);
            PlyProperty prop;
            std::string type;
            words >> type;
            if (type == "list") {
                std::string count_type, item_type;
                words >> count_type >> item_type >> prop.name;
                prop.is_list = true;
                prop.count_type = scalar_type(count_type, path, line_no);
                prop.type = scalar_type(item_type, path, line_no);
            } else {
                words >> prop.name;
                prop.type = scalar_type(type, path, line_no);
            }
            elements.back().properties.push_back(prop);
        } else if (word == "end_header") {
            break;
        } else {
            parse_fail(path, "unknown header keyword '" + word + "'", line_no);
        }
    }

    std::vector<Point3> points;
    std::vector<Dir3> normals;
    std::vector<Point3> origins;
    std::vector<std::array<std::uint32_t, 3>> triangles;

    for (const PlyElement& el : elements) {
        const bool is_vertex = el.name == "vertex";
        const bool is_face = el.name == "face";

        VertexLayout layout;
        if (is_vertex) {
            for (std::size_t p = 0; p < el.properties.size(); ++p) {
                const std::string& n = el.properties[p].name;
                const int idx = int(p);
                if (n == "x") layout.x = idx;
                if (n == "y") layout.y = idx;
                if (n == "z") layout.z = idx;
                if (n == "nx") layout.nx = idx;
                if (n == "ny") layout.ny = idx;
                if (n == "nz") layout.nz = idx;
                if (n == "origin_x") layout.ox = idx;
                if (n == "origin_y") layout.oy = idx;
                if (n == "origin_z") layout.oz = idx;
            }
            if (layout.x < 0 || layout.y < 0 || layout.z < 0) {
                parse_fail(path, "vertex element lacks x/y/z", line_no);
            }
            points.reserve(el.count);
        }

        std::vector<double> scalars(el.properties.size());
        std::vector<double> list_values;
        std::string buffer;

        for (std::size_t row = 0; row < el.count; ++row) {
            list_values.clear();
            if (binary) {
                for (std::size_t p = 0; p < el.properties.size(); ++p) {
                    const PlyProperty& prop = el.properties[p];
                    char raw[8];
                    if (prop.is_list) {
                        if (!in.read(raw, std::streamsize(scalar_size(prop.count_type)))) {
                            parse_fail(path, "truncated binary data", std::size_t(in.tellg()),
                                       true);
                        }
                        const std::size_t n =
                            std::size_t(decode_scalar(raw, prop.count_type));
                        for (std::size_t i = 0; i < n; ++i) {
                            if (!in.read(raw, std::streamsize(scalar_size(prop.type)))) {
                                parse_fail(path, "truncated binary list",
                                           std::size_t(in.tellg()), true);
                            }
                            list_values.push_back(decode_scalar(raw, prop.type));
                        }
                    } else {
                        if (!in.read(raw, std::streamsize(scalar_size(prop.type)))) {
                            parse_fail(path, "truncated binary data", std::size_t(in.tellg()),
                                       true);
                        }
                        scalars[p] = decode_scalar(raw, prop.type);
                    }
                }
            } else {
                if (!std::getline(in, buffer)) {
                    parse_fail(path, "truncated " + el.name + " data", line_no);
                }
                ++line_no;
                std::istringstream words(buffer);
                for (std::size_t p = 0; p < el.properties.size(); ++p) {
                    const PlyProperty& prop = el.properties[p];
                    if (prop.is_list) {
                        std::size_t n = 0;
                        if (!(words >> n)) parse_fail(path, "bad list count", line_no);
                        for (std::size_t i = 0; i < n; ++i) {
                            double v;
                            if (!(words >> v)) parse_fail(path, "bad list entry", line_no);
                            list_values.push_back(v);
                        }
                    } else if (!(words >> scalars[p])) {
                        parse_fail(path, "bad scalar value", line_no);
                    }
                }
            }

            if (is_vertex) {
                points.push_back({scalars[layout.x], scalars[layout.y], scalars[layout.z]});
                if (layout.nx >= 0 && layout.ny >= 0 && layout.nz >= 0) {
                    normals.push_back(
                        {scalars[layout.nx], scalars[layout.ny], scalars[layout.nz]});
                }
                if (layout.ox >= 0 && layout.oy >= 0 && layout.oz >= 0) {
                    origins.push_back(
                        {scalars[layout.ox], scalars[layout.oy], scalars[layout.oz]});
                }
            } else if (is_face && !list_values.empty()) {
                // Fan triangulation of the polygon.
                for (std::size_t i = 2; i < list_values.size(); ++i) {
                    triangles.push_back({std::uint32_t(list_values[0]),
                                         std::uint32_t(list_values[i - 1]),
                                         std::uint32_t(list_values[i])});
                }
            }
        }
    }

    return assemble(std::move(points), std::move(normals), std::move(origins),
                    std::move(triangles));
}

LoadedGeometry load_obj(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoError, "cannot open " + path.string());

    std::vector<Point3> points;
    std::vector<std::array<std::uint32_t, 3>> triangles;

    const auto resolve = [&](long long idx, std::size_t line_no) -> std::uint32_t {
        if (idx < 0) idx = (long long)points.size() + idx + 1;
        if (idx < 1 || std::size_t(idx) > points.size()) {
            parse_fail(path, "face index out of range", line_no);
        }
        return std::uint32_t(idx - 1);
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream words(line);
        std::string tag;
        if (!(words >> tag)) continue;
        if (tag == "v") {
            Point3 p;
            if (!(words >> p.x >> p.y >> p.z)) parse_fail(path, "bad vertex line", line_no);
            points.push_back(p);
        } else if (tag == "f") {
            std::vector<std::uint32_t> face;
            std::string token;
            while (words >> token) {
                // Forms: i, i/j, i//k, i/j/k; only the vertex index matters.
                const auto slash = token.find('/');
                const std::string head = slash == std::string::npos ? token
                                                                    : token.substr(0, slash);
                char* end = nullptr;
                const long long idx = std::strtoll(head.c_str(), &end, 10);
                if (end == head.c_str()) parse_fail(path, "bad face token", line_no);
                face.push_back(resolve(idx, line_no));
            }
            if (face.size() < 3) parse_fail(path, "face needs >= 3 vertices", line_no);
            for (std::size_t i = 2; i < face.size(); ++i) {
                triangles.push_back({face[0], face[i - 1], face[i]});
            }
        }
        // Other tags (vn, vt, usemtl, ...) are ignored.
    }

    return assemble(std::move(points), {}, {}, std::move(triangles));
}

void atomic_stream_write(const std::filesystem::path& path,
                         const std::function<void(std::ofstream&)>& writer, bool binary) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, binary ? std::ios::binary : std::ios::out);
        if (!out) raise(ErrorCode::IoError, "cannot write " + tmp.string());
        writer(out);
        if (!out) raise(ErrorCode::IoError, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_binary_doubles(std::ofstream& out, const double* values, std::size_t n) {
    out.write(reinterpret_cast<const char*>(values), std::streamsize(n * sizeof(double)));
}

} // namespace

LoadedGeometry load_geometry(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".obj" || ext == ".OBJ") return load_obj(path);
    return load_ply(path);
}

PointCloud load_cloud(const std::filesystem::path& path) {
    LoadedGeometry g = load_geometry(path);
    if (std::holds_alternative<PointCloud>(g)) return std::get<PointCloud>(g);
    // A mesh file can still serve as a cloud of its vertices.
    PointCloud cloud;
    cloud.points = std::get<TriangleMesh>(g).vertices;
    return cloud;
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
    LoadedGeometry g = load_geometry(path);
    if (std::holds_alternative<TriangleMesh>(g)) return std::get<TriangleMesh>(g);
    raise(ErrorCode::UnsupportedFeature, path.string() + " holds no faces; a mesh is required");
}

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path, bool binary) {
    cloud.validate();
    atomic_stream_write(path, [&](std::ofstream& out) {
        out << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n";
        out << "element vertex " << cloud.points.size() << "\n";
        out << "property double x\nproperty double y\nproperty double z\n";
        if (cloud.has_normals()) {
            out << "property double nx\nproperty double ny\nproperty double nz\n";
        }
        if (cloud.has_origins()) {
            out << "property double origin_x\nproperty double origin_y\nproperty double "
                   "origin_z\n";
        }
        out << "end_header\n";
        for (std::size_t i = 0; i < cloud.points.size(); ++i) {
            double row[9];
            std::size_t n = 0;
            row[n++] = cloud.points[i].x;
            row[n++] = cloud.points[i].y;
            row[n++] = cloud.points[i].z;
            if (cloud.has_normals()) {
                row[n++] = cloud.normals[i].x;
                row[n++] = cloud.normals[i].y;
                row[n++] = cloud.normals[i].z;
            }
            if (cloud.has_origins()) {
                row[n++] = cloud.origins[i].x;
                row[n++] = cloud.origins[i].y;
                row[n++] = cloud.origins[i].z;
            }
            if (binary) {
                write_binary_doubles(out, row, n);
            } else {
                for (std::size_t c = 0; c < n; ++c) {
                    out << (c ? " " : "") << format_g9(row[c]);
                }
                out << "\n";
            }
        }
    }, binary);
}

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path, bool binary) {
    mesh.validate();
    atomic_stream_write(path, [&](std::ofstream& out) {
        out << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n";
        out << "element vertex " << mesh.vertices.size() << "\n";
        out << "property double x\nproperty double y\nproperty double z\n";
        out << "element face " << mesh.triangles.size() << "\n";
        out << "property list uchar int vertex_indices\n";
        out << "end_header\n";
        for (const Point3& v : mesh.vertices) {
            if (binary) {
                const double row[3] = {v.x, v.y, v.z};
                write_binary_doubles(out, row, 3);
            } else {
                out << format_g9(v.x) << " " << format_g9(v.y) << " " << format_g9(v.z) << "\n";
            }
        }
        for (const auto& tri : mesh.triangles) {
            if (binary) {
                const std::uint8_t count = 3;
                out.write(reinterpret_cast<const char*>(&count), 1);
                const std::int32_t idx[3] = {std::int32_t(tri[0]), std::int32_t(tri[1]),
                                             std::int32_t(tri[2])};
                out.write(reinterpret_cast<const char*>(idx), 12);
            } else {
                out << "3 " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
            }
        }
    }, binary);
}

void save_colored_mesh(const TriangleMesh& mesh,
                       const std::vector<std::array<std::uint8_t, 3>>& vertex_colors,
                       const std::filesystem::path& path) {
    if (vertex_colors.size() != mesh.vertices.size()) {
        raise(ErrorCode::InvalidArgument, "vertex color count != vertex count");
    }
    atomic_stream_write(path, [&](std::ofstream& out) {
        out << "ply\nformat ascii 1.0\n";
        out << "element vertex " << mesh.vertices.size() << "\n";
        out << "property double x\nproperty double y\nproperty double z\n";
        out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
        out << "element face " << mesh.triangles.size() << "\n";
        out << "property list uchar int vertex_indices\n";
        out << "end_header\n";
        for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
            const Point3& v = mesh.vertices[i];
            const auto& c = vertex_colors[i];
            out << format_g9(v.x) << " " << format_g9(v.y) << " " << format_g9(v.z) << " "
                << int(c[0]) << " " << int(c[1]) << " " << int(c[2]) << "\n";
        }
        for (const auto& tri : mesh.triangles) {
            out << "3 " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
        }
    }, false);
}

void save_colored_points(const std::vector<Point3>& points,
                         const std::vector<std::array<std::uint8_t, 3>>& colors,
                         const std::filesystem::path& path) {
    if (colors.size() != points.size()) {
        raise(ErrorCode::InvalidArgument, "point color count != point count");
    }
    atomic_stream_write(path, [&](std::ofstream& out) {
        out << "ply\nformat ascii 1.0\n";
        out << "element vertex " << points.size() << "\n";
        out << "property double x\nproperty double y\nproperty double z\n";
        out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
        out << "end_header\n";
        for (std::size_t i = 0; i < points.size(); ++i) {
            out << format_g9(points[i].x) << " " << format_g9(points[i].y) << " "
                << format_g9(points[i].z) << " " << int(colors[i][0]) << " "
                << int(colors[i][1]) << " " << int(colors[i][2]) << "\n";
        }
    }, false);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    atomic_stream_write(path, [&](std::ofstream& out) { out << contents; }, false);
}

} // namespace scanplan
