#include "meshseg/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "meshseg/errors.hpp"

namespace meshseg {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

double parse_double(std::string_view tok, std::size_t line_no, const char* what) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(value))
        throw ParseError(std::string("malformed ") + what + " '" + std::string(tok) + "'", line_no);
    return value;
}

long parse_long(std::string_view tok, std::size_t line_no, const char* what) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(std::string("malformed ") + what + " '" + std::string(tok) + "'", line_no);
    return value;
}

// Fan-triangulate one polygon record and append the triangles.
void append_polygon(TriangleMesh& mesh, const std::vector<int>& poly, std::size_t line_no) {
    for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        std::array<int, 3> tri = {poly[0], poly[k], poly[k + 1]};
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw ParseError("degenerate face: repeated vertex index", line_no);
        mesh.faces.push_back(tri);
    }
}

struct Line {
    std::string_view text;
    std::size_t number;
};

std::vector<Line> lines_of(std::string_view text) {
    std::vector<Line> lines;
    std::size_t pos = 0, number = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back({line, ++number});
        if (end == text.size()) break;
        pos = end + 1;
    }
    return lines;
}

} // namespace

TriangleMesh parse_obj(std::string_view text) {
    TriangleMesh mesh;
    for (const Line& ln : lines_of(text)) {
        std::string_view body = ln.text.substr(0, ln.text.find('#'));
        auto tokens = split_ws(body);
        if (tokens.empty()) continue;
        std::string_view kw = tokens[0];
        if (kw == "v") {
            if (tokens.size() < 4) throw ParseError("vertex record needs 3 coordinates", ln.number);
            Vec3 v{parse_double(tokens[1], ln.number, "coordinate"),
                   parse_double(tokens[2], ln.number, "coordinate"),
                   parse_double(tokens[3], ln.number, "coordinate")};
            mesh.vertices.push_back(v);
        } else if (kw == "f") {
            if (tokens.size() < 4)
                throw ParseError("face record needs at least 3 vertices", ln.number);
            std::vector<int> poly;
            poly.reserve(tokens.size() - 1);
            for (std::size_t t = 1; t < tokens.size(); ++t) {
                // keep the vertex index, drop any /texture/normal sub-indices
                std::string_view head = tokens[t].substr(0, tokens[t].find('/'));
                long raw = parse_long(head, ln.number, "face index");
                long idx = raw;
                if (raw < 0) idx = static_cast<long>(mesh.vertices.size()) + raw;
                else if (raw > 0) idx = raw - 1; // OBJ indices are 1-based
                else throw ParseError("face index 0 is not valid", ln.number);
                if (idx < 0 || idx >= static_cast<long>(mesh.vertices.size()))
                    throw ParseError("face index " + std::to_string(raw) + " out of range",
                                     ln.number);
                poly.push_back(static_cast<int>(idx));
            }
            append_polygon(mesh, poly, ln.number);
        }
        // all other record types are ignored
    }
    if (mesh.faces.empty()) throw ParseError("no faces", 0);
    return mesh;
}

namespace {

struct PlyProperty {
    bool is_list = false;
    std::string name;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> properties;
};

} // namespace

TriangleMesh parse_ply(std::string_view text) {
    const auto lines = lines_of(text);
    std::size_t li = 0;
    auto next_content = [&]() -> const Line* {
        while (li < lines.size()) {
            const Line& ln = lines[li++];
            if (!split_ws(ln.text).empty()) return &ln;
        }
        return nullptr;
    };

    const Line* magic = next_content();
    if (!magic || split_ws(magic->text)[0] != "ply")
        throw ParseError("not a PLY file: missing 'ply' magic", magic ? magic->number : 1);

    std::vector<PlyElement> elements;
    bool saw_format = false;
    bool in_header = true;
    while (in_header) {
        const Line* ln = next_content();
        if (!ln) throw ParseError("unterminated PLY header", lines.size());
        auto tokens = split_ws(ln->text);
        std::string_view kw = tokens[0];
        if (kw == "comment" || kw == "obj_info") continue;
        if (kw == "format") {
            if (tokens.size() < 2) throw ParseError("malformed format line", ln->number);
            if (tokens[1] != "ascii")
                throw ParseError("binary PLY is not supported; only ascii 1.0", ln->number);
            saw_format = true;
        } else if (kw == "element") {
            if (tokens.size() != 3) throw ParseError("malformed element line", ln->number);
            PlyElement el;
            el.name = std::string(tokens[1]);
            long n = parse_long(tokens[2], ln->number, "element count");
            if (n < 0) throw ParseError("negative element count", ln->number);
            el.count = static_cast<std::size_t>(n);
            elements.push_back(std::move(el));
        } else if (kw == "property") {
            if (elements.empty()) throw ParseError("property before any element", ln->number);
            if (tokens.size() < 3) throw ParseError("malformed property line", ln->number);
            PlyProperty prop;
            prop.is_list = tokens[1] == "list";
            if (prop.is_list && tokens.size() != 5)
                throw ParseError("malformed list property", ln->number);
            prop.name = std::string(tokens.back());
            elements.back().properties.push_back(std::move(prop));
        } else if (kw == "end_header") {
            in_header = false;
        } else {
            throw ParseError("unknown header keyword '" + std::string(kw) + "'", ln->number);
        }
    }
    if (!saw_format) throw ParseError("PLY header lacks a format line", 0);

    TriangleMesh mesh;
    bool saw_vertex = false, saw_face = false;
    std::vector<std::pair<std::array<int, 3>, std::size_t>> raw_faces; // indices + source line

    for (const PlyElement& el : elements) {
        const bool is_vertex = el.name == "vertex";
        const bool is_face = el.name == "face";
        int xi = -1, yi = -1, zi = -1, list_at = -1;
        if (is_vertex) {
            for (std::size_t p = 0; p < el.properties.size(); ++p) {
                if (el.properties[p].name == "x") xi = static_cast<int>(p);
                if (el.properties[p].name == "y") yi = static_cast<int>(p);
                if (el.properties[p].name == "z") zi = static_cast<int>(p);
            }
            if (xi < 0 || yi < 0 || zi < 0)
                throw ParseError("vertex element lacks x/y/z properties", 0);
            saw_vertex = true;
        }
        if (is_face) {
            for (std::size_t p = 0; p < el.properties.size(); ++p) {
                const PlyProperty& prop = el.properties[p];
                if (prop.is_list && (prop.name == "vertex_indices" || prop.name == "vertex_index"))
                    list_at = static_cast<int>(p);
            }
            if (list_at < 0) throw ParseError("face element lacks a vertex index list", 0);
            saw_face = true;
        }

        for (std::size_t r = 0; r < el.count; ++r) {
            const Line* ln = next_content();
            if (!ln)
                throw ParseError("element '" + el.name + "' declares " + std::to_string(el.count) +
                                     " rows but the body ends after " + std::to_string(r),
                                 lines.empty() ? 0 : lines.back().number);
            auto tokens = split_ws(ln->text);
            // walk the declared properties, consuming tokens
            std::size_t t = 0;
            Vec3 v{};
            std::vector<int> poly;
            for (std::size_t p = 0; p < el.properties.size(); ++p) {
                const PlyProperty& prop = el.properties[p];
                if (prop.is_list) {
                    if (t >= tokens.size()) throw ParseError("truncated row", ln->number);
                    long count = parse_long(tokens[t++], ln->number, "list count");
                    if (count < 0 || t + static_cast<std::size_t>(count) > tokens.size())
                        throw ParseError("truncated list property", ln->number);
                    if (is_face && static_cast<int>(p) == list_at) {
                        if (count < 3)
                            throw ParseError("face needs at least 3 vertices", ln->number);
                        for (long k = 0; k < count; ++k) {
                            long idx = parse_long(tokens[t++], ln->number, "face index");
                            if (idx < 0) throw ParseError("negative face index", ln->number);
                            poly.push_back(static_cast<int>(idx));
                        }
                    } else {
                        t += static_cast<std::size_t>(count);
                    }
                } else {
                    if (t >= tokens.size())
                        throw ParseError("row has fewer values than declared properties",
                                         ln->number);
                    if (is_vertex) {
                        if (static_cast<int>(p) == xi)
                            v.x = parse_double(tokens[t], ln->number, "coordinate");
                        else if (static_cast<int>(p) == yi)
                            v.y = parse_double(tokens[t], ln->number, "coordinate");
                        else if (static_cast<int>(p) == zi)
                            v.z = parse_double(tokens[t], ln->number, "coordinate");
                    }
                    ++t;
                }
            }
            if (t != tokens.size())
                throw ParseError("row has more values than declared properties", ln->number);
            if (is_vertex) mesh.vertices.push_back(v);
            if (is_face) {
                for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
                    std::array<int, 3> tri = {poly[0], poly[k], poly[k + 1]};
                    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
                        throw ParseError("degenerate face: repeated vertex index", ln->number);
                    raw_faces.push_back({tri, ln->number});
                }
            }
        }
    }
    if (next_content())
        throw ParseError("content after the last declared element", lines.back().number);
    if (!saw_vertex) throw ParseError("no vertex element", 0);
    if (!saw_face || raw_faces.empty()) throw ParseError("no faces", 0);

    for (const auto& [tri, line_no] : raw_faces) {
        for (int idx : tri)
            if (idx >= static_cast<int>(mesh.vertices.size()))
                throw ParseError("face index " + std::to_string(idx) + " out of range", line_no);
        mesh.faces.push_back(tri);
    }
    return mesh;
}

namespace {

void append_number(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    out += buf;
}

std::string write_ply_impl(const TriangleMesh& mesh, const std::vector<int>* labels,
                           const std::vector<Rgb>* palette) {
    std::string out;
    out += "ply\nformat ascii 1.0\n";
    out += "element vertex " + std::to_string(mesh.vertices.size()) + "\n";
    out += "property float x\nproperty float y\nproperty float z\n";
    out += "element face " + std::to_string(mesh.faces.size()) + "\n";
    out += "property list uchar int vertex_indices\n";
    if (labels) out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out += "end_header\n";
    for (const Vec3& v : mesh.vertices) {
        append_number(out, v.x);
        out += ' ';
        append_number(out, v.y);
        out += ' ';
        append_number(out, v.z);
        out += '\n';
    }
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& tri = mesh.faces[f];
        out += "3 " + std::to_string(tri[0]) + ' ' + std::to_string(tri[1]) + ' ' +
               std::to_string(tri[2]);
        if (labels) {
            const Rgb& c = (*palette)[static_cast<std::size_t>((*labels)[f])];
            out += ' ' + std::to_string(c[0]) + ' ' + std::to_string(c[1]) + ' ' +
                   std::to_string(c[2]);
        }
        out += '\n';
    }
    return out;
}

} // namespace

std::string write_ply(const TriangleMesh& mesh) { return write_ply_impl(mesh, nullptr, nullptr); }

std::string write_ply_colored(const TriangleMesh& mesh, const std::vector<int>& labels,
                              const std::vector<Rgb>& palette) {
    if (labels.size() != mesh.faces.size())
        throw std::invalid_argument("write_ply_colored: one label per face required");
    for (int l : labels)
        if (l < 0 || static_cast<std::size_t>(l) >= palette.size())
            throw std::invalid_argument("write_ply_colored: label " + std::to_string(l) +
                                        " has no palette entry");
    return write_ply_impl(mesh, &labels, &palette);
}

std::vector<Rgb> make_palette(int n) {
    if (n < 1) throw std::invalid_argument("make_palette: need at least one color");
    std::vector<Rgb> palette;
    palette.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double h = 6.0 * i / n; // hue sector in [0, 6)
        const double s = 0.72, value = 0.95;
        const int sector = static_cast<int>(h) % 6;
        const double f = h - std::floor(h);
        const double p = value * (1.0 - s);
        const double q = value * (1.0 - s * f);
        const double t = value * (1.0 - s * (1.0 - f));
        double r = 0, g = 0, b = 0;
        switch (sector) {
            case 0: r = value, g = t, b = p; break;
            case 1: r = q, g = value, b = p; break;
            case 2: r = p, g = value, b = t; break;
            case 3: r = p, g = q, b = value; break;
            case 4: r = t, g = p, b = value; break;
            default: r = value, g = p, b = q; break;
        }
        palette.push_back({static_cast<std::uint8_t>(std::lround(r * 255)),
                           static_cast<std::uint8_t>(std::lround(g * 255)),
                           static_cast<std::uint8_t>(std::lround(b * 255))});
    }
    return palette;
}

TriangleMesh load_mesh(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    std::string ext;
    if (auto dotpos = path.rfind('.'); dotpos != std::string::npos) ext = path.substr(dotpos + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == "obj") return parse_obj(text);
    if (ext == "ply") return parse_ply(text);
    throw IoError("unsupported mesh extension '" + ext + "' for '" + path + "'");
}

} // namespace meshseg
