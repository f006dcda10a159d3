#include "covplan/io.hpp"

#include "covplan/normals.hpp"
#include "covplan/types.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace covplan {

namespace {

double parse_double(const std::string& token, const std::string& path, int line) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
        throw ParseError(path, line, "expected a number, got '" + token + "'");
    return v;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream iss(line);
    std::vector<std::string> out;
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void finish_normals(PointCloud& cloud, const std::string& path) {
    if (!cloud.normals.empty()) return;
    if (cloud.points.size() < 3)
        throw ParseError(path, 0, "file has no normals and too few points to estimate them");
    const int k = static_cast<int>(std::min<std::size_t>(12, cloud.points.size()));
    cloud.normals = estimate_normals(cloud.points, k).normals;
}

struct PlyElement {
    std::string name;
    long count = 0;
    std::vector<std::string> properties;  // scalar property names, in column order
    bool has_list = false;
};

PointCloud load_ply(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::string line;
    int lineno = 0;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) throw ParseError(path, lineno, std::string("unexpected end of file, expected ") + what);
        ++lineno;
        return trim(line);
    };

    if (next_line("'ply' magic") != "ply") throw ParseError(path, lineno, "not a PLY file (missing 'ply' magic)");

    std::vector<PlyElement> elements;
    bool saw_format = false;
    while (true) {
        const std::string l = next_line("header line");
        const auto tok = split_ws(l);
        if (tok.empty()) continue;
        if (tok[0] == "comment" || tok[0] == "obj_info") continue;
        if (tok[0] == "format") {
            if (tok.size() < 2 || tok[1] != "ascii")
                throw ParseError(path, lineno, "only 'format ascii 1.0' is supported");
            saw_format = true;
        } else if (tok[0] == "element") {
            if (tok.size() != 3) throw ParseError(path, lineno, "malformed element declaration");
            PlyElement el;
            el.name = tok[1];
            el.count = std::strtol(tok[2].c_str(), nullptr, 10);
            if (el.count < 0) throw ParseError(path, lineno, "negative element count");
            elements.push_back(el);
        } else if (tok[0] == "property") {
            if (elements.empty()) throw ParseError(path, lineno, "property before any element");
            if (tok.size() >= 2 && tok[1] == "list") {
                elements.back().has_list = true;
            } else if (tok.size() == 3) {
                elements.back().properties.push_back(tok[2]);
            } else {
                throw ParseError(path, lineno, "malformed property declaration");
            }
        } else if (tok[0] == "end_header") {
            break;
        } else {
            throw ParseError(path, lineno, "unrecognized header keyword '" + tok[0] + "'");
        }
    }
    if (!saw_format) throw ParseError(path, lineno, "missing format declaration");

    PointCloud cloud;
    bool have_normals = false;
    for (const PlyElement& el : elements) {
        const bool is_vertex = el.name == "vertex";
        int ix = -1, iy = -1, iz = -1, inx = -1, iny = -1, inz = -1;
        if (is_vertex) {
            for (std::size_t c = 0; c < el.properties.size(); ++c) {
                const std::string& p = el.properties[c];
                if (p == "x") ix = static_cast<int>(c);
                else if (p == "y") iy = static_cast<int>(c);
                else if (p == "z") iz = static_cast<int>(c);
                else if (p == "nx") inx = static_cast<int>(c);
                else if (p == "ny") iny = static_cast<int>(c);
                else if (p == "nz") inz = static_cast<int>(c);
            }
            if (ix < 0 || iy < 0 || iz < 0)
                throw ParseError(path, lineno, "vertex element lacks x/y/z properties");
            have_normals = inx >= 0 && iny >= 0 && inz >= 0;
            cloud.points.reserve(el.count);
            if (have_normals) cloud.normals.reserve(el.count);
        }
        for (long i = 0; i < el.count; ++i) {
            const std::string l = next_line("element data");
            if (!is_vertex) continue;
            const auto tok = split_ws(l);
            if (tok.size() != el.properties.size())
                throw ParseError(path, lineno,
                                 "expected " + std::to_string(el.properties.size()) +
                                     " values, got " + std::to_string(tok.size()));
            cloud.points.emplace_back(parse_double(tok[ix], path, lineno),
                                      parse_double(tok[iy], path, lineno),
                                      parse_double(tok[iz], path, lineno));
            if (have_normals) {
                Vec3 n(parse_double(tok[inx], path, lineno), parse_double(tok[iny], path, lineno),
                       parse_double(tok[inz], path, lineno));
                const double len = n.norm();
                if (len < 1e-9) throw ParseError(path, lineno, "zero-length normal");
                // renormalize only when genuinely off-unit, keeping round trips bit-exact
                cloud.normals.push_back(std::abs(len - 1.0) > 1e-9 ? Vec3(n / len) : n);
            }
        }
    }
    if (cloud.points.empty()) throw ParseError(path, lineno, "cloud has no points");
    finish_normals(cloud, path);
    return cloud;
}

PointCloud load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    PointCloud cloud;
    std::string line;
    int lineno = 0;
    std::size_t arity = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string l = trim(line);
        if (l.empty() || l[0] == '#') continue;
        std::vector<std::string> tok;
        std::string cur;
        std::istringstream iss(l);
        while (std::getline(iss, cur, ',')) tok.push_back(trim(cur));
        if (arity == 0) {
            if (tok.size() != 3 && tok.size() != 6)
                throw ParseError(path, lineno, "expected 'x,y,z' or 'x,y,z,nx,ny,nz'");
            arity = tok.size();
        } else if (tok.size() != arity) {
            throw ParseError(path, lineno,
                             "inconsistent column count (" + std::to_string(tok.size()) +
                                 " after " + std::to_string(arity) + ")");
        }
        cloud.points.emplace_back(parse_double(tok[0], path, lineno),
                                  parse_double(tok[1], path, lineno),
                                  parse_double(tok[2], path, lineno));
        if (arity == 6) {
            Vec3 n(parse_double(tok[3], path, lineno), parse_double(tok[4], path, lineno),
                   parse_double(tok[5], path, lineno));
            const double len = n.norm();
            if (len < 1e-9) throw ParseError(path, lineno, "zero-length normal");
            cloud.normals.push_back(std::abs(len - 1.0) > 1e-9 ? Vec3(n / len) : n);
        }
    }
    if (cloud.points.empty()) throw ParseError(path, lineno, "cloud has no points");
    finish_normals(cloud, path);
    return cloud;
}

}  // namespace

CloudFormat cloud_format_from_path(const std::string& path) {
    const auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == "ply") return CloudFormat::ply_ascii;
    if (ext == "csv" || ext == "xyz" || ext == "txt") return CloudFormat::xyz_csv;
    throw std::invalid_argument("cannot infer cloud format from '" + path + "'");
}

PointCloud load_cloud(const std::string& path, CloudFormat format) {
    return format == CloudFormat::ply_ascii ? load_ply(path) : load_csv(path);
}

PointCloud load_cloud(const std::string& path) {
    return load_cloud(path, cloud_format_from_path(path));
}

void save_cloud(const std::string& path, const PointCloud& cloud, CloudFormat format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << std::setprecision(17);
    if (format == CloudFormat::ply_ascii) {
        out << "ply\nformat ascii 1.0\n";
        out << "element vertex " << cloud.size() << "\n";
        out << "property float x\nproperty float y\nproperty float z\n";
        out << "property float nx\nproperty float ny\nproperty float nz\n";
        out << "end_header\n";
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const Vec3 &p = cloud.points[i], &n = cloud.normals[i];
            out << p.x() << ' ' << p.y() << ' ' << p.z() << ' ' << n.x() << ' ' << n.y() << ' '
                << n.z() << '\n';
        }
    } else {
        out << "# x,y,z,nx,ny,nz\n";
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const Vec3 &p = cloud.points[i], &n = cloud.normals[i];
            out << p.x() << ',' << p.y() << ',' << p.z() << ',' << n.x() << ',' << n.y() << ','
                << n.z() << '\n';
        }
    }
    out.flush();
    if (!out) throw IoError("short write to '" + path + "'");
}

void save_cloud(const std::string& path, const PointCloud& cloud) {
    save_cloud(path, cloud, cloud_format_from_path(path));
}

}  // namespace covplan
