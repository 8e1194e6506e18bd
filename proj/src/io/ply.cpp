#include "zspose/io/ply.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace zspose {

namespace {

enum class PlyType { i8, u8, i16, u16, i32, u32, f32, f64 };

PlyType parse_type(const std::string& s) {
  if (s == "char" || s == "int8") return PlyType::i8;
  if (s == "uchar" || s == "uint8") return PlyType::u8;
  if (s == "short" || s == "int16") return PlyType::i16;
  if (s == "ushort" || s == "uint16") return PlyType::u16;
  if (s == "int" || s == "int32") return PlyType::i32;
  if (s == "uint" || s == "uint32") return PlyType::u32;
  if (s == "float" || s == "float32") return PlyType::f32;
  if (s == "double" || s == "float64") return PlyType::f64;
  throw std::runtime_error("unsupported PLY property type: " + s);
}

std::size_t type_size(PlyType t) {
  switch (t) {
    case PlyType::i8:
    case PlyType::u8:
      return 1;
    case PlyType::i16:
    case PlyType::u16:
      return 2;
    case PlyType::i32:
    case PlyType::u32:
    case PlyType::f32:
      return 4;
    case PlyType::f64:
      return 8;
  }
  return 0;
}

double read_binary_value(std::istream& in, PlyType t) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(type_size(t)));
  switch (t) {
    case PlyType::i8:
      return static_cast<double>(static_cast<std::int8_t>(buf[0]));
    case PlyType::u8:
      return static_cast<double>(buf[0]);
    case PlyType::i16: {
      std::int16_t v;
      std::memcpy(&v, buf, 2);
      return v;
    }
    case PlyType::u16: {
      std::uint16_t v;
      std::memcpy(&v, buf, 2);
      return v;
    }
    case PlyType::i32: {
      std::int32_t v;
      std::memcpy(&v, buf, 4);
      return v;
    }
    case PlyType::u32: {
      std::uint32_t v;
      std::memcpy(&v, buf, 4);
      return v;
    }
    case PlyType::f32: {
      float v;
      std::memcpy(&v, buf, 4);
      return v;
    }
    case PlyType::f64: {
      double v;
      std::memcpy(&v, buf, 8);
      return v;
    }
  }
  return 0.0;
}

struct Property {
  std::string name;
  bool is_list = false;
  PlyType count_type = PlyType::u8;
  PlyType value_type = PlyType::f32;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

}  // namespace

TriangleMesh load_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);

  std::string line;
  std::getline(in, line);
  if (line.rfind("ply", 0) != 0) throw std::runtime_error(path + ": not a PLY file");

  bool binary = false;
  std::vector<Element> elements;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt == "ascii")
        binary = false;
      else if (fmt == "binary_little_endian")
        binary = true;
      else
        throw std::runtime_error(path + ": unsupported PLY format " + fmt);
    } else if (word == "element") {
      Element e;
      ls >> e.name >> e.count;
      elements.push_back(e);
    } else if (word == "property") {
      if (elements.empty()) throw std::runtime_error(path + ": property before element");
      Property p;
      std::string t;
      ls >> t;
      if (t == "list") {
        std::string ct, vt;
        ls >> ct >> vt >> p.name;
        p.is_list = true;
        p.count_type = parse_type(ct);
        p.value_type = parse_type(vt);
      } else {
        ls >> p.name;
        p.value_type = parse_type(t);
      }
      elements.back().properties.push_back(p);
    } else if (word == "end_header") {
      break;
    }  // comments and obj_info are skipped
  }

  TriangleMesh mesh;
  for (const Element& e : elements) {
    const bool is_vertex = e.name == "vertex";
    const bool is_face = e.name == "face";
    int ix = -1, iy = -1, iz = -1;
    if (is_vertex) {
      for (std::size_t p = 0; p < e.properties.size(); ++p) {
        if (e.properties[p].name == "x") ix = static_cast<int>(p);
        if (e.properties[p].name == "y") iy = static_cast<int>(p);
        if (e.properties[p].name == "z") iz = static_cast<int>(p);
      }
      if (ix < 0 || iy < 0 || iz < 0)
        throw std::runtime_error(path + ": vertex element lacks x/y/z");
      mesh.vertices.reserve(e.count);
    }

    for (std::size_t i = 0; i < e.count; ++i) {
      std::vector<double> scalars(e.properties.size(), 0.0);
      std::vector<long> face_indices;
      if (binary) {
        for (std::size_t p = 0; p < e.properties.size(); ++p) {
          const Property& prop = e.properties[p];
          if (prop.is_list) {
            const auto n = static_cast<std::size_t>(read_binary_value(in, prop.count_type));
            for (std::size_t k = 0; k < n; ++k) {
              const double v = read_binary_value(in, prop.value_type);
              if (is_face && prop.name.rfind("vertex_ind", 0) == 0)
                face_indices.push_back(static_cast<long>(v));
            }
          } else {
            scalars[p] = read_binary_value(in, prop.value_type);
          }
        }
      } else {
        // one element instance per line
        std::string data_line;
        do {
          if (!std::getline(in, data_line)) throw std::runtime_error(path + ": truncated PLY");
        } while (data_line.find_first_not_of(" \t\r") == std::string::npos);
        std::istringstream ds(data_line);
        for (std::size_t p = 0; p < e.properties.size(); ++p) {
          const Property& prop = e.properties[p];
          if (prop.is_list) {
            std::size_t n;
            ds >> n;
            for (std::size_t k = 0; k < n; ++k) {
              double v;
              ds >> v;
              if (is_face && prop.name.rfind("vertex_ind", 0) == 0)
                face_indices.push_back(static_cast<long>(v));
            }
          } else {
            ds >> scalars[p];
          }
        }
      }
      if (!in) throw std::runtime_error(path + ": truncated PLY");

      if (is_vertex) {
        mesh.vertices.emplace_back(scalars[ix], scalars[iy], scalars[iz]);
      } else if (is_face && face_indices.size() >= 3) {
        // fan-triangulate polygons
        for (std::size_t k = 1; k + 1 < face_indices.size(); ++k)
          mesh.triangles.push_back({static_cast<int>(face_indices[0]),
                                    static_cast<int>(face_indices[k]),
                                    static_cast<int>(face_indices[k + 1])});
      }
    }
  }
  mesh.validate();
  return mesh;
}

void save_ply(const std::string& path, const TriangleMesh& mesh, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n"
      << "element vertex " << mesh.vertices.size() << "\n"
      << "property float x\nproperty float y\nproperty float z\n"
      << "element face " << mesh.triangles.size() << "\n"
      << "property list uchar int vertex_indices\nend_header\n";
  if (binary) {
    for (const Vec3& v : mesh.vertices) {
      const float xyz[3] = {static_cast<float>(v.x()), static_cast<float>(v.y()),
                            static_cast<float>(v.z())};
      out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    }
    for (const auto& t : mesh.triangles) {
      const unsigned char n = 3;
      out.write(reinterpret_cast<const char*>(&n), 1);
      const std::int32_t idx[3] = {t[0], t[1], t[2]};
      out.write(reinterpret_cast<const char*>(idx), sizeof(idx));
    }
  } else {
    out.precision(9);
    for (const Vec3& v : mesh.vertices) out << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  }
  if (!out) throw std::runtime_error("short write to " + path);
}

SymmetrySet load_symmetries_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  nlohmann::json j;
  f >> j;
  SymmetrySet set;
  for (const auto& entry : j.at("symmetries")) {
    Mat3 r;
    const auto& rr = entry.at("R");
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) r(i, k) = rr.at(i * 3 + k).get<double>();
    Vec3 t(entry.at("t").at(0).get<double>(), entry.at("t").at(1).get<double>(),
           entry.at("t").at(2).get<double>());
    const Pose pose(r, t);
    // the identity slot is already present
    if (r.isApprox(Mat3::Identity(), 1e-12) && t.norm() < 1e-12) continue;
    set.add(pose);
  }
  return set;
}

void save_symmetries_json(const std::string& path, const SymmetrySet& symmetries) {
  nlohmann::json list = nlohmann::json::array();
  for (const Pose& p : symmetries.transforms) {
    nlohmann::json r = nlohmann::json::array();
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) r.push_back(p.rotation.m(i, k));
    list.push_back({{"R", r}, {"t", {p.translation.x(), p.translation.y(), p.translation.z()}}});
  }
  nlohmann::json j{{"symmetries", list}};
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << "\n";
}

}  // namespace zspose
