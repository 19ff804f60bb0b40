#pragma once

// Private helpers shared by the scenario and report codecs.

#include "holosep/errors.hpp"
#include "holosep/linalg.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace holosep::detail {

using Json = nlohmann::json;

inline Json matrix_to_json(const CMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array();
    Json ri = Json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

inline double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

inline const Json& member(const Json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

inline std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline std::string element(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

inline void require_keys(const Json& obj, std::initializer_list<const char*> allowed,
                         const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ParseError(child(path, key), "unknown field");
  }
}

// rows x cols expected; rows/cols < 0 means "take from the data".
inline CMatrix matrix_from_json(const Json& j, const std::string& path, Index rows, Index cols) {
  require_keys(j, {"re", "im"}, path);
  CMatrix out;
  for (const char* part : {"re", "im"}) {
    const std::string ppath = child(path, part);
    const Json& arr = member(j, part, path);
    if (!arr.is_array() || arr.empty()) throw ParseError(ppath, "expected a non-empty array of rows");
    const Index r = static_cast<Index>(arr.size());
    if (rows >= 0 && r != rows) {
      throw ParseError(ppath, "expected " + std::to_string(rows) + " rows, got " + std::to_string(r) +
                                  " (matrices must be given in full)");
    }
    if (!arr[0].is_array()) throw ParseError(element(ppath, 0), "expected an array");
    const Index c = static_cast<Index>(arr[0].size());
    if (cols >= 0 && c != cols) {
      throw ParseError(element(ppath, 0), "expected " + std::to_string(cols) + " entries, got " +
                                              std::to_string(c) + " (matrices must be given in full)");
    }
    if (out.size() == 0) {
      out = CMatrix::Zero(r, c);
    } else if (out.rows() != r || out.cols() != c) {
      throw ParseError(ppath, "shape differs from the real part");
    }
    for (Index i = 0; i < r; ++i) {
      const std::string rpath = element(ppath, static_cast<std::size_t>(i));
      const Json& row = arr[static_cast<std::size_t>(i)];
      if (!row.is_array()) throw ParseError(rpath, "expected an array");
      if (static_cast<Index>(row.size()) != c) {
        throw ParseError(rpath, "expected " + std::to_string(c) + " entries, got " +
                                    std::to_string(row.size()) + " (matrices must be given in full)");
      }
      for (Index k = 0; k < c; ++k) {
        const double v = number_at(row[static_cast<std::size_t>(k)],
                                   element(rpath, static_cast<std::size_t>(k)));
        if (part[0] == 'r') {
          out(i, k).real(v);
        } else {
          out(i, k).imag(v);
        }
      }
    }
  }
  return out;
}

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace holosep::detail
