#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "halin/conflict.hpp"
#include "halin/errors.hpp"
#include "halin/halin_graph.hpp"

namespace halin {

inline constexpr const char* kInstanceFormat = "halin-v1";

namespace io_detail {

using nlohmann::json;

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

inline int as_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw Error(ErrorKind::Parse, what + " must be an integer");
  return j.get<int>();
}

}  // namespace io_detail

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
}

// Structural parse only; Halin validity is checked by validate().
inline TreeDescription parse_instance(const std::string& text) {
  using io_detail::as_int;
  const auto j = io_detail::parse_json(text);
  if (!j.is_object()) throw Error(ErrorKind::Parse, "instance must be a JSON object");
  if (!j.contains("format") || j["format"] != kInstanceFormat)
    throw Error(ErrorKind::Parse, std::string("format tag must be \"") + kInstanceFormat + "\"");
  if (!j.contains("root")) throw Error(ErrorKind::Parse, "missing root");
  if (!j.contains("nodes") || !j["nodes"].is_array()) throw Error(ErrorKind::Parse, "nodes must be an array");
  TreeDescription desc;
  desc.root = as_int(j["root"], "root");
  for (const auto& node : j["nodes"]) {
    if (!node.is_object() || !node.contains("id")) throw Error(ErrorKind::Parse, "every node needs an id");
    NodeDescription d;
    d.id = as_int(node["id"], "node id");
    if (node.contains("children")) {
      if (!node["children"].is_array()) throw Error(ErrorKind::Parse, "children must be an array");
      for (const auto& c : node["children"]) d.children.push_back(as_int(c, "child id"));
    }
    desc.nodes.push_back(std::move(d));
  }
  return desc;
}

inline std::string format_instance(const TreeDescription& desc) {
  nlohmann::ordered_json j;
  j["format"] = kInstanceFormat;
  j["root"] = desc.root;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : desc.nodes) j["nodes"].push_back({{"id", n.id}, {"children", n.children}});
  return j.dump() + "\n";
}

inline std::string format_instance(const HalinGraph& g) { return format_instance(g.tree().description()); }

inline HalinGraph load_instance(const std::string& path) { return validate(parse_instance(read_file(path))); }

inline std::string format_coloring(const EdgeColoring& c) {
  nlohmann::ordered_json colors = nlohmann::ordered_json::object();
  for (std::size_t e = 0; e < c.colors.size(); ++e)
    if (c.colors[e] >= 0) colors[std::to_string(e)] = c.colors[e];
  nlohmann::ordered_json j;
  j["palette"] = c.palette;
  j["colors"] = std::move(colors);
  return j.dump() + "\n";
}

// Edges missing from the map stay uncoloured (-1).
inline EdgeColoring parse_coloring(const std::string& text, int edge_count) {
  using io_detail::as_int;
  const auto j = io_detail::parse_json(text);
  if (!j.is_object() || !j.contains("palette") || !j.contains("colors") || !j["colors"].is_object())
    throw Error(ErrorKind::Parse, "colouring needs palette and colors");
  EdgeColoring c;
  c.palette = as_int(j["palette"], "palette");
  c.colors.assign(static_cast<std::size_t>(edge_count), -1);
  for (const auto& [key, value] : j["colors"].items()) {
    int e = -1;
    try {
      std::size_t used = 0;
      e = std::stoi(key, &used);
      if (used != key.size()) e = -1;
    } catch (const std::exception&) {
      e = -1;
    }
    if (e < 0 || e >= edge_count) throw Error(ErrorKind::InvalidEdge, "edge index '" + key + "'");
    const int colour = as_int(value, "colour");
    if (colour < 0 || colour >= c.palette) throw Error(ErrorKind::InvalidArgument, "colour outside palette");
    c.colors[e] = colour;
  }
  return c;
}

}  // namespace halin
