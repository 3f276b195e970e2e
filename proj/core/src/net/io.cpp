#include "telab/net/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include <nlohmann/json.hpp>

#include "telab/common/error.hpp"

namespace telab::net {

namespace {

using nlohmann::json;

struct RawEdge {
  std::string src;
  std::string dst;
  double capacity;
};

Topology build(std::vector<std::string> names, const std::vector<RawEdge>& raw, bool directed,
               bool merge_parallel) {
  std::map<std::string, NodeIndex> index;
  for (std::size_t i = 0; i < names.size(); ++i) {
    index.emplace(names[i], static_cast<NodeIndex>(i));
  }
  std::vector<Edge> edges;
  std::map<std::pair<NodeIndex, NodeIndex>, std::size_t> seen;
  auto add = [&](NodeIndex a, NodeIndex b, double cap) {
    auto key = std::make_pair(a, b);
    auto it = seen.find(key);
    if (it != seen.end() && merge_parallel) {
      edges[it->second].capacity += cap;
      return;
    }
    if (it == seen.end()) seen.emplace(key, edges.size());
    edges.push_back(Edge{a, b, cap});
  };
  for (const RawEdge& e : raw) {
    auto a = index.find(e.src);
    auto b = index.find(e.dst);
    if (a == index.end()) throw ValidationError("edge references unknown node '" + e.src + "'");
    if (b == index.end()) throw ValidationError("edge references unknown node '" + e.dst + "'");
    if (!(e.capacity > 0.0)) {
      throw ValidationError("edge " + e.src + "->" + e.dst + " has nonpositive capacity");
    }
    add(a->second, b->second, e.capacity);
    if (!directed) add(b->second, a->second, e.capacity);
  }
  return Topology::create(std::move(names), std::move(edges));
}

Topology parse_json_topology(std::string_view text, const ParseOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("topology JSON: ") + e.what());
  }
  try {
    std::vector<std::string> names;
    for (const auto& n : doc.at("nodes")) {
      names.push_back(n.is_string() ? n.get<std::string>() : n.dump());
    }
    std::vector<RawEdge> raw;
    for (const auto& e : doc.at("edges")) {
      auto name = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
      RawEdge r{name(e.at("src")), name(e.at("dst")), options.default_capacity};
      if (e.contains("capacity") && !e.at("capacity").is_null()) {
        r.capacity = e.at("capacity").get<double>();
      }
      raw.push_back(std::move(r));
    }
    const bool directed = doc.value("directed", true);
    return build(std::move(names), raw, directed, /*merge_parallel=*/false);
  } catch (const json::exception& e) {
    throw ParseError(std::string("topology JSON: ") + e.what());
  }
}

// --- GML subset ------------------------------------------------------------

struct GmlList;
using GmlValue = std::variant<std::string, double, std::shared_ptr<GmlList>>;
struct GmlList {
  std::vector<std::pair<std::string, GmlValue>> items;
};

class GmlReader {
 public:
  explicit GmlReader(std::string_view text) : text_(text) {}

  GmlList parse_document() {
    GmlList root = parse_items(/*nested=*/false);
    return root;
  }

 private:
  GmlList parse_items(bool nested) {
    GmlList list;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) {
        if (nested) fail("unterminated list");
        return list;
      }
      if (text_[pos_] == ']') {
        if (!nested) fail("unexpected ']'");
        ++pos_;
        return list;
      }
      std::string key = read_key();
      skip_space();
      if (pos_ >= text_.size()) fail("missing value for key '" + key + "'");
      list.items.emplace_back(std::move(key), read_value());
    }
  }

  GmlValue read_value() {
    const char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      return std::make_shared<GmlList>(parse_items(/*nested=*/true));
    }
    if (c == '"') {
      const std::size_t end = text_.find('"', pos_ + 1);
      if (end == std::string_view::npos) fail("unterminated string");
      std::string s(text_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return s;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '[' && text_[pos_] != ']') {
      ++pos_;
    }
    const std::string_view tok = text_.substr(start, pos_ - start);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      // bare words are kept as strings
      return std::string(tok);
    }
    return v;
  }

  std::string read_key() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail(std::string("unexpected character '") + text_[pos_] + "'");
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("GML: " + what + " at offset " + std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string gml_scalar(const GmlValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  throw ParseError("GML: expected a scalar value");
}

const GmlValue* gml_find(const GmlList& list, std::string_view key) {
  for (const auto& [k, v] : list.items) {
    if (k == key) return &v;
  }
  return nullptr;
}

Topology parse_gml_topology(std::string_view text, const ParseOptions& options) {
  GmlList doc = GmlReader(text).parse_document();
  const GmlValue* graph_value = gml_find(doc, "graph");
  if (graph_value == nullptr || !std::holds_alternative<std::shared_ptr<GmlList>>(*graph_value)) {
    throw ParseError("GML: missing graph [ ... ] block");
  }
  const GmlList& graph = *std::get<std::shared_ptr<GmlList>>(*graph_value);
  bool directed = false;
  if (const GmlValue* d = gml_find(graph, "directed")) {
    directed = std::holds_alternative<double>(*d) && std::get<double>(*d) != 0.0;
  }
  std::vector<std::string> names;
  std::map<std::string, std::string> id_to_name;
  std::vector<RawEdge> raw;
  for (const auto& [key, value] : graph.items) {
    if (key != "node" && key != "edge") continue;
    const auto* list = std::get_if<std::shared_ptr<GmlList>>(&value);
    if (list == nullptr) throw ParseError("GML: " + key + " must be a list");
    const GmlList& item = **list;
    if (key == "node") {
      const GmlValue* id = gml_find(item, "id");
      if (id == nullptr) throw ParseError("GML: node without id");
      const GmlValue* label = gml_find(item, "label");
      std::string name = label != nullptr ? gml_scalar(*label) : gml_scalar(*id);
      if (!id_to_name.emplace(gml_scalar(*id), name).second) {
        throw ValidationError("GML: duplicate node id " + gml_scalar(*id));
      }
      names.push_back(std::move(name));
    } else {
      const GmlValue* src = gml_find(item, "source");
      const GmlValue* dst = gml_find(item, "target");
      if (src == nullptr || dst == nullptr) throw ParseError("GML: edge without source/target");
      RawEdge r{gml_scalar(*src), gml_scalar(*dst), options.default_capacity};
      if (const GmlValue* cap = gml_find(item, "capacity")) {
        const auto* c = std::get_if<double>(cap);
        if (c == nullptr) throw ParseError("GML: capacity must be numeric");
        r.capacity = *c;
      }
      raw.push_back(std::move(r));
    }
  }
  for (RawEdge& e : raw) {
    auto a = id_to_name.find(e.src);
    auto b = id_to_name.find(e.dst);
    if (a == id_to_name.end()) throw ValidationError("GML: edge references unknown node " + e.src);
    if (b == id_to_name.end()) throw ValidationError("GML: edge references unknown node " + e.dst);
    e.src = a->second;
    e.dst = b->second;
  }
  return build(std::move(names), raw, directed, /*merge_parallel=*/true);
}

std::string pair_label(const Topology& topo, NodeIndex s, NodeIndex t) {
  return topo.node_name(s) + "->" + topo.node_name(t);
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view cell = line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                              : comma - start);
    while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back()))) cell.remove_suffix(1);
    while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.front()))) cell.remove_prefix(1);
    cells.emplace_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Topology parse_topology(std::string_view text, TopologyFormat format, const ParseOptions& options) {
  return format == TopologyFormat::json ? parse_json_topology(text, options)
                                        : parse_gml_topology(text, options);
}

Topology load_topology(const std::filesystem::path& path, const ParseOptions& options) {
  const auto format =
      path.extension() == ".gml" ? TopologyFormat::gml : TopologyFormat::json;
  return parse_topology(read_text_file(path), format, options);
}

std::string topology_to_json(const Topology& topo) {
  nlohmann::ordered_json doc;
  doc["nodes"] = std::vector<std::string>(topo.node_names().begin(), topo.node_names().end());
  doc["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : topo.edges()) {
    doc["edges"].push_back({{"src", topo.node_name(e.tail)},
                            {"dst", topo.node_name(e.head)},
                            {"capacity", e.capacity}});
  }
  doc["directed"] = true;
  return doc.dump(2) + "\n";
}

std::string traffic_to_csv(const Topology& topo, std::span<const TrafficMatrix> series) {
  const std::size_t n = topo.node_count();
  std::string out;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (s + t > 0) out += ',';
      out += pair_label(topo, static_cast<NodeIndex>(s), static_cast<NodeIndex>(t));
    }
  }
  out += '\n';
  for (const TrafficMatrix& tm : series) {
    if (tm.node_count() != n) throw ShapeError("traffic matrix size does not match topology");
    const auto values = tm.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i > 0) out += ',';
      out += format_double(values[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<TrafficMatrix> traffic_from_csv(std::string_view text, const Topology& topo) {
  const std::size_t n = topo.node_count();
  std::vector<TrafficMatrix> series;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("traffic CSV: missing header");
  const auto header = split_csv_line(line);
  if (header.size() != n * n) {
    throw ParseError("traffic CSV: expected " + std::to_string(n * n) + " columns, got " +
                     std::to_string(header.size()));
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      const std::string expected =
          pair_label(topo, static_cast<NodeIndex>(s), static_cast<NodeIndex>(t));
      if (header[s * n + t] != expected) {
        throw ParseError("traffic CSV: column " + std::to_string(s * n + t) + " is '" +
                         header[s * n + t] + "', expected '" + expected + "'");
      }
    }
  }
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != n * n) {
      throw ParseError("traffic CSV: row " + std::to_string(row) + " has " +
                       std::to_string(cells.size()) + " cells");
    }
    std::vector<double> values(n * n);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string& c = cells[i];
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), values[i]);
      if (ec != std::errc() || ptr != c.data() + c.size()) {
        throw ParseError("traffic CSV: bad number '" + c + "' in row " + std::to_string(row));
      }
    }
    TrafficMatrix tm(n, std::move(values));
    tm.validate();
    series.push_back(std::move(tm));
  }
  return series;
}

std::string config_to_json(const Topology& topo, const TunnelSet& tunnels, const TeConfig& cfg) {
  if (cfg.ratios.size() != tunnels.pairs.size()) {
    throw ShapeError("configuration is not aligned with the tunnel set");
  }
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < tunnels.pairs.size(); ++i) {
    doc[pair_label(topo, tunnels.pairs[i].src, tunnels.pairs[i].dst)] = cfg.ratios[i];
  }
  return doc.dump(2) + "\n";
}

TeConfig config_from_json(std::string_view text, const Topology& topo, const TunnelSet& tunnels) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("configuration JSON: ") + e.what());
  }
  TeConfig cfg;
  for (const auto& pair : tunnels.pairs) {
    const std::string label = pair_label(topo, pair.src, pair.dst);
    if (!doc.contains(label)) throw ValidationError("configuration lacks pair " + label);
    cfg.ratios.push_back(doc.at(label).get<std::vector<double>>());
  }
  validate_config(tunnels, cfg);
  return cfg;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace telab::net
