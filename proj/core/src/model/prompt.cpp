#include "telab/model/prompt.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <limits>
#include <sstream>

#include "telab/common/checksum.hpp"
#include "telab/common/error.hpp"

namespace telab::model {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

bool is_trim(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) && c != '-' && c != '_';
}

}  // namespace

Tokenizer::Tokenizer(std::size_t vocab_size) : vocab_(vocab_size) {
  if (vocab_size < 2) throw ValidationError("vocabulary needs at least two ids");
}

std::size_t Tokenizer::token_id(std::string_view word) const {
  std::size_t b = 0, e = word.size();
  while (b < e && is_trim(word[b])) ++b;
  while (e > b && is_trim(word[e - 1])) --e;
  if (b == e) return kUnknown;
  std::string lower(word.substr(b, e - b));
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return 1 + static_cast<std::size_t>(fnv1a64(lower) % (vocab_ - 1));
}

std::vector<std::size_t> Tokenizer::encode(std::string_view text) const {
  std::vector<std::size_t> ids;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) ids.push_back(token_id(text.substr(i, j - i)));
    i = j;
  }
  return ids;
}

std::string Prompt::text() const {
  std::string out = role + "\n" + topology_summary + "\n" + tm_statistics + "\n";
  for (const auto& line : constraint_lines) out += line + "\n";
  return out;
}

std::string failure_line(const net::Topology& topo, net::EdgeIndex e) {
  const auto& edge = topo.edge(e);
  return "Link " + topo.node_name(edge.tail) + "-" + topo.node_name(edge.head) + " is currently down.";
}

Prompt build_prompt(const net::Topology& topo, const net::TunnelSet& tunnels,
                    std::span<const net::TrafficMatrix> history, const Constraints& constraints,
                    const Tokenizer& tokenizer, std::size_t max_tokens) {
  Prompt p;
  p.role = std::string(kRoleLine);

  double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0, csum = 0.0;
  for (const auto& e : topo.edges()) {
    cmin = std::min(cmin, e.capacity);
    cmax = std::max(cmax, e.capacity);
    csum += e.capacity;
  }
  if (topo.edge_count() == 0) cmin = 0.0;
  const double cmean = topo.edge_count() ? csum / static_cast<double>(topo.edge_count()) : 0.0;
  std::ostringstream topo_line;
  topo_line << "The network has " << topo.node_count() << " routers, " << topo.edge_count()
            << " links and up to " << tunnels.k << " tunnels per pair. Link capacity min "
            << num(cmin) << " mean " << num(cmean) << " max " << num(cmax) << ".";
  p.topology_summary = topo_line.str();

  double sum = 0.0, sq = 0.0, mx = 0.0;
  std::size_t count = 0;
  for (const auto& tm : history) {
    const std::size_t n = tm.node_count();
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = 0; t < n; ++t) {
        if (s == t) continue;
        sum += tm(s, t);
        sq += tm(s, t) * tm(s, t);
        mx = std::max(mx, tm(s, t));
        ++count;
      }
    }
  }
  const double mean = count ? sum / static_cast<double>(count) : 0.0;
  const double var = count ? std::max(0.0, sq / static_cast<double>(count) - mean * mean) : 0.0;
  std::ostringstream stats;
  stats << "Over the last " << history.size() << " intervals the demand per pair had mean "
        << num(mean) << " max " << num(mx) << " variance " << num(var) << ".";
  p.tm_statistics = stats.str();

  for (auto e : constraints.failed_links) {
    // Both directions of a failed physical link render as one line.
    const auto rev = topo.find_edge(topo.edge(e).head, topo.edge(e).tail);
    if (rev && *rev < e && constraints.failed_links.count(*rev)) continue;
    p.constraint_lines.push_back(failure_line(topo, e));
  }
  if (constraints.burst_scale) {
    p.constraint_lines.push_back("A traffic burst of scale " + num(*constraints.burst_scale) +
                                 " is in progress.");
  }

  const auto base = tokenizer.encode(p.role + " " + p.topology_summary + " " + p.tm_statistics);
  if (base.size() > max_tokens) {
    throw ValidationError("prompt needs " + std::to_string(base.size()) + " tokens without constraints, limit " +
                          std::to_string(max_tokens));
  }
  std::vector<std::vector<std::size_t>> lines;
  for (const auto& line : p.constraint_lines) lines.push_back(tokenizer.encode(line));
  std::size_t total = base.size();
  for (const auto& l : lines) total += l.size();
  while (total > max_tokens) {
    total -= lines.back().size();
    lines.pop_back();
    p.constraint_lines.pop_back();
    ++p.dropped_constraints;
  }
  p.tokens = base;
  for (const auto& l : lines) p.tokens.insert(p.tokens.end(), l.begin(), l.end());
  return p;
}

}  // namespace telab::model
