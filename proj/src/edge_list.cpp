#include "anchoralign/edge_list.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace anchoralign {

LabeledGraph read_edge_list(std::istream& in) {
  std::unordered_map<std::string, Vertex> ids;
  std::vector<std::string> labels;
  std::vector<std::pair<Vertex, Vertex>> edges;

  auto intern = [&](const std::string& token) {
    auto [it, inserted] = ids.try_emplace(token, static_cast<Vertex>(labels.size()));
    if (inserted) labels.push_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(std::move(tok));
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 2) {
      throw EdgeListError(line_no, "expected 2 tokens, found " + std::to_string(tokens.size()));
    }
    if (tokens[0] == tokens[1]) throw EdgeListError(line_no, "self-loop on '" + tokens[0] + "'");
    const Vertex u = intern(tokens[0]);
    const Vertex v = intern(tokens[1]);
    edges.emplace_back(u, v);
  }
  if (in.bad()) throw EdgeListError(0, "read failure");
  if (labels.empty()) throw EdgeListError(0, "edge list contains no vertices");
  return {Graph(labels.size(), edges), std::move(labels)};
}

LabeledGraph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
  if (!out) throw std::runtime_error("failed writing edge list");
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_edge_list(g, out);
}

}  // namespace anchoralign
