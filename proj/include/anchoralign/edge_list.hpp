#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "anchoralign/graph.hpp"

namespace anchoralign {

/// Malformed edge-list input. `line()` is 1-based, 0 when not line-specific.
class EdgeListError : public std::runtime_error {
 public:
  EdgeListError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A graph read from text together with the token each vertex id came from.
struct LabeledGraph {
  Graph graph;
  std::vector<std::string> labels;
};

/// One edge per line as two whitespace-separated tokens; '#' lines and blank
/// lines are skipped. Ids follow first appearance; duplicates collapse.
LabeledGraph read_edge_list(std::istream& in);
LabeledGraph read_edge_list(const std::filesystem::path& path);

/// Writes "u v" (u < v) per edge in lexicographic order, newline-terminated.
/// Isolated vertices are not representable.
void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list(const Graph& g, const std::filesystem::path& path);

}  // namespace anchoralign
