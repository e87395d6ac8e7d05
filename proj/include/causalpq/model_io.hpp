#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "causalpq/asgn.hpp"
#include "causalpq/discrete_cbn.hpp"

namespace causalpq {

// A network plus the external identity (name, node labels) used by file
// formats and benchmark reports. Vertices are dense 0-based ids internally;
// labels map them back.
struct NamedNetwork {
  std::string name;
  std::variant<DiscreteCbn, AsgnNetwork> payload;
  std::vector<std::string> node_names;
  // Discrete networks: per-node value labels, aligned with domain indices.
  std::vector<std::vector<std::string>> value_names;

  bool is_discrete() const { return std::holds_alternative<DiscreteCbn>(payload); }
  const DiscreteCbn& discrete() const { return std::get<DiscreteCbn>(payload); }
  const AsgnNetwork& asgn() const { return std::get<AsgnNetwork>(payload); }
  const Dag& dag() const;
  int n() const { return dag().n(); }
};

struct BifParseResult {
  NamedNetwork network;
  // One entry per CPT row whose published probabilities needed
  // renormalization (row sums off by more than 1e-9 but within 1e-3).
  std::vector<std::string> warnings;
};

// BIF 0.3 subset: `network`, discrete `variable` blocks, `probability`
// blocks in table or per-row conditional form. Syntax errors carry
// line:column positions.
BifParseResult parse_bif(const std::string& text);

// Versioned JSON round-trip for both network kinds; parse(serialize(x))
// reproduces every field bit-for-bit.
std::string serialize_network(const NamedNetwork& net);
NamedNetwork parse_network(const std::string& text);

std::string export_dot(const Dag& g, const std::vector<std::string>& names);

struct CurveRow {
  int n = 0;
  double c = 0.0;
  std::int64_t m = 0;
  int trials = 0;
  int successes = 0;
};

// CSV with header n,C,m,trials,successes,frequency.
std::string write_curve_csv(const std::vector<CurveRow>& rows);

// Text format: header "n <vertex count>", one "i j" edge per line.
std::string write_edge_list(const Dag& g);
Dag parse_edge_list(const std::string& text);

// Debugging dump: node, parent-config row index, probabilities.
std::string dump_cpt_csv(const DiscreteCbn& cbn);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace causalpq
