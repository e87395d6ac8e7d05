#include "causalpq/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "causalpq/errors.hpp"

namespace causalpq {

namespace {

constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------- BIF lexer

struct Token {
  enum class Kind { kWord, kPunct, kEnd } kind = Kind::kEnd;
  std::string text;
  int line = 0;
  int col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ValidationError("BIF syntax error at " + std::to_string(at.line) + ":" +
                          std::to_string(at.col) + ": " + msg);
  }

 private:
  void advance() {
    skip_space();
    current_ = Token{};
    current_.line = line_;
    current_.col = col_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::Kind::kEnd;
      current_.text = "<end of input>";
      return;
    }
    const char c = text_[pos_];
    if (std::string("{}()[],;|").find(c) != std::string::npos) {
      current_.kind = Token::Kind::kPunct;
      current_.text = std::string(1, c);
      bump();
      return;
    }
    current_.kind = Token::Kind::kWord;
    while (pos_ < text_.size()) {
      const char w = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(w)) ||
          std::string("{}()[],;|").find(w) != std::string::npos)
        break;
      current_.text.push_back(w);
      bump();
    }
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        bump();
        bump();
        while (pos_ + 1 < text_.size() &&
               !(text_[pos_] == '*' && text_[pos_ + 1] == '/'))
          bump();
        if (pos_ + 1 >= text_.size())
          throw ValidationError("BIF syntax error: unterminated comment");
        bump();
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_;
};

struct BifVariable {
  std::string name;
  std::vector<std::string> values;
};

double parse_probability(const Token& t, Lexer& lex) {
  char* end = nullptr;
  const double v = std::strtod(t.text.c_str(), &end);
  if (end == t.text.c_str() || *end != '\0')
    lex.fail("expected a number, got '" + t.text + "'", t);
  if (v < 0.0) lex.fail("negative probability", t);
  return v;
}

Token expect_word(Lexer& lex, const std::string& what) {
  const Token t = lex.next();
  if (t.kind != Token::Kind::kWord)
    lex.fail("expected " + what + ", got '" + t.text + "'", t);
  return t;
}

void expect_punct(Lexer& lex, char c) {
  const Token t = lex.next();
  if (t.kind != Token::Kind::kPunct || t.text[0] != c)
    lex.fail(std::string("expected '") + c + "', got '" + t.text + "'", t);
}

bool peek_punct(const Lexer& lex, char c) {
  return lex.peek().kind == Token::Kind::kPunct && lex.peek().text[0] == c;
}

void skip_property(Lexer& lex) {
  // "property" ... ";"
  while (true) {
    const Token t = lex.next();
    if (t.kind == Token::Kind::kEnd) lex.fail("unterminated property", t);
    if (t.kind == Token::Kind::kPunct && t.text[0] == ';') return;
  }
}

}  // namespace

const Dag& NamedNetwork::dag() const {
  return is_discrete() ? discrete().dag() : asgn().dag();
}

BifParseResult parse_bif(const std::string& text) {
  Lexer lex(text);
  std::vector<std::string> warnings;

  Token t = expect_word(lex, "'network'");
  if (t.text != "network") lex.fail("expected 'network'", t);
  std::string net_name = expect_word(lex, "network name").text;
  expect_punct(lex, '{');
  while (!peek_punct(lex, '}')) {
    const Token p = lex.next();
    if (p.kind == Token::Kind::kEnd) lex.fail("unterminated network block", p);
    if (p.kind == Token::Kind::kWord && p.text == "property") skip_property(lex);
  }
  expect_punct(lex, '}');

  std::vector<BifVariable> variables;
  std::map<std::string, int> index_of;
  struct ProbBlock {
    int child;
    std::vector<int> parents;  // declared order
    std::vector<std::pair<std::vector<int>, std::vector<double>>> rows;
    std::optional<std::vector<double>> table;
    Token at;
  };
  std::vector<ProbBlock> blocks;

  while (lex.peek().kind != Token::Kind::kEnd) {
    const Token head = lex.next();
    if (head.kind != Token::Kind::kWord)
      lex.fail("expected 'variable' or 'probability'", head);

    if (head.text == "variable") {
      BifVariable var;
      var.name = expect_word(lex, "variable name").text;
      if (index_of.count(var.name))
        lex.fail("duplicate variable '" + var.name + "'", head);
      expect_punct(lex, '{');
      while (!peek_punct(lex, '}')) {
        const Token item = lex.next();
        if (item.kind == Token::Kind::kEnd) lex.fail("unterminated variable block", item);
        if (item.kind != Token::Kind::kWord)
          lex.fail("unexpected '" + item.text + "' in variable block", item);
        if (item.text == "property") {
          skip_property(lex);
          continue;
        }
        if (item.text != "type")
          lex.fail("unexpected '" + item.text + "' in variable block", item);
        const Token kind = expect_word(lex, "variable type");
        if (kind.text != "discrete")
          throw ValidationError("unsupported variable type '" + kind.text +
                                "' (only discrete variables are supported)");
        expect_punct(lex, '[');
        const Token count = expect_word(lex, "domain size");
        const int declared = std::atoi(count.text.c_str());
        expect_punct(lex, ']');
        expect_punct(lex, '{');
        while (true) {
          var.values.push_back(expect_word(lex, "domain value").text);
          if (peek_punct(lex, ',')) {
            lex.next();
            continue;
          }
          break;
        }
        expect_punct(lex, '}');
        expect_punct(lex, ';');
        if (declared != static_cast<int>(var.values.size()))
          lex.fail("declared domain size " + count.text + " but " +
                       std::to_string(var.values.size()) + " values listed",
                   count);
      }
      expect_punct(lex, '}');
      if (var.values.size() < 2)
        throw ValidationError("variable '" + var.name + "' needs at least 2 values");
      index_of[var.name] = static_cast<int>(variables.size());
      variables.push_back(std::move(var));
      continue;
    }

    if (head.text != "probability")
      lex.fail("expected 'variable' or 'probability', got '" + head.text + "'", head);

    ProbBlock block;
    block.at = head;
    expect_punct(lex, '(');
    const Token child = expect_word(lex, "variable name");
    if (!index_of.count(child.text))
      lex.fail("unknown variable '" + child.text + "'", child);
    block.child = index_of[child.text];
    if (peek_punct(lex, '|')) {
      lex.next();
      while (true) {
        const Token parent = expect_word(lex, "parent name");
        if (!index_of.count(parent.text))
          lex.fail("unknown variable '" + parent.text + "'", parent);
        block.parents.push_back(index_of[parent.text]);
        if (peek_punct(lex, ',')) {
          lex.next();
          continue;
        }
        break;
      }
    }
    expect_punct(lex, ')');
    expect_punct(lex, '{');
    while (!peek_punct(lex, '}')) {
      const Token item = lex.peek();
      if (item.kind == Token::Kind::kEnd) lex.fail("unterminated probability block", item);
      if (item.kind == Token::Kind::kWord && item.text == "property") {
        lex.next();
        skip_property(lex);
        continue;
      }
      if (item.kind == Token::Kind::kWord && item.text == "table") {
        lex.next();
        std::vector<double> values;
        while (true) {
          values.push_back(parse_probability(expect_word(lex, "probability"), lex));
          if (peek_punct(lex, ',')) {
            lex.next();
            continue;
          }
          break;
        }
        expect_punct(lex, ';');
        block.table = std::move(values);
        continue;
      }
      if (peek_punct(lex, '(')) {
        lex.next();
        std::vector<int> config;
        for (std::size_t k = 0; k < block.parents.size(); ++k) {
          const Token value = expect_word(lex, "parent value");
          const BifVariable& parent = variables[block.parents[k]];
          const auto it =
              std::find(parent.values.begin(), parent.values.end(), value.text);
          if (it == parent.values.end())
            lex.fail("value '" + value.text + "' not in domain of '" + parent.name + "'",
                     value);
          config.push_back(static_cast<int>(it - parent.values.begin()));
          if (k + 1 < block.parents.size()) expect_punct(lex, ',');
        }
        expect_punct(lex, ')');
        std::vector<double> values;
        while (true) {
          values.push_back(parse_probability(expect_word(lex, "probability"), lex));
          if (peek_punct(lex, ',')) {
            lex.next();
            continue;
          }
          break;
        }
        expect_punct(lex, ';');
        block.rows.emplace_back(std::move(config), std::move(values));
        continue;
      }
      lex.fail("unexpected '" + item.text + "' in probability block", item);
    }
    expect_punct(lex, '}');
    blocks.push_back(std::move(block));
  }

  const int n = static_cast<int>(variables.size());
  if (n == 0) throw ValidationError("BIF file declares no variables");

  std::vector<Edge> edges;
  std::vector<char> has_block(n, 0);
  for (const ProbBlock& block : blocks) {
    if (has_block[block.child])
      throw ValidationError("duplicate probability block for '" +
                            variables[block.child].name + "'");
    has_block[block.child] = 1;
    for (int p : block.parents) edges.emplace_back(p, block.child);
  }
  for (int v = 0; v < n; ++v)
    if (!has_block[v])
      throw ValidationError("missing probability block for '" + variables[v].name + "'");

  Dag dag(n, std::move(edges));
  std::vector<int> domains(n);
  for (int v = 0; v < n; ++v) domains[v] = static_cast<int>(variables[v].values.size());

  // Rebase each block onto the internal row convention: parents ascending,
  // lowest-indexed parent varying fastest.
  std::vector<std::vector<std::vector<double>>> cpts(n);
  for (const ProbBlock& block : blocks) {
    const int child = block.child;
    const int d = domains[child];
    const std::vector<int>& internal_parents = dag.parents(child);
    std::int64_t nrows = 1;
    std::vector<std::int64_t> stride_of(n, 0);
    for (int p : internal_parents) {
      stride_of[p] = nrows;
      nrows *= domains[p];
    }
    std::vector<std::vector<double>> rows(nrows);

    auto place_row = [&](std::int64_t row, std::vector<double> values,
                         const std::string& where) {
      if (static_cast<int>(values.size()) != d)
        throw ValidationError("probability block for '" + variables[child].name +
                              "': row " + where + " lists " +
                              std::to_string(values.size()) + " values, domain has " +
                              std::to_string(d));
      double sum = 0.0;
      for (double x : values) sum += x;
      if (std::abs(sum - 1.0) > 1e-3)
        throw ValidationError("probability block for '" + variables[child].name +
                              "': row " + where + " sums to " + std::to_string(sum));
      if (std::abs(sum - 1.0) > 1e-9) {
        for (double& x : values) x /= sum;
        char sum_text[32];
        std::snprintf(sum_text, sizeof sum_text, "%.10g", sum);
        warnings.push_back("renormalized '" + variables[child].name + "' row " +
                           where + " (published sum " + sum_text + ")");
      }
      if (!rows[row].empty())
        throw ValidationError("probability block for '" + variables[child].name +
                              "': duplicate row " + where);
      rows[row] = std::move(values);
    };

    // Local lambda capturing `warnings`.
    if (block.table) {
      if (block.parents.empty()) {
        place_row(0, *block.table, "table");
      } else {
        // Flattened conditional table: rows in declared parent order with the
        // last declared parent varying fastest.
        std::int64_t expected = nrows * d;
        if (static_cast<std::int64_t>(block.table->size()) != expected)
          throw ValidationError("probability block for '" + variables[child].name +
                                "': table lists " + std::to_string(block.table->size()) +
                                " values, expected " + std::to_string(expected));
        std::vector<int> config(block.parents.size(), 0);
        std::int64_t offset = 0;
        while (true) {
          std::int64_t row = 0;
          for (std::size_t k = 0; k < block.parents.size(); ++k)
            row += stride_of[block.parents[k]] * config[k];
          place_row(row,
                    std::vector<double>(block.table->begin() + offset,
                                        block.table->begin() + offset + d),
                    "table@" + std::to_string(offset));
          offset += d;
          int k = static_cast<int>(config.size()) - 1;
          while (k >= 0) {
            if (++config[k] < domains[block.parents[k]]) break;
            config[k] = 0;
            --k;
          }
          if (k < 0) break;
        }
      }
    }
    for (const auto& [config, values] : block.rows) {
      std::int64_t row = 0;
      std::string where = "(";
      for (std::size_t k = 0; k < block.parents.size(); ++k) {
        row += stride_of[block.parents[k]] * config[k];
        where += (k ? "," : "") + variables[block.parents[k]].values[config[k]];
      }
      where += ")";
      place_row(row, values, where);
    }
    for (std::int64_t r = 0; r < nrows; ++r)
      if (rows[r].empty())
        throw ValidationError("probability block for '" + variables[child].name +
                              "': parent configuration " + std::to_string(r) +
                              " has no row");
    cpts[child] = std::move(rows);
  }

  NamedNetwork net{net_name, DiscreteCbn(std::move(dag), std::move(domains),
                                         std::move(cpts)),
                   {}, {}};
  for (const BifVariable& var : variables) {
    net.node_names.push_back(var.name);
    net.value_names.push_back(var.values);
  }
  BifParseResult result{std::move(net), std::move(warnings)};
  return result;
}

// ------------------------------------------------------------ JSON schemas

std::string serialize_network(const NamedNetwork& net) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = net.name;
  j["nodes"] = nlohmann::json::array();
  const Dag& dag = net.dag();
  for (int v = 0; v < dag.n(); ++v) {
    nlohmann::json node;
    node["name"] = v < static_cast<int>(net.node_names.size())
                       ? net.node_names[v]
                       : "X" + std::to_string(v);
    if (net.is_discrete()) {
      if (v < static_cast<int>(net.value_names.size()) &&
          !net.value_names[v].empty()) {
        node["values"] = net.value_names[v];
      } else {
        std::vector<std::string> values;
        for (int x = 0; x < net.discrete().domain_size(v); ++x)
          values.push_back("v" + std::to_string(x));
        node["values"] = values;
      }
    }
    j["nodes"].push_back(node);
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : dag.edges()) j["edges"].push_back({a, b});

  if (net.is_discrete()) {
    j["kind"] = "discrete";
    nlohmann::json cpts = nlohmann::json::array();
    for (int v = 0; v < dag.n(); ++v) {
      const Cpt& t = net.discrete().cpt(v);
      nlohmann::json rows = nlohmann::json::array();
      for (std::int64_t r = 0; r < t.rows; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int x = 0; x < t.domain; ++x) row.push_back(t.prob(r, x));
        rows.push_back(row);
      }
      cpts.push_back({{"node", v}, {"rows", rows}});
    }
    j["cpts"] = std::move(cpts);
  } else {
    const AsgnNetwork& a = net.asgn();
    j["kind"] = "asgn";
    nlohmann::json weights = nlohmann::json::array();
    for (const auto& [i, t] : dag.edges())
      weights.push_back({i, t, a.weight(t, i)});
    j["weights"] = std::move(weights);
    j["noise_variances"] = a.noise_variances();
    j["noise_kind"] = a.noise_kind() == NoiseKind::kGaussian ? "gaussian" : "uniform";
    if (a.intervention_variances())
      j["intervention_variances"] = *a.intervention_variances();
  }
  return j.dump(2) + "\n";
}

NamedNetwork parse_network(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("network JSON does not parse: ") + e.what());
  }
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion)
      throw ValidationError("unsupported schema_version " + std::to_string(version) +
                            " (this build reads version " +
                            std::to_string(kSchemaVersion) + ")");
    const std::string kind = j.at("kind").get<std::string>();
    const int n = static_cast<int>(j.at("nodes").size());
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges"))
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    Dag dag(n, std::move(edges));

    const std::string name = j.value("name", "");
    std::vector<std::string> node_names;
    for (const auto& node : j.at("nodes"))
      node_names.push_back(node.at("name").get<std::string>());

    if (kind == "discrete") {
      std::vector<std::vector<std::string>> value_names;
      std::vector<int> domains(n);
      for (int v = 0; v < n; ++v) {
        const auto& node = j.at("nodes").at(v);
        value_names.push_back(node.at("values").get<std::vector<std::string>>());
        domains[v] = static_cast<int>(value_names.back().size());
      }
      std::vector<std::vector<std::vector<double>>> cpts(n);
      for (const auto& entry : j.at("cpts")) {
        const int v = entry.at("node").get<int>();
        if (v < 0 || v >= n) throw ValidationError("cpts: node index out of range");
        cpts[v] = entry.at("rows").get<std::vector<std::vector<double>>>();
      }
      return NamedNetwork{name,
                          DiscreteCbn(std::move(dag), std::move(domains),
                                      std::move(cpts)),
                          std::move(node_names), std::move(value_names)};
    }
    if (kind == "asgn") {
      std::vector<double> weights(static_cast<std::size_t>(n) * n, 0.0);
      for (const auto& w : j.at("weights")) {
        const int i = w.at(0).get<int>();
        const int t = w.at(1).get<int>();
        if (i < 0 || i >= n || t < 0 || t >= n)
          throw ValidationError("weights: node index out of range");
        weights[static_cast<std::size_t>(t) * n + i] = w.at(2).get<double>();
      }
      const auto variances = j.at("noise_variances").get<std::vector<double>>();
      const std::string noise = j.value("noise_kind", "gaussian");
      std::optional<std::vector<double>> nu2;
      if (j.contains("intervention_variances"))
        nu2 = j.at("intervention_variances").get<std::vector<double>>();
      return NamedNetwork{name,
                          AsgnNetwork(std::move(dag), std::move(weights), variances,
                                      noise == "uniform" ? NoiseKind::kUniform
                                                         : NoiseKind::kGaussian,
                                      std::move(nu2)),
                          std::move(node_names),
                          {}};
    }
    throw ValidationError("unknown network kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("network JSON is malformed: ") + e.what());
  }
}

// ----------------------------------------------------------- plain formats

std::string export_dot(const Dag& g, const std::vector<std::string>& names) {
  auto label = [&](int v) {
    return v < static_cast<int>(names.size()) ? names[v] : "X" + std::to_string(v);
  };
  std::string out = "digraph g {\n";
  for (int v = 0; v < g.n(); ++v) out += "  \"" + label(v) + "\";\n";
  for (const auto& [a, b] : g.edges())
    out += "  \"" + label(a) + "\" -> \"" + label(b) + "\";\n";
  out += "}\n";
  return out;
}

std::string write_curve_csv(const std::vector<CurveRow>& rows) {
  std::string out = "n,C,m,trials,successes,frequency\n";
  char buffer[160];
  for (const CurveRow& row : rows) {
    if (row.trials < 1)
      throw ValidationError("curve row with zero trials");
    const double freq =
        static_cast<double>(row.successes) / static_cast<double>(row.trials);
    std::snprintf(buffer, sizeof buffer, "%d,%.17g,%lld,%d,%d,%.17g\n", row.n, row.c,
                  static_cast<long long>(row.m), row.trials, row.successes, freq);
    out += buffer;
  }
  return out;
}

std::string write_edge_list(const Dag& g) {
  std::string out = "n " + std::to_string(g.n()) + "\n";
  for (const auto& [a, b] : g.edges())
    out += std::to_string(a) + " " + std::to_string(b) + "\n";
  return out;
}

Dag parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  int n = 0;
  if (!(in >> header >> n) || header != "n")
    throw ValidationError("edge list must start with a 'n <count>' header");
  std::vector<Edge> edges;
  int a = 0, b = 0;
  while (in >> a >> b) edges.emplace_back(a, b);
  if (!in.eof() && in.fail()) {
    in.clear();
    std::string tail;
    in >> tail;
    throw ValidationError("edge list has a malformed entry near '" + tail + "'");
  }
  return Dag(n, std::move(edges));
}

std::string dump_cpt_csv(const DiscreteCbn& cbn) {
  std::string out = "node,parent_config,probabilities\n";
  char buffer[40];
  for (int v = 0; v < cbn.n(); ++v) {
    const Cpt& t = cbn.cpt(v);
    for (std::int64_t r = 0; r < t.rows; ++r) {
      out += std::to_string(v) + "," + std::to_string(r);
      for (int x = 0; x < t.domain; ++x) {
        std::snprintf(buffer, sizeof buffer, ",%.17g", t.prob(r, x));
        out += buffer;
      }
      out += "\n";
    }
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed while reading '" + path + "'");
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace causalpq
