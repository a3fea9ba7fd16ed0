#include "excinet/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>
#include <vector>

namespace excinet {

namespace {

// A parsed right-hand side: scalar, flat array, or array of arrays.
struct Value {
  int line = 0;
  std::variant<double, std::vector<double>, std::vector<std::vector<double>>>
      data;
};

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

void skip_space(const std::string& s, std::size_t& pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
}

double parse_number(const std::string& s, std::size_t& pos, int line) {
  skip_space(s, pos);
  const std::size_t start = pos;
  while (pos < s.size() &&
         (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '+' ||
          s[pos] == '-' || s[pos] == '.' || s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
  }
  if (pos == start) fail(line, "expected a number");
  double value = 0.0;
  const auto res = std::from_chars(s.data() + start, s.data() + pos, value);
  if (res.ec != std::errc() || res.ptr != s.data() + pos) {
    fail(line, "malformed number '" + s.substr(start, pos - start) + "'");
  }
  return value;
}

// The whole file is tokenized into key = value entries. Arrays may continue
// over several physical lines; logical lines are joined until brackets
// balance.
std::map<std::string, Value> tokenize(const std::string& text) {
  std::map<std::string, Value> entries;
  std::istringstream stream(text);
  std::string physical;
  int line_no = 0;
  while (std::getline(stream, physical)) {
    ++line_no;
    const int start_line = line_no;
    if (auto hash = physical.find('#'); hash != std::string::npos) {
      physical.erase(hash);
    }
    std::string logical = physical;
    auto depth = [](const std::string& s) {
      long d = 0;
      for (char c : s) {
        if (c == '[') ++d;
        if (c == ']') --d;
      }
      return d;
    };
    while (depth(logical) > 0 && std::getline(stream, physical)) {
      ++line_no;
      if (auto hash = physical.find('#'); hash != std::string::npos) {
        physical.erase(hash);
      }
      logical += ' ';
      logical += physical;
    }
    if (depth(logical) != 0) fail(start_line, "unbalanced brackets");

    std::size_t pos = 0;
    skip_space(logical, pos);
    if (pos == logical.size()) continue;  // blank or comment-only line

    const std::size_t key_start = pos;
    while (pos < logical.size() &&
           (std::isalnum(static_cast<unsigned char>(logical[pos])) ||
            logical[pos] == '_')) {
      ++pos;
    }
    const std::string key = logical.substr(key_start, pos - key_start);
    if (key.empty()) fail(start_line, "expected a key");
    skip_space(logical, pos);
    if (pos >= logical.size() || logical[pos] != '=') {
      fail(start_line, "expected '=' after key '" + key + "'");
    }
    ++pos;
    skip_space(logical, pos);
    if (pos >= logical.size()) fail(start_line, "missing value for '" + key + "'");

    Value value;
    value.line = start_line;
    if (logical[pos] != '[') {
      value.data = parse_number(logical, pos, start_line);
    } else {
      ++pos;
      skip_space(logical, pos);
      if (pos < logical.size() && logical[pos] == '[') {
        // array of arrays
        std::vector<std::vector<double>> rows;
        while (true) {
          skip_space(logical, pos);
          if (pos >= logical.size()) fail(start_line, "unterminated array");
          if (logical[pos] == ']') {
            ++pos;
            break;
          }
          if (logical[pos] == ',') {
            ++pos;
            continue;
          }
          if (logical[pos] != '[') fail(start_line, "expected '[' for a row");
          ++pos;
          std::vector<double> row;
          while (true) {
            skip_space(logical, pos);
            if (pos >= logical.size()) fail(start_line, "unterminated row");
            if (logical[pos] == ']') {
              ++pos;
              break;
            }
            if (logical[pos] == ',') {
              ++pos;
              continue;
            }
            row.push_back(parse_number(logical, pos, start_line));
          }
          rows.push_back(std::move(row));
        }
        value.data = std::move(rows);
      } else {
        std::vector<double> items;
        while (true) {
          skip_space(logical, pos);
          if (pos >= logical.size()) fail(start_line, "unterminated array");
          if (logical[pos] == ']') {
            ++pos;
            break;
          }
          if (logical[pos] == ',') {
            ++pos;
            continue;
          }
          items.push_back(parse_number(logical, pos, start_line));
        }
        value.data = std::move(items);
      }
    }
    skip_space(logical, pos);
    if (pos != logical.size()) {
      fail(start_line, "trailing characters after value for '" + key + "'");
    }
    if (entries.count(key)) fail(start_line, "duplicate key '" + key + "'");
    entries.emplace(key, std::move(value));
  }
  return entries;
}

const Value& require_key(const std::map<std::string, Value>& entries,
                         const std::string& key) {
  auto it = entries.find(key);
  if (it == entries.end()) {
    throw ConfigError("config: missing required field '" + key + "'");
  }
  return it->second;
}

double scalar(const std::map<std::string, Value>& entries,
              const std::string& key) {
  const Value& v = require_key(entries, key);
  if (!std::holds_alternative<double>(v.data)) {
    fail(v.line, "field '" + key + "' must be a scalar");
  }
  return std::get<double>(v.data);
}

int integer(const std::map<std::string, Value>& entries,
            const std::string& key) {
  const Value& v = require_key(entries, key);
  const double x = scalar(entries, key);
  if (x != static_cast<double>(static_cast<long long>(x))) {
    fail(v.line, "field '" + key + "' must be an integer");
  }
  return static_cast<int>(x);
}

RealVector vector_field(const std::map<std::string, Value>& entries,
                        const std::string& key) {
  const Value& v = require_key(entries, key);
  if (!std::holds_alternative<std::vector<double>>(v.data)) {
    fail(v.line, "field '" + key + "' must be a flat array");
  }
  const auto& items = std::get<std::vector<double>>(v.data);
  RealVector out(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) out[i] = items[i];
  return out;
}

// Shortest representation that parses back to the same double.
std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace

NetworkSpec parse_network_config(const std::string& text) {
  const auto entries = tokenize(text);
  static const char* known[] = {
      "n_sites",       "initial_site",  "sink_sites",
      "sink_rate",     "hbar",          "local_energies",
      "dephasing_rates", "loss_rates",  "couplings"};
  for (const auto& [key, value] : entries) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(value.line, "unknown field '" + key + "'");
  }

  NetworkSpec spec;
  spec.n_sites = integer(entries, "n_sites");
  spec.initial_site = integer(entries, "initial_site");
  spec.sink_rate = scalar(entries, "sink_rate");
  spec.hbar = scalar(entries, "hbar");
  spec.local_energies = vector_field(entries, "local_energies");
  spec.dephasing_rates = vector_field(entries, "dephasing_rates");
  spec.loss_rates = vector_field(entries, "loss_rates");

  const RealVector sinks = vector_field(entries, "sink_sites");
  const Value& sv = require_key(entries, "sink_sites");
  spec.sink_sites.clear();
  for (Eigen::Index i = 0; i < sinks.size(); ++i) {
    if (sinks[i] != static_cast<double>(static_cast<long long>(sinks[i]))) {
      fail(sv.line, "sink_sites entries must be integers");
    }
    spec.sink_sites.push_back(static_cast<int>(sinks[i]));
  }

  const Value& cv = require_key(entries, "couplings");
  if (!std::holds_alternative<std::vector<std::vector<double>>>(cv.data)) {
    fail(cv.line, "field 'couplings' must be an array of rows");
  }
  const auto& rows = std::get<std::vector<std::vector<double>>>(cv.data);
  if (static_cast<int>(rows.size()) != spec.n_sites) {
    fail(cv.line, "couplings must have n_sites rows");
  }
  spec.couplings.resize(spec.n_sites, spec.n_sites);
  for (int i = 0; i < spec.n_sites; ++i) {
    if (static_cast<int>(rows[i].size()) != spec.n_sites) {
      fail(cv.line, "couplings row " + std::to_string(i + 1) +
                        " must have n_sites entries");
    }
    for (int j = 0; j < spec.n_sites; ++j) spec.couplings(i, j) = rows[i][j];
  }

  spec.validate();
  return spec;
}

NetworkSpec load_network_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("config: cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_network_config(buffer.str());
}

std::string dump_network_config(const NetworkSpec& spec) {
  spec.validate();
  std::string out;
  auto vector_line = [&](const std::string& key, const RealVector& v) {
    out += key + " = [";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (i) out += ", ";
      out += format_number(v[i]);
    }
    out += "]\n";
  };
  out += "n_sites = " + std::to_string(spec.n_sites) + "\n";
  out += "initial_site = " + std::to_string(spec.initial_site) + "\n";
  out += "sink_sites = [";
  for (std::size_t i = 0; i < spec.sink_sites.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(spec.sink_sites[i]);
  }
  out += "]\n";
  out += "sink_rate = " + format_number(spec.sink_rate) + "\n";
  out += "hbar = " + format_number(spec.hbar) + "\n";
  vector_line("local_energies", spec.local_energies);
  vector_line("dephasing_rates", spec.dephasing_rates);
  vector_line("loss_rates", spec.loss_rates);
  out += "couplings = [\n";
  for (int i = 0; i < spec.n_sites; ++i) {
    out += "  [";
    for (int j = 0; j < spec.n_sites; ++j) {
      if (j) out += ", ";
      out += format_number(spec.couplings(i, j));
    }
    out += (i + 1 < spec.n_sites) ? "],\n" : "]\n";
  }
  out += "]\n";
  return out;
}

}  // namespace excinet
