#include "ufl/instance.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include "ufl/common.hpp"

namespace ufl {

void Instance::validate() const {
  if (dim < 1) throw input_error("instance dimension must be >= 1");
  if (facilities.empty()) throw input_error("instance has no facilities");
  if (clients.empty()) throw input_error("instance has no clients");
  std::unordered_set<int> seen;
  for (const auto& f : facilities) {
    if (!(f.open_cost >= 0.0) || !std::isfinite(f.open_cost))
      throw input_error("facility open cost must be finite and nonnegative");
    if (static_cast<int>(f.location.size()) != dim)
      throw input_error("facility point dimension mismatch");
    for (double c : f.location)
      if (!std::isfinite(c)) throw input_error("facility coordinate not finite");
    if (!seen.insert(f.id).second)
      throw input_error("duplicate facility id " + std::to_string(f.id));
  }
  seen.clear();
  for (const auto& j : clients) {
    if (static_cast<int>(j.location.size()) != dim)
      throw input_error("client point dimension mismatch");
    for (double c : j.location)
      if (!std::isfinite(c)) throw input_error("client coordinate not finite");
    if (!seen.insert(j.id).second)
      throw input_error("duplicate client id " + std::to_string(j.id));
  }
}

std::string save_instance(const Instance& inst) {
  std::ostringstream out;
  out << "UFL 1\n";
  out << "dim " << inst.dim << "\n";
  out << "facilities " << inst.facilities.size() << "\n";
  for (const auto& f : inst.facilities) {
    out << f.id << " " << format_double(f.open_cost);
    for (double c : f.location) out << " " << format_double(c);
    out << "\n";
  }
  out << "clients " << inst.clients.size() << "\n";
  for (const auto& j : inst.clients) {
    out << j.id;
    for (double c : j.location) out << " " << format_double(c);
    out << "\n";
  }
  return out.str();
}

namespace {

// Reads the next non-comment, non-blank line; returns false at EOF.
bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
  return false;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::string expect_keyword_line(std::istream& in, const std::string& kw) {
  std::string line;
  if (!next_line(in, line)) throw input_error("unexpected end of instance file, expected '" + kw + "'");
  auto toks = split_ws(line);
  if (toks.size() != 2 || toks[0] != kw)
    throw input_error("expected '" + kw + " <n>', got '" + line + "'");
  return toks[1];
}

}  // namespace

Instance load_instance(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw input_error("empty instance file");
  {
    auto toks = split_ws(line);
    if (toks.size() != 2 || toks[0] != "UFL" || toks[1] != "1")
      throw input_error("expected header 'UFL 1', got '" + line + "'");
  }
  Instance inst;
  inst.dim = static_cast<int>(parse_int(expect_keyword_line(in, "dim")));
  if (inst.dim < 1) throw input_error("instance dimension must be >= 1");

  long long nf = parse_int(expect_keyword_line(in, "facilities"));
  if (nf < 0) throw input_error("negative facility count");
  inst.facilities.reserve(static_cast<std::size_t>(nf));
  for (long long i = 0; i < nf; ++i) {
    if (!next_line(in, line)) throw input_error("unexpected end of file in facility list");
    auto toks = split_ws(line);
    if (static_cast<int>(toks.size()) != 2 + inst.dim)
      throw input_error("facility line has wrong field count: '" + line + "'");
    Facility f;
    f.id = static_cast<int>(parse_int(toks[0]));
    f.open_cost = parse_double(toks[1]);
    f.location.reserve(inst.dim);
    for (int k = 0; k < inst.dim; ++k) f.location.push_back(parse_double(toks[2 + k]));
    inst.facilities.push_back(std::move(f));
  }

  long long nc = parse_int(expect_keyword_line(in, "clients"));
  if (nc < 0) throw input_error("negative client count");
  inst.clients.reserve(static_cast<std::size_t>(nc));
  for (long long j = 0; j < nc; ++j) {
    if (!next_line(in, line)) throw input_error("unexpected end of file in client list");
    auto toks = split_ws(line);
    if (static_cast<int>(toks.size()) != 1 + inst.dim)
      throw input_error("client line has wrong field count: '" + line + "'");
    Client c;
    c.id = static_cast<int>(parse_int(toks[0]));
    c.location.reserve(inst.dim);
    for (int k = 0; k < inst.dim; ++k) c.location.push_back(parse_double(toks[1 + k]));
    inst.clients.push_back(std::move(c));
  }

  if (next_line(in, line))
    throw input_error("trailing content in instance file: '" + line + "'");
  inst.validate();
  return inst;
}

Instance load_instance_string(const std::string& text) {
  std::istringstream in(text);
  return load_instance(in);
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open instance file: " + path);
  return load_instance(in);
}

void save_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write instance file: " + path);
  out << save_instance(inst);
}

}  // namespace ufl
