#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arcdef/arc.hpp"
#include "arcdef/expr.hpp"

namespace arcdef {

// ---------------------------------------------------------------------------
// Job files: a minimal INI-like format.
//
//   [ring]            generators = e          relations = e^3
//   [hypersurface]    variables = x, z        transverse = y
//                     phi = x*y - z^2
//   [arc]             x = t    z = 0    y = 0    N = 2
//   [deformation]     x = e*t^2   (series in t with ring-generator coefficients)
//   [flow]            component = x           f = e*t
//   [run]             command = model  N = 2  K = 2  T = 64  example = 1  r = 2
// ---------------------------------------------------------------------------

struct JobSpec {
  std::string command;
  uint32_t N = 4;
  uint32_t K = 3;
  std::size_t T = 64;
  std::optional<int> example;
  uint32_t r = 2;
  uint64_t seed = 0;

  TestRing::Ptr ring;  // null when the job has no [ring] section

  std::shared_ptr<Hypersurface> hyper;  // null when absent
  std::shared_ptr<BaseArc> arc;         // null when absent

  // Raw deformation expressions per u-variable, parsed against `ring` at T.
  std::vector<std::pair<std::string, std::string>> deformation;
  std::optional<std::pair<std::string, std::string>> flow;  // (component, f)
};

namespace detail {

struct IniSection {
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }
  std::string require(const std::string& key, const std::string& section) const {
    const std::string* v = find(key);
    if (!v)
      throw ParseError("missing key '" + key + "' in section [" + section + "]",
                       0, 0);
    return *v;
  }
};

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string item = trim(comma == std::string::npos
                                ? s.substr(pos)
                                : s.substr(pos, comma - pos));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline std::map<std::string, IniSection> parse_ini(const std::string& text) {
  std::map<std::string, IniSection> sections;
  std::string current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string line = trim(nl == std::string::npos ? text.substr(pos)
                                                    : text.substr(pos, nl - pos));
    ++line_no;
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("malformed section header", line_no, 1);
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) throw ParseError("empty section name", line_no, 1);
      if (sections.count(current))
        throw ParseError("duplicate section [" + current + "]", line_no, 1);
      sections[current];
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", line_no, 1);
    if (current.empty())
      throw ParseError("key outside of any section", line_no, 1);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no, 1);
    if (sections[current].find(key))
      throw ParseError("duplicate key '" + key + "' in [" + current + "]",
                       line_no, 1);
    sections[current].entries.emplace_back(key, value);
  }
  return sections;
}

inline uint64_t parse_uint(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(what + " must be a non-negative integer, got '" + s + "'",
                     0, 0);
  return std::stoull(s);
}

}  // namespace detail

inline TestRing::Ptr parse_ring_section(const detail::IniSection& sec) {
  std::vector<std::string> gens;
  if (const std::string* g = sec.find("generators"))
    gens = detail::split_list(*g);
  std::vector<Monomial> rels;
  if (const std::string* r = sec.find("relations")) {
    for (const auto& item : detail::split_list(*r)) {
      QPoly p = parse_poly(item, gens);
      if (p.terms().size() != 1 || p.terms().begin()->second != 1)
        throw ParseError("relation '" + item + "' must be a single monomial", 0, 0);
      rels.push_back(p.terms().begin()->first);
    }
  }
  if (!gens.empty() && rels.empty())
    throw ParseError("test-ring needs relations making every generator nilpotent",
                     0, 0);
  return TestRing::make(std::move(gens), std::move(rels));
}

inline JobSpec parse_job(const std::string& text) {
  auto sections = detail::parse_ini(text);
  JobSpec job;

  auto run_it = sections.find("run");
  if (run_it == sections.end())
    throw ParseError("missing mandatory section [run]", 0, 0);
  const detail::IniSection& run = run_it->second;
  job.command = run.require("command", "run");
  static const std::set<std::string> commands{
      "mult",  "lift",     "lift-arc",       "model",
      "flow",  "truncate", "verify-example", "selftest"};
  if (!commands.count(job.command))
    throw ParseError("unknown command '" + job.command + "'", 0, 0);
  if (const std::string* v = run.find("N"))
    job.N = static_cast<uint32_t>(detail::parse_uint(*v, "N"));
  if (const std::string* v = run.find("K"))
    job.K = static_cast<uint32_t>(detail::parse_uint(*v, "K"));
  if (const std::string* v = run.find("T"))
    job.T = detail::parse_uint(*v, "T");
  if (const std::string* v = run.find("r"))
    job.r = static_cast<uint32_t>(detail::parse_uint(*v, "r"));
  if (const std::string* v = run.find("seed"))
    job.seed = detail::parse_uint(*v, "seed");
  if (const std::string* v = run.find("example")) {
    job.example = static_cast<int>(detail::parse_uint(*v, "example"));
    if (*job.example < 1 || *job.example > 3)
      throw ParseError("example must be 1, 2, or 3", 0, 0);
  }
  if (job.T == 0 || job.K == 0)
    throw ParseError("parameters must be positive", 0, 0);

  if (auto it = sections.find("ring"); it != sections.end())
    job.ring = parse_ring_section(it->second);

  bool needs_geometry =
      job.command == "mult" || job.command == "lift" ||
      job.command == "lift-arc" || job.command == "model" ||
      job.command == "flow" || job.command == "truncate";
  bool example_driven = job.example.has_value();

  if (auto it = sections.find("hypersurface"); it != sections.end()) {
    const detail::IniSection& hs = it->second;
    std::vector<std::string> u_vars =
        detail::split_list(hs.require("variables", "hypersurface"));
    if (u_vars.empty())
      throw ParseError("hypersurface needs at least one variable", 0, 0);
    std::string z = hs.require("transverse", "hypersurface");
    std::vector<std::string> all = u_vars;
    all.push_back(z);
    QPoly phi = parse_poly(hs.require("phi", "hypersurface"), all);
    job.hyper = std::make_shared<Hypersurface>(u_vars, z, std::move(phi));
  } else if (needs_geometry && !example_driven) {
    throw ParseError("missing mandatory section [hypersurface]", 0, 0);
  }

  if (auto it = sections.find("arc"); it != sections.end()) {
    if (!job.hyper)
      throw ParseError("[arc] requires a [hypersurface] section", 0, 0);
    const detail::IniSection& as = it->second;
    uint32_t arcN = job.N;
    if (const std::string* v = as.find("N"))
      arcN = static_cast<uint32_t>(detail::parse_uint(*v, "arc N"));
    std::vector<std::string> tv{"t"};
    std::vector<QPoly> u_comp;
    for (const auto& u : job.hyper->u_vars())
      u_comp.push_back(parse_poly(as.require(u, "arc"), tv));
    QPoly z_comp(tv);
    if (const std::string* v = as.find(job.hyper->z_var()))
      z_comp = parse_poly(*v, tv);
    job.arc = std::make_shared<BaseArc>(*job.hyper, std::move(u_comp),
                                        std::move(z_comp), arcN);
  } else if (needs_geometry && !example_driven) {
    throw ParseError("missing mandatory section [arc]", 0, 0);
  }

  if (auto it = sections.find("deformation"); it != sections.end()) {
    // Keys are either u-variables (arc deformation series in t) or c_<i>_<j>
    // (curve deformation coefficients); the consuming command validates.
    for (const auto& [k, v] : it->second.entries)
      job.deformation.emplace_back(k, v);
  }

  if (auto it = sections.find("flow"); it != sections.end()) {
    const detail::IniSection& fs = it->second;
    job.flow = {fs.require("component", "flow"), fs.require("f", "flow")};
  }

  return job;
}

}  // namespace arcdef
