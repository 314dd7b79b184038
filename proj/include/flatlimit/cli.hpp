#pragma once

// Front end for the `flatlimit` tool. Link with OpenSSL's libcrypto (the
// inputs digest is SHA-256).

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "flatlimit/chains.hpp"
#include "flatlimit/degeneration.hpp"
#include "flatlimit/errors.hpp"
#include "flatlimit/ideal.hpp"
#include "flatlimit/node.hpp"

namespace flatlimit::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "flatlimit/1";

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "gb",           "nf",          "member",         "quotient",          "saturate",      "eliminate",
      "intersect",    "colength",    "fiber",          "divisor-image",     "initial",       "relative-check",
      "limit",        "trivial-check", "critical-exponent", "perfect-check", "tor1",          "glue",
      "restrict",     "reduce",      "chain-check",    "stability-check",   "group-act"};
  return names;
}

/// A parsed job file.
struct Job {
  Ring ring;
  std::map<std::string, std::string> roles;  // role -> variable
  std::vector<std::pair<std::string, Ideal>> ideals;
  std::map<std::string, Polynomial> polys;
  std::vector<std::pair<std::string, std::vector<std::string>>> commands;

  std::optional<std::string> role(const std::string& r) const {
    auto it = roles.find(r);
    if (it == roles.end()) return std::nullopt;
    return it->second;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  return out;
}

inline std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

[[noreturn]] inline void job_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::JobError, "line " + std::to_string(line) + ": " + what);
}

inline bool valid_name(const std::string& n) {
  if (n.empty() || !(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_')) return false;
  for (char c : n)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace detail

/// Line-oriented job format:
///   ring t:param, y:divisor, x1, x2
///   ideal I = y^2 - t, x1
///   poly f = x1 - 1
///   cmd critical-exponent I
inline Job parse_job(std::string_view text) {
  std::optional<Ring> ring;
  std::map<std::string, std::string> roles;
  std::vector<std::pair<std::string, std::string>> ideal_text;
  std::vector<std::pair<std::string, std::string>> poly_text;
  std::vector<std::size_t> ideal_lines;
  std::vector<std::size_t> poly_lines;
  std::vector<std::pair<std::string, std::vector<std::string>>> commands;

  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    const auto space = line.find_first_of(" \t");
    const std::string keyword = line.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : detail::trim(line.substr(space));
    if (keyword == "ring") {
      if (ring) detail::job_error(lineno, "second ring declaration");
      std::vector<std::string> names;
      for (const auto& entry : detail::split(rest, ',')) {
        const auto colon = entry.find(':');
        const std::string name = detail::trim(entry.substr(0, colon));
        if (!detail::valid_name(name)) detail::job_error(lineno, "bad variable name '" + name + "'");
        if (colon != std::string::npos) {
          const std::string r = detail::trim(entry.substr(colon + 1));
          if (r != "param" && r != "divisor" && r != "y1" && r != "y2" && r != "transverse")
            detail::job_error(lineno, "unknown role '" + r + "'");
          if (r != "transverse" && !roles.emplace(r, name).second)
            detail::job_error(lineno, "role '" + r + "' assigned twice");
        }
        names.push_back(name);
      }
      try {
        ring = Ring(names);
      } catch (const Error& e) {
        detail::job_error(lineno, e.detail());
      }
    } else if (keyword == "ideal" || keyword == "poly") {
      const auto eq = rest.find('=');
      if (eq == std::string::npos) detail::job_error(lineno, "expected '<name> = ...'");
      const std::string name = detail::trim(rest.substr(0, eq));
      if (!detail::valid_name(name)) detail::job_error(lineno, "bad name '" + name + "'");
      auto& bucket = keyword == "ideal" ? ideal_text : poly_text;
      for (const auto& [n, body] : ideal_text)
        if (n == name) detail::job_error(lineno, "'" + name + "' defined twice");
      for (const auto& [n, body] : poly_text)
        if (n == name) detail::job_error(lineno, "'" + name + "' defined twice");
      bucket.emplace_back(name, detail::trim(rest.substr(eq + 1)));
      (keyword == "ideal" ? ideal_lines : poly_lines).push_back(lineno);
    } else if (keyword == "cmd") {
      auto w = detail::words(rest);
      if (w.empty()) detail::job_error(lineno, "cmd needs a command name");
      const std::string name = w.front();
      w.erase(w.begin());
      commands.emplace_back(name, std::move(w));
    } else {
      detail::job_error(lineno, "unknown keyword '" + keyword + "'");
    }
  }
  if (!ring) throw Error(ErrorCode::JobError, "missing ring declaration");

  Job job{*ring, std::move(roles), {}, {}, std::move(commands)};
  for (std::size_t i = 0; i < ideal_text.size(); ++i) {
    const auto& [name, body] = ideal_text[i];
    try {
      // "0" or an empty list is the zero ideal.
      job.ideals.emplace_back(name, body.empty() ? Ideal::zero(job.ring) : Ideal::parse(job.ring, body));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(ideal_lines[i]) + ": " + e.detail(), e.index());
    }
  }
  for (std::size_t i = 0; i < poly_text.size(); ++i) {
    const auto& [name, body] = poly_text[i];
    try {
      job.polys.emplace(name, parse_polynomial(body, job.ring));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(poly_lines[i]) + ": " + e.detail(), e.index());
    }
  }
  return job;
}

inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

inline Json ideal_json(const Ideal& ideal) {
  Json arr = Json::array();
  for (const auto& g : format_ideal(ideal)) arr.push_back(g);
  return arr;
}

inline Json ring_json(const Ring& ring) {
  Json arr = Json::array();
  for (const auto& n : ring.names()) arr.push_back(n);
  return arr;
}

inline Json colength_json(const Colength& c) { return c ? Json(*c) : Json("infinite"); }

inline Json record_json(const LimitRecord& r) {
  Json j;
  j["exponent"] = r.exponent.to_string();
  j["param"] = r.param;
  j["coord"] = r.coord;
  j["ring"] = ring_json(r.substituted.ring());
  j["substituted"] = ideal_json(r.substituted);
  j["saturated"] = ideal_json(r.saturated);
  j["limit"] = ideal_json(r.limit);
  j["divisor_image_of_limit"] = ideal_json(r.divisor_image_of_limit);
  Json c;
  c["checked"] = r.certificate.checked;
  c["passed"] = r.certificate.passed;
  c["special"] = colength_json(r.certificate.special);
  c["at_infinity"] = colength_json(r.certificate.at_infinity);
  c["generic"] = colength_json(r.certificate.generic);
  c["sample"] = r.certificate.sample.to_string();
  j["certificate"] = c;
  return j;
}

struct Options {
  bool verify = false;
  unsigned jobs = 1;
  std::string format = "json";
  std::optional<std::uint64_t> max_degree;
};

/// Executes one command against a parsed job; returns {result, trace}.
class Runner {
 public:
  Runner(const Job& job, const Options& opts, std::vector<std::string> args) : job_(job), opts_(opts) {
    for (auto& a : args) {
      if (auto eq = a.find('='); eq != std::string::npos) keys_[a.substr(0, eq)] = a.substr(eq + 1);
      else positional_.push_back(std::move(a));
    }
  }

  std::pair<Json, Json> run(const std::string& command) {
    Json trace;
    Json result = dispatch(command, trace);
    return {std::move(result), std::move(trace)};
  }

 private:
  // Argument access. Missing positional ideals default to the declared ones
  // in order.
  const std::string& positional(std::size_t i, const char* what) {
    if (i < positional_.size()) return positional_[i];
    if (i < job_.ideals.size() && positional_.empty()) return job_.ideals[i].first;
    throw Error(ErrorCode::JobError, std::string("missing argument: ") + what);
  }
  const Ideal& ideal(const std::string& name) {
    for (const auto& [n, i] : job_.ideals)
      if (n == name) return i;
    throw Error(ErrorCode::JobError, "undefined ideal '" + name + "'");
  }
  const Ideal& ideal_at(std::size_t i) { return ideal(positional(i, "ideal")); }
  Polynomial poly(const std::string& text) {
    if (auto it = job_.polys.find(text); it != job_.polys.end()) return it->second;
    return parse_polynomial(text, job_.ring);
  }
  Polynomial poly_at(std::size_t i) {
    if (i >= positional_.size()) throw Error(ErrorCode::JobError, "missing polynomial argument");
    return poly(positional_[i]);
  }
  std::optional<std::string> key(const std::string& k) const {
    auto it = keys_.find(k);
    if (it == keys_.end()) return std::nullopt;
    return it->second;
  }
  std::string role(const std::string& r) const {
    if (auto v = job_.role(r)) return *v;
    throw Error(ErrorCode::JobError, "command needs a variable with role '" + r + "'");
  }
  Rational rational_key(const std::string& k) const {
    auto v = key(k);
    if (!v) throw Error(ErrorCode::JobError, "missing " + k + "=p/q");
    try {
      return Rational::parse(*v);
    } catch (const Error&) {
      throw Error(ErrorCode::SyntaxError, "bad rational '" + *v + "' for " + k);
    }
  }
  int component_key() const {
    const auto v = key("component").value_or("1");
    if (v != "1" && v != "2") throw Error(ErrorCode::JobError, "component must be 1 or 2");
    return v == "1" ? 1 : 2;
  }
  FamilyIdeal family_at(std::size_t i) { return FamilyIdeal(ideal_at(i), role("param"), role("divisor")); }
  NodeIdeal node_at(std::size_t i) { return NodeIdeal(ideal_at(i), role("y1"), role("y2")); }
  ScanOptions scan_options() const {
    ScanOptions s;
    s.jobs = opts_.jobs;
    s.use_walls = key("fallback").value_or("false") != "true";
    return s;
  }

  void verify(bool ok, const std::string& what) {
    if (opts_.verify && !ok) throw Error(ErrorCode::VerificationFailure, what);
  }
  void verify_relative_equivalence(const FamilyIdeal& f) {
    if (!opts_.verify) return;
    verify(is_relative(fiber_at_zero(f), f.divisor()) == is_relative_family(f),
           "relative-fibre test and divisor-image test disagree");
  }
  void verify_tor(const NodeIdeal& n) {
    if (!opts_.verify) return;
    verify(is_perfect_node(n) == (tor1_node(n, 1).zero() && tor1_node(n, 2).zero()),
           "perfectness and the Tor¹ presentation disagree");
  }

  std::vector<ChainComponent> chain_components() {
    const std::string coord = role("divisor");
    Ring ring = job_.ring;
    if (auto p = job_.role("param")) ring = ring.without(*p);
    std::vector<ChainComponent> comps;
    const std::size_t n = positional_.empty() ? job_.ideals.size() : positional_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& name = positional_.empty() ? job_.ideals[i].first : positional_[i];
      if (positional_.empty() && name == key("end")) continue;
      comps.push_back({ideal(name).in_ring(ring), coord});
    }
    if (comps.empty()) throw Error(ErrorCode::JobError, "chain needs at least one component");
    return comps;
  }
  std::optional<Ideal> chain_end() {
    auto e = key("end");
    if (!e) return std::nullopt;
    Ring ring = job_.ring.without(role("divisor"));
    if (auto p = job_.role("param")) ring = ring.without(*p);
    return ideal(*e).in_ring(ring);
  }
  static Json chain_json(const ChainIdeal& c) {
    Json arr = Json::array();
    for (const auto& comp : c.components()) arr.push_back(Json{{"coord", comp.coord}, {"ideal", ideal_json(comp.ideal)}});
    return arr;
  }

  Json dispatch(const std::string& cmd, Json& trace) {
    Json r;
    if (cmd == "gb") {
      const auto order_name = key("order").value_or("grevlex");
      MonomialOrder order = MonomialOrder::grevlex();
      if (order_name == "lex") order = MonomialOrder::lex();
      else if (order_name != "grevlex") throw Error(ErrorCode::JobError, "order must be lex or grevlex");
      const auto& basis = ideal_at(0).basis(order);
      verify(basis.verify(), "basis failed its S-polynomial certificate");
      Json arr = Json::array();
      for (const auto& g : basis.elements()) arr.push_back(format_canonical(g));
      r["basis"] = arr;
    } else if (cmd == "nf") {
      r["normal_form"] = format_canonical(ideal(positional(1, "ideal")).basis().normal_form(poly_at(0)));
    } else if (cmd == "member") {
      r["member"] = contains(ideal(positional(1, "ideal")), poly_at(0));
    } else if (cmd == "quotient") {
      r["ideal"] = ideal_json(ideal_quotient(ideal_at(0), poly_at(1)));
    } else if (cmd == "saturate") {
      r["ideal"] = ideal_json(saturate(ideal_at(0), poly_at(1)));
    } else if (cmd == "eliminate") {
      std::vector<std::string> drop(positional_.begin() + (positional_.empty() ? 0 : 1), positional_.end());
      for (const auto& d : drop)
        if (!job_.ring.contains(d)) throw Error(ErrorCode::UnknownVariable, "unknown variable '" + d + "'");
      const Ideal e = eliminate(ideal_at(0), drop);
      r["ring"] = ring_json(e.ring());
      r["ideal"] = ideal_json(e);
    } else if (cmd == "intersect") {
      r["ideal"] = ideal_json(intersect(ideal_at(0), ideal_at(1)));
    } else if (cmd == "colength") {
      r["colength"] = colength_json(colength(ideal_at(0)));
    } else if (cmd == "fiber") {
      const Rational value = key("value") ? rational_key("value") : Rational(0);
      const Ideal f = fiber_at(family_at(0), value);
      r["ring"] = ring_json(f.ring());
      r["ideal"] = ideal_json(f);
    } else if (cmd == "divisor-image") {
      const Ideal d = divisor_image(family_at(0));
      r["ring"] = ring_json(d.ring());
      r["ideal"] = ideal_json(d);
    } else if (cmd == "initial") {
      const Ideal l = initial_ideal_t(ideal_at(0), role("param"));
      r["ring"] = ring_json(l.ring());
      r["ideal"] = ideal_json(l);
    } else if (cmd == "relative-check") {
      if (job_.role("param")) {
        const auto f = family_at(0);
        const bool family_test = is_relative_family(f);
        const bool fibre_test = is_relative(fiber_at_zero(f), f.divisor());
        verify(family_test == fibre_test, "relative-fibre test and divisor-image test disagree");
        r["relative"] = family_test;
        r["fiber_relative"] = fibre_test;
      } else {
        r["relative"] = is_relative(ideal_at(0), role("divisor"));
      }
    } else if (cmd == "limit") {
      const auto f = family_at(0);
      const auto rec = flat_limit(f, WeightExponent(rational_key("a")));
      r = record_json(rec);
    } else if (cmd == "trivial-check") {
      r["trivial"] = is_trivial_limit(family_at(0), WeightExponent(rational_key("a")));
    } else if (cmd == "critical-exponent") {
      const auto f = family_at(0);
      verify_relative_equivalence(f);
      const auto ce = critical_exponent(f, scan_options());
      verify(is_relative(ce.record.limit, ce.record.coord) && ce.trivial_above,
             "critical limit is not relative or the supra-critical limit is not trivial");
      r["a_star"] = ce.a_star.to_string();
      r["limit"] = ideal_json(ce.record.limit);
      r["trivial_above"] = ce.trivial_above;
      Json scan = Json::array();
      for (const auto& p : ce.scan)
        scan.push_back(Json{{"a", p.a.to_string()},
                            {"wall", p.wall},
                            {"relative", p.relative},
                            {"trivial", p.trivial},
                            {"interior", p.interior}});
      trace["scan"] = scan;
      trace["used_fallback"] = ce.used_fallback;
      trace["record"] = record_json(ce.record);
    } else if (cmd == "perfect-check") {
      const auto n = node_at(0);
      verify_tor(n);
      const bool perfect = is_perfect_node(n);
      r["perfect"] = perfect;
      if (!perfect) {
        for (int c : {1, 2}) {
          const auto tor = tor1_node(n, c);
          const auto excess = tor.excess();
          if (excess.empty()) continue;
          Json list = Json::array();
          for (const auto& g : excess) list.push_back(format_canonical(g));
          r["witness"] = Json{{"component", c}, {"quotient_excess", list}};
          break;
        }
      }
    } else if (cmd == "tor1") {
      const auto n = node_at(0);
      const int c = component_key();
      const auto tor = tor1_node(n, c);
      r["component"] = c;
      r["kernel"] = ideal_json(tor.kernel);
      r["boundary"] = ideal_json(tor.boundary);
      r["zero"] = tor.zero();
    } else if (cmd == "glue") {
      const std::string y1 = role("y1");
      const std::string y2 = role("y2");
      const Ideal first = ideal_at(0).in_ring(job_.ring.without(y2));
      const Ideal second = ideal_at(1).in_ring(job_.ring.without(y1));
      const auto glued = glue_node(first, y1, second, y2);
      const NodeIdeal n(glued.ideal().in_ring(job_.ring), y1, y2);
      const bool perfect = is_perfect_node(n);
      if (opts_.verify) {
        verify_tor(n);
        verify(ideals_equal(restrict_to_component(n, 1), first) && ideals_equal(restrict_to_component(n, 2), second),
               "glued ideal does not restrict to its inputs");
      }
      r["ideal"] = ideal_json(n.ideal());
      r["perfect"] = perfect;
    } else if (cmd == "restrict") {
      const auto n = node_at(0);
      verify_tor(n);
      const Ideal res = restrict_to_component(n, component_key());
      r["ring"] = ring_json(res.ring());
      r["ideal"] = ideal_json(res);
    } else if (cmd == "reduce") {
      const auto f = family_at(0);
      verify_relative_equivalence(f);
      const auto red = semistable_reduce(f, scan_options());
      verify(replay_trace(f, red.trace), "trace replay does not reproduce the recorded limits");
      r["length"] = red.chain.length();
      r["chain"] = chain_json(red.chain);
      r["stable"] = is_stable(red.chain);
      r["total_base_change"] = red.trace.total_base_change;
      Json steps = Json::array();
      for (const auto& s : red.trace.steps)
        steps.push_back(Json{{"component", s.component},
                             {"exponent", s.exponent.to_string()},
                             {"q", s.q},
                             {"cumulative", s.cumulative.to_string()},
                             {"record", record_json(s.record)}});
      trace["steps"] = steps;
    } else if (cmd == "chain-check") {
      const auto chain = build_chain(chain_components(), chain_end());
      r["valid"] = true;
      r["length"] = chain.length();
    } else if (cmd == "stability-check") {
      const auto chain = build_chain(chain_components(), chain_end());
      Json trivial = Json::array();
      for (std::size_t k = 1; k < chain.components().size(); ++k)
        if (is_trivial_component(chain.component(k))) trivial.push_back(k);
      r["stable"] = trivial.empty();
      r["trivial_components"] = trivial;
    } else if (cmd == "group-act") {
      const auto chain = build_chain(chain_components(), chain_end());
      std::vector<Rational> sigma;
      for (const auto& s : detail::split(key("sigma").value_or(""), ',')) {
        if (s.empty()) continue;
        try {
          sigma.push_back(Rational::parse(s));
        } catch (const Error&) {
          throw Error(ErrorCode::SyntaxError, "bad rational '" + s + "' in sigma");
        }
      }
      const auto moved = apply_group_element(chain, GroupElement(sigma));
      const bool before = is_stable(chain);
      const bool after = is_stable(moved);
      verify(before == after, "group action changed stability");
      r["chain"] = chain_json(moved);
      r["stable_before"] = before;
      r["stable_after"] = after;
    } else {
      throw Error(ErrorCode::JobError, "unknown command '" + cmd + "'");
    }
    return r;
  }

  const Job& job_;
  const Options& opts_;
  std::vector<std::string> positional_;
  std::map<std::string, std::string> keys_;
};

inline void render_text(const Json& j, std::ostream& out, const std::string& indent = "") {
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      out << indent << k << ":\n";
      render_text(v, out, indent + "  ");
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      out << indent << k << ":\n";
      for (const auto& item : v) {
        out << indent << "  -\n";
        render_text(item, out, indent + "    ");
      }
    } else if (v.is_string()) {
      out << indent << k << ": " << v.get<std::string>() << "\n";
    } else {
      out << indent << k << ": " << v.dump() << "\n";
    }
  }
}

inline void emit(const Json& j, const Options& opts, std::ostream& out) {
  if (opts.format == "text") render_text(j, out);
  else out << j.dump(2) << "\n";
}

/// Full command-line entry point. Exit codes: 0 success, 1 usage or parse
/// error, 2 domain error.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flat limits, critical exponents and semistable reduction on local models", "flatlimit"};
  Options opts;
  std::string command;
  std::string job_path;
  std::vector<std::string> args;
  app.add_flag("--verify", opts.verify, "Run redundant cross-checks and fail on disagreement");
  app.add_option("--jobs", opts.jobs, "Parallel exponent evaluations")->check(CLI::Range(1U, 256U));
  app.add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--max-degree", opts.max_degree, "Abort Groebner computations past this degree")
      ->check(CLI::PositiveNumber);
  app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(command_names()));
  app.add_option("job", job_path, "Job file")->required();
  app.add_option("args", args, "Command arguments (ideal names, polynomials, key=value)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "flatlimit: " << e.what() << "\n";
    return 1;
  }

  Json doc;
  doc["schema"] = kSchema;
  doc["command"] = command;
  auto fail = [&](const Error& e) {
    Json error{{"name", e.name()}, {"message", e.detail()}};
    if (e.index()) error["index"] = *e.index();
    doc["error"] = error;
    emit(doc, opts, out);
    err << "flatlimit: " << e.what() << "\n";
    return is_parse_error(e.code()) ? 1 : 2;
  };

  std::ifstream file(job_path, std::ios::binary);
  if (!file) {
    err << "flatlimit: cannot read job file '" << job_path << "'\n";
    return 1;
  }
  std::stringstream buffer;
  buffer << file.rdbuf();
  const std::string text = buffer.str();

  std::string digest_input = command + "\n" + text;
  for (const auto& a : args) digest_input += "\n" + a;
  doc["inputs_digest"] = sha256_hex(digest_input);

  try {
    std::optional<ScopedEngineLimits> guard;
    if (opts.max_degree) guard.emplace(EngineLimits{*opts.max_degree});
    const Job job = parse_job(text);
    if (args.empty())
      for (const auto& [name, a] : job.commands)
        if (name == command) {
          args = a;
          break;
        }
    Runner runner(job, opts, args);
    auto [result, trace] = runner.run(command);
    doc["result"] = std::move(result);
    if (!trace.is_null()) doc["trace"] = std::move(trace);
  } catch (const Error& e) {
    return fail(e);
  }
  emit(doc, opts, out);
  return 0;
}

}  // namespace flatlimit::cli
