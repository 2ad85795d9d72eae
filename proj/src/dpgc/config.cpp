#include "pddlforge/dpgc/config.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include <json.hpp>

#include "pddlforge/pddl/parser.hpp"

namespace pddlforge::dpgc {

using nlohmann::ordered_json;
using pddl::Atom;

std::string_view to_string(UsageMode mode) {
  switch (mode) {
    case UsageMode::random: return "random";
    case UsageMode::mutex: return "mutex";
    case UsageMode::sequential: return "sequential";
  }
  return "?";
}

std::string_view to_string(Section section) {
  return section == Section::variable_init ? "variable_init" : "variable_goal";
}

std::vector<Symbol> ObjectPool::object_names() const {
  std::vector<Symbol> names;
  names.reserve(quantity);
  for (size_t i = 0; i < quantity; ++i) {
    int64_t index = naming.start + static_cast<int64_t>(i) * naming.step;
    names.emplace_back(naming.prefix + std::to_string(index));
  }
  return names;
}

namespace {

bool is_label(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

PoolSelector PoolSelector::parse(std::string_view text) {
  PoolSelector sel;
  auto dollar = text.find('$');
  std::string_view pool = text.substr(0, dollar);
  if (!Symbol::is_valid(pool) || pool.front() == '?') {
    throw Error("invalid pool id '" + std::string(pool) + "'");
  }
  sel.pool = Symbol(pool);
  if (dollar == std::string_view::npos) return sel;

  std::string_view rest = text.substr(dollar + 1);
  Tag tag;
  auto plus = rest.find('+');
  std::string_view label = rest.substr(0, plus);
  if (!is_label(label)) throw Error("invalid tag label in '" + std::string(text) + "'");
  tag.label = std::string(label);
  if (plus != std::string_view::npos) {
    std::string_view k = rest.substr(plus + 1);
    auto [end, ec] = std::from_chars(k.data(), k.data() + k.size(), tag.offset);
    if (k.empty() || ec != std::errc() || end != k.data() + k.size() || tag.offset == 0) {
      throw Error("tag offset must be a positive integer in '" + std::string(text) + "'");
    }
  }
  sel.tag = std::move(tag);
  return sel;
}

std::string PoolSelector::str() const {
  std::string s = pool.str();
  if (tag) {
    s += "$" + tag->label;
    if (tag->offset > 0) s += "+" + std::to_string(tag->offset);
  }
  return s;
}

const ObjectPool* Config::find_pool(const Symbol& id) const {
  for (const auto& p : object_pools) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const std::vector<PredicatePool>& Config::section(Section s) const {
  return s == Section::variable_init ? variable_init : variable_goal;
}

ConfigError::ConfigError(std::string path, const std::string& message)
    : Error(path + ": " + message), path_(std::move(path)) {}

namespace {

std::string at(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string at(const std::string& path, size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

std::string or_root(const std::string& path) { return path.empty() ? "$" : path; }

void expect_keys(const ordered_json& j, const std::string& path, std::initializer_list<std::string_view> required,
                 std::initializer_list<std::string_view> optional) {
  if (!j.is_object()) throw ConfigError(or_root(path), "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto known = [&](auto list) {
      return std::find(list.begin(), list.end(), it.key()) != list.end();
    };
    if (!known(required) && !known(optional)) throw ConfigError(at(path, it.key()), "unknown key");
  }
  for (auto key : required) {
    if (!j.contains(key)) throw ConfigError(at(path, key), "missing required key");
  }
}

const std::string& get_string(const ordered_json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get_ref<const std::string&>();
}

Symbol get_symbol(const ordered_json& j, const std::string& path) {
  const std::string& s = get_string(j, path);
  if (!Symbol::is_valid(s) || s.front() == '?') throw ConfigError(path, "invalid identifier '" + s + "'");
  return Symbol(s);
}

int64_t get_integer(const ordered_json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int64_t>();
}

size_t get_positive(const ordered_json& j, const std::string& path) {
  int64_t v = get_integer(j, path);
  if (v < 1) throw ConfigError(path, "expected a positive integer");
  return static_cast<size_t>(v);
}

double get_number(const ordered_json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

const ordered_json& get_array(const ordered_json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  return j;
}

ObjectPool parse_pool(const ordered_json& j, const std::string& path) {
  expect_keys(j, path, {"id", "type", "quantity", "naming"}, {"usage"});
  ObjectPool pool;
  pool.id = get_symbol(j["id"], at(path, "id"));
  pool.type = get_symbol(j["type"], at(path, "type"));
  pool.quantity = get_positive(j["quantity"], at(path, "quantity"));

  std::string npath = at(path, "naming");
  const auto& n = j["naming"];
  expect_keys(n, npath, {"prefix"}, {"start", "step"});
  pool.naming.prefix = get_string(n["prefix"], at(npath, "prefix"));
  if (pool.naming.prefix.empty() || !Symbol::is_valid(pool.naming.prefix) || pool.naming.prefix.front() == '?') {
    throw ConfigError(at(npath, "prefix"), "prefix must be a non-empty identifier");
  }
  if (n.contains("start")) {
    pool.naming.start = get_integer(n["start"], at(npath, "start"));
    if (pool.naming.start < 0) throw ConfigError(at(npath, "start"), "start must be non-negative");
  }
  if (n.contains("step")) pool.naming.step = static_cast<int64_t>(get_positive(n["step"], at(npath, "step")));

  if (j.contains("usage")) {
    const std::string& u = get_string(j["usage"], at(path, "usage"));
    if (u == "random") pool.usage = UsageMode::random;
    else if (u == "mutex") pool.usage = UsageMode::mutex;
    else if (u == "sequential") pool.usage = UsageMode::sequential;
    else throw ConfigError(at(path, "usage"), "usage must be one of random, mutex, sequential");
  }
  return pool;
}

PredicateSpec parse_spec(const ordered_json& j, const std::string& path, const Config& cfg,
                         std::set<std::pair<std::string, std::string>>& bound) {
  expect_keys(j, path, {"predicate", "args"}, {"probability", "count"});
  PredicateSpec spec;
  spec.predicate = get_symbol(j["predicate"], at(path, "predicate"));
  if (j.contains("probability")) {
    spec.probability = get_number(j["probability"], at(path, "probability"));
    if (!(spec.probability >= 0.0 && spec.probability <= 1.0)) {
      throw ConfigError(at(path, "probability"), "probability must be in [0, 1]");
    }
  }
  if (j.contains("count")) spec.count = get_positive(j["count"], at(path, "count"));

  std::string apath = at(path, "args");
  const auto& args = get_array(j["args"], apath);
  for (size_t i = 0; i < args.size(); ++i) {
    std::string p = at(apath, i);
    const std::string& text = get_string(args[i], p);
    PoolSelector sel;
    try {
      sel = PoolSelector::parse(text);
    } catch (const Error& e) {
      throw ConfigError(p, e.what());
    }
    if (!cfg.find_pool(sel.pool)) throw ConfigError(p, "unknown object pool '" + sel.pool.str() + "'");
    if (sel.tag) {
      std::pair<std::string, std::string> key{sel.pool.str(), sel.tag->label};
      if (sel.tag->offset == 0) {
        bound.insert(key);
      } else if (!bound.count(key)) {
        throw ConfigError(p, "dangling tag '" + text + "': no earlier '" + sel.pool.str() + "$" + sel.tag->label +
                                 "' in this predicate pool");
      }
    }
    spec.args.push_back(std::move(sel));
  }
  return spec;
}

std::vector<PredicatePool> parse_section(const ordered_json& j, const std::string& path, const Config& cfg) {
  std::vector<PredicatePool> pools;
  std::set<Symbol> ids;
  const auto& arr = get_array(j, path);
  for (size_t i = 0; i < arr.size(); ++i) {
    std::string p = at(path, i);
    expect_keys(arr[i], p, {"id", "predicates"}, {});
    PredicatePool pool;
    pool.id = get_symbol(arr[i]["id"], at(p, "id"));
    if (!ids.insert(pool.id).second) throw ConfigError(at(p, "id"), "duplicate predicate pool id '" + pool.id.str() + "'");
    std::string ppath = at(p, "predicates");
    const auto& preds = get_array(arr[i]["predicates"], ppath);
    if (preds.empty()) throw ConfigError(ppath, "predicate pool must not be empty");
    std::set<std::pair<std::string, std::string>> bound;
    for (size_t k = 0; k < preds.size(); ++k) {
      pool.predicates.push_back(parse_spec(preds[k], at(ppath, k), cfg, bound));
    }
    pools.push_back(std::move(pool));
  }
  return pools;
}

MutexGroup parse_group(const ordered_json& j, const std::string& path, const Config& cfg) {
  expect_keys(j, path, {"section", "members", "weights"}, {});
  MutexGroup g;
  const std::string& s = get_string(j["section"], at(path, "section"));
  if (s == "variable_init") g.section = Section::variable_init;
  else if (s == "variable_goal") g.section = Section::variable_goal;
  else throw ConfigError(at(path, "section"), "section must be variable_init or variable_goal");

  std::string mpath = at(path, "members");
  const auto& members = get_array(j["members"], mpath);
  if (members.size() < 2) throw ConfigError(mpath, "a mutex group needs at least two members");
  const auto& pools = cfg.section(g.section);
  for (size_t i = 0; i < members.size(); ++i) {
    std::string p = at(mpath, i);
    Symbol id = get_symbol(members[i], p);
    bool exists = std::any_of(pools.begin(), pools.end(), [&](const PredicatePool& pp) { return pp.id == id; });
    if (!exists) throw ConfigError(p, "unknown predicate pool '" + id.str() + "' in " + s);
    if (std::find(g.members.begin(), g.members.end(), id) != g.members.end()) {
      throw ConfigError(p, "duplicate member '" + id.str() + "'");
    }
    g.members.push_back(id);
  }

  std::string wpath = at(path, "weights");
  const auto& weights = get_array(j["weights"], wpath);
  if (weights.size() != members.size()) throw ConfigError(wpath, "weights must have one entry per member");
  for (size_t i = 0; i < weights.size(); ++i) {
    double w = get_number(weights[i], at(wpath, i));
    if (!(w > 0.0)) throw ConfigError(at(wpath, i), "weights must be positive");
    g.weights.push_back(w);
  }
  return g;
}

}  // namespace

Config parse_config(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  expect_keys(j, "", {"domain", "object_pools"},
              {"constant_init", "variable_init", "variable_goal", "mutex_groups"});

  Config cfg;
  cfg.domain = get_symbol(j["domain"], "domain");

  const auto& pools = get_array(j["object_pools"], "object_pools");
  for (size_t i = 0; i < pools.size(); ++i) {
    ObjectPool pool = parse_pool(pools[i], at("object_pools", i));
    if (cfg.find_pool(pool.id)) {
      throw ConfigError(at(at("object_pools", i), "id"), "duplicate object pool id '" + pool.id.str() + "'");
    }
    cfg.object_pools.push_back(std::move(pool));
  }

  if (j.contains("constant_init")) {
    const auto& atoms = get_array(j["constant_init"], "constant_init");
    for (size_t i = 0; i < atoms.size(); ++i) {
      std::string p = at("constant_init", i);
      const std::string& s = get_string(atoms[i], p);
      Atom atom;
      try {
        atom = pddl::parse_atom(s);
      } catch (const Error& e) {
        throw ConfigError(p, e.what());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(p, e.what());
      }
      if (!atom.is_ground()) throw ConfigError(p, "constant atoms must be ground");
      if (atom.predicate == Symbol::equality()) throw ConfigError(p, "equality atoms cannot be asserted");
      cfg.constant_init.push_back(std::move(atom));
    }
  }

  if (j.contains("variable_init")) cfg.variable_init = parse_section(j["variable_init"], "variable_init", cfg);
  if (j.contains("variable_goal")) cfg.variable_goal = parse_section(j["variable_goal"], "variable_goal", cfg);

  if (j.contains("mutex_groups")) {
    const auto& groups = get_array(j["mutex_groups"], "mutex_groups");
    std::map<std::pair<Section, Symbol>, size_t> owner;
    for (size_t i = 0; i < groups.size(); ++i) {
      std::string p = at("mutex_groups", i);
      MutexGroup g = parse_group(groups[i], p, cfg);
      for (size_t m = 0; m < g.members.size(); ++m) {
        auto [it, fresh] = owner.emplace(std::make_pair(g.section, g.members[m]), i);
        if (!fresh) {
          throw ConfigError(at(at(p, "members"), m),
                            "'" + g.members[m].str() + "' already belongs to mutex_groups[" +
                                std::to_string(it->second) + "]");
        }
      }
      cfg.mutex_groups.push_back(std::move(g));
    }
  }
  return cfg;
}

std::string serialize_config(const Config& c) {
  ordered_json j;
  j["domain"] = c.domain.str();
  j["object_pools"] = ordered_json::array();
  for (const auto& p : c.object_pools) {
    ordered_json pj;
    pj["id"] = p.id.str();
    pj["type"] = p.type.str();
    pj["quantity"] = p.quantity;
    pj["naming"] = {{"prefix", p.naming.prefix}, {"start", p.naming.start}, {"step", p.naming.step}};
    pj["usage"] = std::string(to_string(p.usage));
    j["object_pools"].push_back(std::move(pj));
  }
  j["constant_init"] = ordered_json::array();
  for (const auto& a : c.constant_init) j["constant_init"].push_back(a.str());

  auto section = [](const std::vector<PredicatePool>& pools) {
    ordered_json arr = ordered_json::array();
    for (const auto& pp : pools) {
      ordered_json preds = ordered_json::array();
      for (const auto& s : pp.predicates) {
        ordered_json args = ordered_json::array();
        for (const auto& a : s.args) args.push_back(a.str());
        preds.push_back({{"predicate", s.predicate.str()},
                         {"probability", s.probability},
                         {"count", s.count},
                         {"args", std::move(args)}});
      }
      arr.push_back({{"id", pp.id.str()}, {"predicates", std::move(preds)}});
    }
    return arr;
  };
  j["variable_init"] = section(c.variable_init);
  j["variable_goal"] = section(c.variable_goal);

  j["mutex_groups"] = ordered_json::array();
  for (const auto& g : c.mutex_groups) {
    ordered_json members = ordered_json::array();
    for (const auto& m : g.members) members.push_back(m.str());
    j["mutex_groups"].push_back(
        {{"section", std::string(to_string(g.section))}, {"members", std::move(members)}, {"weights", g.weights}});
  }
  return j.dump(2) + "\n";
}

std::string Diagnostic::str() const {
  return path + ": " + (severity == Severity::error ? "error" : "warning") + ": " + message;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

std::vector<Diagnostic> validate_against_domain(const Config& c, const pddl::Domain& d) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string path, std::string msg) { out.push_back({std::move(path), Severity::error, std::move(msg)}); };
  auto warning = [&](std::string path, std::string msg) {
    out.push_back({std::move(path), Severity::warning, std::move(msg)});
  };

  if (c.domain != d.name) error("domain", "config is for domain '" + c.domain.str() + "', not '" + d.name.str() + "'");

  // every name a generated problem can mention, with its type
  std::map<Symbol, Symbol> known;
  for (const auto& k : d.constants) known.emplace(k.name, k.type);
  std::map<Symbol, std::string> origin;
  for (size_t i = 0; i < c.object_pools.size(); ++i) {
    const auto& pool = c.object_pools[i];
    std::string path = at("object_pools", i);
    if (!d.has_type(pool.type)) {
      error(at(path, "type"), "type '" + pool.type.str() + "' is not declared in domain '" + d.name.str() + "'");
    }
    for (const auto& name : pool.object_names()) {
      if (auto o = origin.find(name); o != origin.end()) {
        error(at(path, "naming"), "object name '" + name.str() + "' is also produced by " + o->second);
        continue;
      }
      origin.emplace(name, path);
      if (const auto* k = d.find_constant(name)) {
        if (k->type != pool.type) {
          error(at(path, "naming"), "object name '" + name.str() + "' clashes with domain constant of type '" +
                                        k->type.str() + "'");
        }
        continue;
      }
      known.emplace(name, pool.type);
    }
  }

  for (size_t i = 0; i < c.constant_init.size(); ++i) {
    const Atom& a = c.constant_init[i];
    std::string path = at("constant_init", i);
    const auto* sig = d.find_predicate(a.predicate);
    if (!sig) {
      error(path, "predicate '" + a.predicate.str() + "' is not declared in the domain");
      continue;
    }
    if (sig->arity() != a.args.size()) {
      error(path, "predicate '" + a.predicate.str() + "' expects " + std::to_string(sig->arity()) + " arguments, got " +
                      std::to_string(a.args.size()));
      continue;
    }
    for (size_t k = 0; k < a.args.size(); ++k) {
      auto it = known.find(a.args[k]);
      if (it == known.end()) {
        error(path, "object '" + a.args[k].str() + "' is neither a pool object nor a domain constant");
      } else if (!d.is_subtype(it->second, sig->parameters[k].type)) {
        error(path, "object '" + a.args[k].str() + "' of type '" + it->second.str() + "' does not fit parameter " +
                        std::to_string(k + 1) + " of '" + a.predicate.str() + "' (" + sig->parameters[k].type.str() +
                        ")");
      }
    }
  }

  for (Section s : {Section::variable_init, Section::variable_goal}) {
    const auto& pools = c.section(s);
    for (size_t i = 0; i < pools.size(); ++i) {
      std::string ppath = at(at(std::string(to_string(s)), i), "predicates");
      for (size_t k = 0; k < pools[i].predicates.size(); ++k) {
        const auto& spec = pools[i].predicates[k];
        std::string path = at(ppath, k);
        const auto* sig = d.find_predicate(spec.predicate);
        if (!sig) {
          error(at(path, "predicate"), "predicate '" + spec.predicate.str() + "' is not declared in the domain");
          continue;
        }
        if (sig->arity() != spec.args.size()) {
          error(at(path, "args"), "predicate '" + spec.predicate.str() + "' expects " + std::to_string(sig->arity()) +
                                      " arguments, got " + std::to_string(spec.args.size()));
          continue;
        }
        for (size_t a = 0; a < spec.args.size(); ++a) {
          const auto& sel = spec.args[a];
          const ObjectPool* pool = c.find_pool(sel.pool);
          std::string apath = at(at(path, "args"), a);
          if (d.has_type(pool->type) && !d.is_subtype(pool->type, sig->parameters[a].type)) {
            error(apath, "pool '" + pool->id.str() + "' has type '" + pool->type.str() + "' but parameter " +
                             std::to_string(a + 1) + " of '" + spec.predicate.str() + "' is '" +
                             sig->parameters[a].type.str() + "'");
          }
          if (sel.tag && sel.tag->offset > 0) {
            if (sel.tag->offset >= pool->quantity) {
              error(apath, "offset +" + std::to_string(sel.tag->offset) + " exceeds pool '" + pool->id.str() +
                               "' of " + std::to_string(pool->quantity) + " objects");
            } else if (pool->usage != UsageMode::random) {
              warning(apath, "offset on " + std::string(to_string(pool->usage)) +
                                 " pool: bounds are checked at generation time");
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace pddlforge::dpgc
