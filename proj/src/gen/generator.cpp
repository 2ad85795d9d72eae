#include "pddlforge/gen/generator.hpp"

#include <algorithm>
#include <set>

#include "pddlforge/pddl/state.hpp"

namespace pddlforge::gen {

using dpgc::Config;
using dpgc::ObjectPool;
using dpgc::PredicatePool;
using dpgc::Section;
using dpgc::UsageMode;

const std::vector<Symbol>& ObjectTable::of(const Symbol& pool) const {
  auto it = pools.find(pool);
  if (it == pools.end()) throw GenerationError("unknown object pool '" + pool.str() + "'");
  return it->second;
}

ObjectTable instantiate_objects(const Config& config) {
  ObjectTable table;
  std::map<Symbol, Symbol> owner;
  for (const auto& pool : config.object_pools) {
    auto names = pool.object_names();
    for (const auto& n : names) {
      auto [it, fresh] = owner.emplace(n, pool.id);
      if (!fresh) {
        throw GenerationError("object name '" + n.str() + "' produced by both '" + it->second.str() + "' and '" +
                              pool.id.str() + "'");
      }
      table.objects.push_back({n, pool.type});
    }
    table.pools.emplace(pool.id, std::move(names));
  }
  return table;
}

namespace {

class SectionSampler {
 public:
  SectionSampler(const Config& config, const ObjectTable& objects, Rng& rng)
      : config_(config), objects_(objects), rng_(rng) {}

  void sample_pool(const PredicatePool& pp, std::vector<pddl::Atom>& out) {
    // largest offset used with each (pool, label) in this predicate pool
    std::map<std::pair<Symbol, std::string>, size_t> max_offset;
    for (const auto& spec : pp.predicates) {
      for (const auto& sel : spec.args) {
        if (!sel.tag) continue;
        auto& m = max_offset[{sel.pool, sel.tag->label}];
        m = std::max(m, sel.tag->offset);
      }
    }

    std::map<std::pair<Symbol, std::string>, size_t> bound;
    for (const auto& spec : pp.predicates) {
      if (spec.probability < 1.0 && !rng_.bernoulli(spec.probability)) continue;
      for (size_t n = 0; n < spec.count; ++n) {
        pddl::Atom atom{spec.predicate, {}};
        for (const auto& sel : spec.args) {
          const ObjectPool& pool = *config_.find_pool(sel.pool);
          size_t index;
          if (!sel.tag) {
            index = draw(pool, pool.quantity);
          } else {
            std::pair<Symbol, std::string> key{sel.pool, sel.tag->label};
            auto it = bound.find(key);
            if (it == bound.end()) {
              size_t reach = max_offset[key];
              if (reach >= pool.quantity) {
                throw GenerationError("tag offset +" + std::to_string(reach) + " out of bounds for pool '" +
                                      pool.id.str() + "'");
              }
              it = bound.emplace(key, draw(pool, pool.quantity - reach)).first;
            }
            index = sel.tag->offset == 0 ? it->second : offset(pool, it->second + sel.tag->offset);
          }
          atom.args.push_back(objects_.of(pool.id)[index]);
        }
        out.push_back(std::move(atom));
      }
    }
  }

 private:
  struct PoolState {
    std::vector<bool> used;
    size_t cursor = 0;
  };

  PoolState& state(const ObjectPool& pool) {
    auto& s = state_[pool.id];
    if (s.used.empty()) s.used.assign(pool.quantity, false);
    return s;
  }

  // Draws an index per the pool's usage mode. Random and mutex draws stay below
  // `limit`; sequential pools ignore it and offsets are checked on use.
  size_t draw(const ObjectPool& pool, size_t limit) {
    switch (pool.usage) {
      case UsageMode::random:
        return static_cast<size_t>(rng_.below(limit));
      case UsageMode::mutex: {
        PoolState& s = state(pool);
        std::vector<size_t> free;
        for (size_t i = 0; i < limit; ++i) {
          if (!s.used[i]) free.push_back(i);
        }
        if (free.empty()) throw GenerationError("mutex pool '" + pool.id.str() + "' exhausted");
        size_t i = free[rng_.below(free.size())];
        s.used[i] = true;
        return i;
      }
      case UsageMode::sequential: {
        PoolState& s = state(pool);
        if (s.cursor >= pool.quantity) throw GenerationError("sequential pool '" + pool.id.str() + "' exhausted");
        return s.cursor++;
      }
    }
    return 0;
  }

  size_t offset(const ObjectPool& pool, size_t index) {
    if (index >= pool.quantity) {
      throw GenerationError("tag offset out of bounds: position " + std::to_string(index + 1) + " of pool '" +
                            pool.id.str() + "' with " + std::to_string(pool.quantity) + " objects");
    }
    if (pool.usage == UsageMode::mutex) {
      PoolState& s = state(pool);
      if (s.used[index]) {
        throw GenerationError("tag offset selects an already used object of mutex pool '" + pool.id.str() + "'");
      }
      s.used[index] = true;
    }
    return index;
  }

  const Config& config_;
  const ObjectTable& objects_;
  Rng& rng_;
  std::map<Symbol, PoolState> state_;
};

}  // namespace

std::vector<pddl::Atom> sample_section(const Config& config, Section section, const ObjectTable& objects, Rng& rng) {
  std::set<Symbol> excluded;
  for (const auto& g : config.mutex_groups) {
    if (g.section != section) continue;
    size_t chosen = rng.categorical(g.weights);
    for (size_t i = 0; i < g.members.size(); ++i) {
      if (i != chosen) excluded.insert(g.members[i]);
    }
  }

  std::vector<pddl::Atom> out;
  SectionSampler sampler(config, objects, rng);
  for (const auto& pp : config.section(section)) {
    if (!excluded.contains(pp.id)) sampler.sample_pool(pp, out);
  }
  return out;
}

pddl::Problem generate_problem(const pddl::Domain& domain, const Config& config, Rng& rng, const Symbol& name) {
  ObjectTable table = instantiate_objects(config);
  pddl::Problem p;
  p.name = name;
  p.domain = domain.name;
  for (const auto& o : table.objects) {
    if (!domain.find_constant(o.name)) p.objects.push_back(o);
  }

  p.init = config.constant_init;
  auto init = sample_section(config, Section::variable_init, table, rng);
  p.init.insert(p.init.end(), init.begin(), init.end());
  pddl::canonicalize_init(p.init);

  std::set<pddl::Atom> seen;
  for (auto& a : sample_section(config, Section::variable_goal, table, rng)) {
    if (seen.insert(a).second) p.goal.literals.push_back({std::move(a), false});
  }
  return p;
}

bool is_trivial(const pddl::Problem& problem) {
  return pddl::holds(pddl::initial_state(problem), problem.goal);
}

}  // namespace pddlforge::gen
