#include "pddlforge/pddl/serialize.hpp"

#include <algorithm>
#include <sstream>

namespace pddlforge::pddl {

namespace {

// `?a ?b - t ?c - u`, grouping consecutive names of equal type.
std::string typed_list(const std::vector<TypedName>& items, bool omit_object) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += items[i].name.str();
    bool last_of_group = i + 1 == items.size() || items[i + 1].type != items[i].type;
    if (last_of_group && !(omit_object && items[i].type == object_type())) {
      out += " - " + items[i].type.str();
    }
  }
  return out;
}

std::string conjunction(const std::vector<std::string>& parts) {
  if (parts.size() == 1) return parts.front();
  std::string out = "(and";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

std::vector<std::string> atom_parts(const std::vector<Atom>& adds, const std::vector<Atom>& dels) {
  std::vector<std::string> parts;
  for (const auto& a : adds) parts.push_back(a.str());
  for (const auto& a : dels) parts.push_back("(not " + a.str() + ")");
  return parts;
}

void write_effect(std::ostream& os, const Effect& e) {
  auto parts = atom_parts(e.adds, e.deletes);
  if (e.conditional.empty()) {
    os << conjunction(parts);
    return;
  }
  os << "(and";
  for (const auto& p : parts) os << "\n      " << p;
  for (const auto& ce : e.conditional) {
    os << "\n      (when " << to_string(ce.condition) << "\n        "
       << conjunction(atom_parts(ce.adds, ce.deletes)) << ")";
  }
  os << ")";
}

}  // namespace

std::string to_string(const Condition& condition) {
  std::vector<std::string> parts;
  for (const auto& l : condition.literals) parts.push_back(l.str());
  if (parts.empty()) return "(and)";
  return conjunction(parts);
}

std::string serialize_domain(const Domain& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& r : d.requirements) os << " :" << r;
    os << ")\n";
  }
  if (!d.types.empty()) os << "  (:types " << typed_list(d.types, false) << ")\n";
  if (!d.constants.empty()) os << "  (:constants " << typed_list(d.constants, false) << ")\n";
  if (!d.predicates.empty()) {
    os << "  (:predicates";
    for (const auto& p : d.predicates) {
      os << "\n    (" << p.name;
      if (!p.parameters.empty()) os << " " << typed_list(p.parameters, false);
      os << ")";
    }
    os << ")\n";
  }
  for (const auto& a : d.actions) {
    os << "  (:action " << a.name << "\n";
    os << "    :parameters (" << typed_list(a.parameters, false) << ")\n";
    os << "    :precondition " << to_string(a.precondition) << "\n";
    os << "    :effect ";
    write_effect(os, a.effect);
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

std::string serialize_problem(const Problem& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n";
  os << "  (:domain " << p.domain << ")\n";
  if (!p.objects.empty()) {
    // one line per type, types in order of first appearance
    std::vector<Symbol> order;
    for (const auto& o : p.objects) {
      if (std::find(order.begin(), order.end(), o.type) == order.end()) order.push_back(o.type);
    }
    os << "  (:objects";
    for (const auto& t : order) {
      os << "\n    ";
      bool first = true;
      for (const auto& o : p.objects) {
        if (o.type != t) continue;
        if (!first) os << ' ';
        os << o.name;
        first = false;
      }
      os << " - " << t;
    }
    os << ")\n";
  }
  os << "  (:init";
  for (const auto& a : p.init) os << "\n    " << a.str();
  os << ")\n";
  os << "  (:goal (and";
  for (const auto& l : p.goal.literals) os << "\n    " << l.str();
  os << "))\n";
  os << ")\n";
  return os.str();
}

}  // namespace pddlforge::pddl
