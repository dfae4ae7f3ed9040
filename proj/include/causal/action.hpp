#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "parser.hpp"
#include "semantics.hpp"

namespace causal {

struct FluentLiteral {
  std::string fluent;
  bool positive = true;
  friend bool operator==(const FluentLiteral&, const FluentLiteral&) = default;
};

struct Effect {
  std::vector<FluentLiteral> pre;   // empty means true
  std::vector<FluentLiteral> post;
};

struct Occurrence {
  std::string action;
  std::size_t time = 0;
  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

// Every action takes one time unit; times run 0..horizon.
struct ActionDomain {
  std::vector<std::string> fluents;
  std::vector<std::string> actions;
  std::map<std::string, std::vector<Effect>> effects;
  std::vector<Occurrence> occurrences;
  std::vector<FluentLiteral> init;
  std::size_t horizon = 0;
};

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string timed_atom(const std::string& name, std::size_t t) { return name + "_" + std::to_string(t); }

inline void validate(const ActionDomain& d) {
  std::set<std::string> names;
  for (const auto* group : {&d.fluents, &d.actions})
    for (const auto& n : *group) {
      if (!is_identifier(n) || n == "true" || n == "false") throw DomainError("invalid name '" + n + "'");
      if (!names.insert(n).second) throw DomainError("name '" + n + "' declared twice");
    }
  auto fluent = [&](const FluentLiteral& l) {
    if (std::find(d.fluents.begin(), d.fluents.end(), l.fluent) == d.fluents.end())
      throw DomainError("undeclared fluent '" + l.fluent + "'");
  };
  for (const auto& [a, effs] : d.effects) {
    if (std::find(d.actions.begin(), d.actions.end(), a) == d.actions.end())
      throw DomainError("effect for undeclared action '" + a + "'");
    for (const auto& e : effs) {
      std::for_each(e.pre.begin(), e.pre.end(), fluent);
      std::for_each(e.post.begin(), e.post.end(), fluent);
    }
  }
  for (const auto& o : d.occurrences) {
    if (std::find(d.actions.begin(), d.actions.end(), o.action) == d.actions.end())
      throw DomainError("occurrence of undeclared action '" + o.action + "'");
    if (o.time >= d.horizon)
      throw DomainError("occurrence " + o.action + "@" + std::to_string(o.time) + " is not before the horizon");
  }
  for (const auto& l : d.init) {
    fluent(l);
    if (std::find(d.init.begin(), d.init.end(), FluentLiteral{l.fluent, !l.positive}) != d.init.end())
      throw DomainError("inconsistent initial state for '" + l.fluent + "'");
  }
}

inline Universe domain_universe(const ActionDomain& d) {
  std::vector<std::string> atoms;
  for (const auto& f : d.fluents)
    for (std::size_t t = 0; t <= d.horizon; ++t) atoms.push_back(timed_atom(f, t));
  for (const auto& a : d.actions)
    for (std::size_t t = 0; t < d.horizon; ++t) atoms.push_back(timed_atom(a, t));
  return Universe(atoms);
}

namespace detail {
inline Formula literal_at(const FluentLiteral& l, std::size_t t) {
  Formula a = Formula::atom(timed_atom(l.fluent, t));
  return l.positive ? a : Formula::negation(a);
}
inline std::vector<Formula> literals_at(const std::vector<FluentLiteral>& ls, std::size_t t) {
  std::vector<Formula> out;
  for (const auto& l : ls) out.push_back(literal_at(l, t));
  return out;
}
}  // namespace detail

// Rules in order: effects, occurrences, non-occurrences, persistence, initial
// state. Non-occurring action instances get ¬a_t ▷ ¬a_t so that false action
// atoms are explained too.
inline CausalTheory compile_domain(const ActionDomain& d) {
  validate(d);
  CausalTheory theory(domain_universe(d));
  for (const auto& a : d.actions) {
    auto it = d.effects.find(a);
    if (it == d.effects.end()) continue;
    for (const auto& e : it->second)
      for (std::size_t t = 0; t < d.horizon; ++t) {
        auto body = detail::literals_at(e.pre, t);
        body.push_back(Formula::atom(timed_atom(a, t)));
        theory.add({conjoin(body), conjoin(detail::literals_at(e.post, t + 1))});
      }
  }
  for (const auto& o : d.occurrences) {
    Formula a = Formula::atom(timed_atom(o.action, o.time));
    theory.add({a, a});
  }
  for (const auto& a : d.actions)
    for (std::size_t t = 0; t < d.horizon; ++t)
      if (std::find(d.occurrences.begin(), d.occurrences.end(), Occurrence{a, t}) == d.occurrences.end()) {
        Formula n = Formula::negation(Formula::atom(timed_atom(a, t)));
        theory.add({n, n});
      }
  for (const auto& f : d.fluents)
    for (std::size_t t = 0; t < d.horizon; ++t)
      for (bool positive : {true, false}) {
        Formula now = detail::literal_at({f, positive}, t), next = detail::literal_at({f, positive}, t + 1);
        theory.add({Formula::conjunction(now, next), next});
      }
  for (const auto& l : d.init) {
    Formula f = detail::literal_at(l, 0);
    theory.add({f, f});
  }
  return theory;
}

struct History {
  std::vector<std::string> fluents;
  std::vector<std::string> actions;
  std::size_t horizon = 0;
  Model model;

  bool fluent(const std::string& f, std::size_t t) const { return model[timed_atom(f, t)]; }
  bool occurs(const std::string& a, std::size_t t) const { return model[timed_atom(a, t)]; }
};

inline std::vector<History> solve_histories(const ActionDomain& d, std::size_t max_atoms = kDefaultMaxAtoms) {
  CausalTheory theory = compile_domain(d);
  std::vector<History> out;
  for (auto& m : causally_explained_models(theory, max_atoms)) out.push_back({d.fluents, d.actions, d.horizon, m});
  return out;
}

// Time columns, one row per fluent then per action, values ⊤/⊥.
inline std::string render_history(const History& h) {
  if (h.fluents.empty() && h.actions.empty()) return {};
  std::size_t width = 1;
  for (const auto* group : {&h.fluents, &h.actions})
    for (const auto& n : *group) width = std::max(width, n.size());
  auto pad = [&](const std::string& s) { return s + std::string(width - s.size(), ' '); };
  std::string out = pad("t") + " |";
  for (std::size_t t = 0; t <= h.horizon; ++t) out += " " + std::to_string(t);
  out += '\n';
  for (const auto& f : h.fluents) {
    out += pad(f) + " |";
    for (std::size_t t = 0; t <= h.horizon; ++t) out += h.fluent(f, t) ? " ⊤" : " ⊥";
    out += '\n';
  }
  for (const auto& a : h.actions) {
    out += pad(a) + " |";
    for (std::size_t t = 0; t < h.horizon; ++t) out += h.occurs(a, t) ? " ⊤" : " ⊥";
    out += '\n';
  }
  return out;
}

namespace detail {
inline std::vector<FluentLiteral> parse_literals(std::string_view text, const DslLine& l) {
  std::vector<FluentLiteral> out;
  std::string_view rest = trim(text);
  if (rest == "true") return out;
  std::size_t start = 0;
  while (true) {
    std::size_t amp = rest.find('&', start);
    std::string_view piece = trim(rest.substr(start, amp == rest.npos ? rest.npos : amp - start));
    bool positive = true;
    if (!piece.empty() && piece.front() == '!') {
      positive = false;
      piece = trim(piece.substr(1));
    }
    if (!is_identifier(piece)) {
      std::size_t at = static_cast<std::size_t>(piece.data() - l.value.data());
      throw ParseError(l.value_offset + at, "expected a fluent literal", l.number,
                       l.value_offset + at - l.line_start + 1);
    }
    out.push_back({std::string(piece), positive});
    if (amp == rest.npos) break;
    start = amp + 1;
  }
  return out;
}
}  // namespace detail

// Domain DSL:
//   fluents: alive loaded
//   actions: wait shoot
//   action shoot: pre loaded post !alive & !loaded
//   occurs: wait@0 shoot@1
//   init: alive loaded
//   horizon: 2
inline ActionDomain parse_domain(std::string_view text) {
  ActionDomain d;
  auto fail = [](const DslLine& l, std::size_t at, const std::string& what) -> ParseError {
    return ParseError(l.value_offset + at, what, l.number, l.value_offset + at - l.line_start + 1);
  };
  for_each_dsl_line(text, [&](const DslLine& l) {
    auto words = split_words(l.value);
    if (l.key == "fluents") {
      d.fluents.insert(d.fluents.end(), words.begin(), words.end());
    } else if (l.key == "actions") {
      d.actions.insert(d.actions.end(), words.begin(), words.end());
    } else if (l.key.substr(0, 7) == "action ") {
      std::string name(detail::trim(l.key.substr(7)));
      std::size_t pre = l.value.find("pre ");
      std::size_t post = l.value.find(" post ");
      if (pre == l.value.npos || post == l.value.npos || post < pre)
        throw fail(l, 0, "expected 'pre <literals> post <literals>'");
      d.effects[name].push_back({detail::parse_literals(l.value.substr(pre + 4, post - pre - 4), l),
                                 detail::parse_literals(l.value.substr(post + 6), l)});
    } else if (l.key == "occurs") {
      for (const auto& w : words) {
        std::size_t at = w.find('@');
        std::size_t col = l.value.find(w);
        if (at == std::string::npos || at + 1 == w.size() ||
            w.find_first_not_of("0123456789", at + 1) != std::string::npos)
          throw fail(l, col, "expected action@time");
        d.occurrences.push_back({w.substr(0, at), std::stoul(w.substr(at + 1))});
      }
    } else if (l.key == "init") {
      for (const auto& w : words) {
        bool positive = w.front() != '!';
        d.init.push_back({positive ? w : w.substr(1), positive});
      }
    } else if (l.key == "horizon") {
      if (words.size() != 1 || words[0].find_first_not_of("0123456789") != std::string::npos)
        throw fail(l, 0, "expected a natural number");
      d.horizon = std::stoul(words[0]);
    } else {
      throw ParseError(l.line_start, "unknown directive '" + std::string(l.key) + "'", l.number, 1);
    }
  });
  return d;
}

}  // namespace causal
