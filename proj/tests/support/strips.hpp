#pragma once

// A deliberately naive STRIPS reader and breadth-first planner for checking
// exported PDDL: positive preconditions, add/delete effects, typed objects.

#include <cctype>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace strips {

struct Sexp {
  std::string atom;
  std::vector<Sexp> list;
  bool is_atom() const { return !atom.empty(); }
};

inline std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  bool comment = false;
  for (char ch : text) {
    if (comment) {
      if (ch == '\n') comment = false;
      continue;
    }
    if (ch == ';') {
      comment = true;
      continue;
    }
    if (ch == '(' || ch == ')' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(cur), cur.clear();
      if (ch == '(' || ch == ')') out.emplace_back(1, ch);
    } else {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline Sexp parse_sexp(const std::vector<std::string>& toks, std::size_t& i) {
  if (toks.at(i) != "(") return Sexp{toks[i++], {}};
  ++i;
  Sexp s;
  while (toks.at(i) != ")") s.list.push_back(parse_sexp(toks, i));
  ++i;
  return s;
}

inline Sexp parse(const std::string& text) {
  const auto toks = tokenize(text);
  std::size_t i = 0;
  return parse_sexp(toks, i);
}

inline const Sexp* section(const Sexp& s, const std::string& key) {
  for (const auto& c : s.list)
    if (!c.list.empty() && c.list[0].atom == key) return &c;
  return nullptr;
}

// "(a b - t c - u)" style lists -> (name, type) pairs.
inline std::vector<std::pair<std::string, std::string>> typed(const std::vector<Sexp>& items, std::size_t from) {
  std::vector<std::pair<std::string, std::string>> out;
  std::vector<std::string> pending;
  for (std::size_t i = from; i < items.size(); ++i) {
    if (items[i].atom == "-") {
      for (auto& p : pending) out.emplace_back(p, items.at(i + 1).atom);
      pending.clear();
      ++i;
    } else {
      pending.push_back(items[i].atom);
    }
  }
  for (auto& p : pending) out.emplace_back(p, "object");
  return out;
}

inline std::vector<const Sexp*> conjuncts(const Sexp& s) {
  if (!s.list.empty() && s.list[0].atom == "and") {
    std::vector<const Sexp*> out;
    for (std::size_t i = 1; i < s.list.size(); ++i) out.push_back(&s.list[i]);
    return out;
  }
  return {&s};
}

struct Ground {
  std::string name;
  std::vector<int> pre, add, del;
};

struct Task {
  std::vector<std::string> facts;
  std::vector<Ground> actions;
  std::vector<int> init, goal;
};

inline Task ground(const std::string& domain_text, const std::string& problem_text) {
  const Sexp dom = parse(domain_text);
  const Sexp prob = parse(problem_text);
  std::map<std::string, std::vector<std::string>> by_type;
  for (auto& [o, t] : typed(section(prob, ":objects")->list, 1)) by_type[t].push_back(o);

  Task task;
  std::unordered_map<std::string, int> ids;
  auto intern = [&](const std::string& f) {
    auto [it, fresh] = ids.try_emplace(f, static_cast<int>(task.facts.size()));
    if (fresh) task.facts.push_back(f);
    return it->second;
  };
  auto atom_text = [](const Sexp& a, const std::map<std::string, std::string>& bind) {
    std::string f = a.list[0].atom;
    for (std::size_t i = 1; i < a.list.size(); ++i) {
      const auto& t = a.list[i].atom;
      f += " " + (t[0] == '?' ? bind.at(t) : t);
    }
    return f;
  };

  std::set<std::string> init_text;
  for (std::size_t i = 1; i < section(prob, ":init")->list.size(); ++i) {
    const auto f = atom_text(section(prob, ":init")->list[i], {});
    init_text.insert(f);
    task.init.push_back(intern(f));
  }
  for (const auto* g : conjuncts(section(prob, ":goal")->list.at(1))) task.goal.push_back(intern(atom_text(*g, {})));

  // predicates touched by some effect are fluent, the rest static
  std::set<std::string> fluent;
  for (const auto& item : dom.list) {
    if (item.list.empty() || item.list[0].atom != ":action") continue;
    for (std::size_t i = 2; i + 1 < item.list.size(); i += 2)
      if (item.list[i].atom == ":effect")
        for (const auto* e : conjuncts(item.list[i + 1])) {
          const Sexp& a = e->list[0].atom == "not" ? e->list[1] : *e;
          fluent.insert(a.list[0].atom);
        }
  }

  for (const auto& item : dom.list) {
    if (item.list.empty() || item.list[0].atom != ":action") continue;
    const std::string name = item.list[1].atom;
    const Sexp *params = nullptr, *pre = nullptr, *eff = nullptr;
    for (std::size_t i = 2; i + 1 < item.list.size(); i += 2) {
      if (item.list[i].atom == ":parameters") params = &item.list[i + 1];
      if (item.list[i].atom == ":precondition") pre = &item.list[i + 1];
      if (item.list[i].atom == ":effect") eff = &item.list[i + 1];
    }
    const auto vars = typed(params->list, 0);
    const auto pres = conjuncts(*pre);
    const auto effs = conjuncts(*eff);
    std::map<std::string, std::string> bind;
    // backtracking; static preconditions are checked as soon as they are bound
    auto bound = [&](const Sexp& a) {
      for (std::size_t i = 1; i < a.list.size(); ++i)
        if (a.list[i].atom[0] == '?' && !bind.contains(a.list[i].atom)) return false;
      return true;
    };
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      for (const auto* p : pres)
        if (!fluent.contains(p->list[0].atom) && bound(*p) && !init_text.contains(atom_text(*p, bind))) return;
      if (k == vars.size()) {
        Ground g;
        g.name = name;
        for (const auto& [v, _] : vars) g.name += " " + bind.at(v);
        for (const auto* p : pres)
          if (fluent.contains(p->list[0].atom)) g.pre.push_back(intern(atom_text(*p, bind)));
        for (const auto* e : effs) {
          if (e->list[0].atom == "not") g.del.push_back(intern(atom_text(e->list[1], bind)));
          else g.add.push_back(intern(atom_text(*e, bind)));
        }
        task.actions.push_back(std::move(g));
        return;
      }
      for (const auto& obj : by_type[vars[k].second]) {
        bind[vars[k].first] = obj;
        rec(k + 1);
        bind.erase(vars[k].first);
      }
    };
    rec(0);
  }
  return task;
}

struct Solution {
  long length = -1;
  std::vector<std::string> plan;
  std::size_t states = 0;
};

inline Solution bfs(const Task& task, std::size_t limit = 2'000'000) {
  using State = std::vector<char>;
  auto key = [](const State& s) { return std::string(s.begin(), s.end()); };
  State init(task.facts.size(), 0);
  for (int f : task.init) init[f] = 1;
  struct Back {
    std::string parent;
    int action;
  };
  std::unordered_map<std::string, Back> seen;
  std::deque<State> queue{init};
  seen.emplace(key(init), Back{"", -1});
  Solution sol;
  while (!queue.empty() && seen.size() < limit) {
    State s = std::move(queue.front());
    queue.pop_front();
    ++sol.states;
    bool goal = true;
    for (int f : task.goal) goal = goal && s[f];
    if (goal) {
      std::string k = key(s);
      while (seen.at(k).action >= 0) {
        sol.plan.insert(sol.plan.begin(), task.actions[seen.at(k).action].name);
        k = seen.at(k).parent;
      }
      sol.length = static_cast<long>(sol.plan.size());
      return sol;
    }
    const std::string sk = key(s);
    for (std::size_t a = 0; a < task.actions.size(); ++a) {
      const auto& g = task.actions[a];
      bool ok = true;
      for (int f : g.pre) ok = ok && s[f];
      if (!ok) continue;
      State n = s;
      for (int f : g.del) n[f] = 0;
      for (int f : g.add) n[f] = 1;
      if (seen.emplace(key(n), Back{sk, static_cast<int>(a)}).second) queue.push_back(std::move(n));
    }
  }
  return sol;
}

}  // namespace strips
