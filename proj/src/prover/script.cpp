#include <deque>
#include <sstream>
#include <unordered_map>

#include <boost/algorithm/string.hpp>

#include "gkernel/prover.hpp"

namespace gkernel::prover {

namespace {

std::set<std::string> object_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

std::string diff(const Term& got, const Term& want) {
  std::size_t n = std::min(got.factors.size(), want.factors.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!(got.factors[i] == want.factors[i]))
      return "factor " + std::to_string(i) + ": have '" + to_string(got.factors[i]) + "', goal has '" +
             to_string(want.factors[i]) + "'";
  return "have " + std::to_string(got.factors.size()) + " factors, goal has " + std::to_string(want.factors.size()) +
         " ('" + to_string(got) + "' vs '" + to_string(want) + "')";
}

}  // namespace

Script parse_script(const std::string& text) {
  Script s;
  bool have_start = false;
  bool have_goal = false;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string l = raw.substr(0, raw.find('#'));
    boost::trim(l);
    if (l.empty()) continue;
    std::size_t sp = l.find_first_of(" \t");
    std::string head = l.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : boost::trim_copy(l.substr(sp));
    auto objects = object_set(s.objects);
    try {
      if (head == "objects") {
        if (have_start || have_goal || !s.steps.empty()) throw ParseError("objects must come first", 1);
        boost::split(s.objects, rest, boost::is_any_of(" \t"), boost::token_compress_on);
        for (const std::string& o : s.objects)
          if (o.empty() || o == "M" || !std::isalpha(static_cast<unsigned char>(o[0])))
            throw ParseError("bad object name '" + o + "'", 1);
      } else if (head == "start") {
        s.start = parse_term(rest, objects);
        have_start = true;
      } else if (head == "goal") {
        s.goal = parse_term(rest, objects);
        have_goal = true;
      } else if (head == "step") {
        Step st;
        st.line = line;
        std::string body = rest;
        std::size_t where = body.find(" where ");
        std::string binds;
        if (where != std::string::npos) {
          binds = body.substr(where + 7);
          body = body.substr(0, where);
        }
        std::vector<std::string> words;
        boost::split(words, body, boost::is_any_of(" \t"), boost::token_compress_on);
        if (words.size() != 4 || words[2] != "@") throw ParseError("expected 'step RULE forward|backward @ POS'", 1);
        st.rule = words[0];
        if (words[1] == "forward") st.forward = true;
        else if (words[1] == "backward") st.forward = false;
        else throw ParseError("direction must be forward or backward", 1);
        try {
          st.at = parse_position(words[3]);
        } catch (const std::invalid_argument& e) {
          throw ParseError(e.what(), 1);
        }
        if (!binds.empty()) {
          std::vector<std::string> items;
          boost::split(items, binds, boost::is_any_of(";"));
          for (std::string item : items) {
            std::size_t eq = item.find('=');
            if (eq == std::string::npos) throw ParseError("binding without '='", 1);
            std::string k = boost::trim_copy(item.substr(0, eq));
            std::string v = boost::trim_copy(item.substr(eq + 1));
            if (k.empty() || v.empty() || !st.bindings.emplace(k, v).second)
              throw ParseError("bad binding '" + boost::trim_copy(item) + "'", 1);
          }
        }
        s.steps.push_back(std::move(st));
      } else {
        throw ParseError("unknown directive '" + head + "'", 1);
      }
    } catch (const ParseError& e) {
      std::string what = e.what();
      what = what.substr(0, what.rfind(" (at "));
      throw ParseError("line " + std::to_string(line) + ": " + what, static_cast<std::size_t>(line));
    }
  }
  if (!have_start) throw ParseError("missing start term", static_cast<std::size_t>(line));
  if (!have_goal) throw ParseError("missing goal term", static_cast<std::size_t>(line));
  return s;
}

std::string to_string(const Script& s) {
  std::string out;
  if (!s.objects.empty()) out += "objects " + boost::join(s.objects, " ") + "\n";
  out += "start " + to_string(s.start) + "\n";
  out += "goal " + to_string(s.goal) + "\n";
  for (const Step& st : s.steps) out += to_string(st) + "\n";
  return out;
}

RunResult run_script(const Script& s) {
  auto objects = object_set(s.objects);
  Signature st = typecheck(s.start);
  Signature gt = typecheck(s.goal);
  if (!(st == gt))
    throw IllTyped("goal", "start is " + to_string(st.source) + " → " + to_string(st.target) + ", goal is " +
                               to_string(gt.source) + " → " + to_string(gt.target));
  RunResult r;
  Term t = s.start;
  r.trace.push_back(to_string(t));
  for (std::size_t k = 0; k < s.steps.size(); ++k) {
    try {
      Applied a = apply_step(t, s.steps[k], objects);
      t = std::move(a.term);
      r.inverses.push_back(std::move(a.inverse));
      r.trace.push_back(to_string(t));
    } catch (const RuleMismatch& e) {
      r.verdict = "stuck";
      r.failed_step = static_cast<int>(k + 1);
      r.message = "step " + std::to_string(k + 1) + " (" + to_string(s.steps[k]) + "): " + e.what();
      return r;
    }
  }
  if (!(t == s.goal)) {
    r.verdict = "stuck";
    r.message = "final term differs from goal: " + diff(t, s.goal);
    return r;
  }
  r.proved = true;
  r.verdict = "proved";
  return r;
}

Script reverse_script(const Script& s, const RunResult& r) {
  if (r.inverses.size() != s.steps.size()) throw std::invalid_argument("reverse_script needs a complete run");
  Script out;
  out.objects = s.objects;
  out.start = s.start;
  for (const Step& st : s.steps) out.start = apply_step(out.start, st, object_set(s.objects)).term;
  out.goal = s.start;
  for (auto it = r.inverses.rbegin(); it != r.inverses.rend(); ++it) out.steps.push_back(*it);
  return out;
}

std::optional<std::vector<Step>> search(const Term& start, const Term& goal, int max_depth,
                                        const std::set<std::string>& objects) {
  if (max_depth < 0 || max_depth > 6) throw std::invalid_argument("search depth must be in 0..6");
  struct Node {
    Term term;
    int parent;
    Step step;
    int depth;
  };
  std::vector<Node> nodes{{start, -1, {}, 0}};
  std::unordered_map<std::string, int> seen{{to_string(start), 0}};
  std::deque<int> queue{0};
  auto path_to = [&](int n) {
    std::vector<Step> steps;
    for (; nodes[static_cast<std::size_t>(n)].parent >= 0; n = nodes[static_cast<std::size_t>(n)].parent)
      steps.insert(steps.begin(), nodes[static_cast<std::size_t>(n)].step);
    return steps;
  };
  if (start == goal) return std::vector<Step>{};
  while (!queue.empty()) {
    int n = queue.front();
    queue.pop_front();
    if (nodes[static_cast<std::size_t>(n)].depth == max_depth) continue;
    Term here = nodes[static_cast<std::size_t>(n)].term;
    for (const Step& st : find_redexes(here, objects)) {
      Term next = apply_step(here, st, objects).term;
      std::string key = to_string(next);
      if (seen.count(key)) continue;
      int id = static_cast<int>(nodes.size());
      seen.emplace(key, id);
      nodes.push_back({next, n, st, nodes[static_cast<std::size_t>(n)].depth + 1});
      if (next == goal) return path_to(id);
      queue.push_back(id);
    }
  }
  return std::nullopt;
}

}  // namespace gkernel::prover
