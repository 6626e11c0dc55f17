// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cli_runner.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace finecc;
using namespace finecc::testing;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failed expectations without stopping at the first one.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  template <class A, class B>
  void equal(const A& got, const B& want, const std::string& what) {
    std::ostringstream ss;
    ss << what << ": got '" << got << "', want '" << want << "'";
    expect(got == want, ss.str());
  }
  std::size_t checks() const { return checks_; }
  Outcome done(std::string note = {}) const {
    Outcome o;
    o.pass = failed_ == 0;
    if (o.pass) {
      o.detail = note.empty() ? std::to_string(checks_) + " checks" : note;
    } else {
      o.detail = std::to_string(failed_) + " of " + std::to_string(checks_) + " checks failed";
      for (const auto& f : failures_) o.detail += "\n    " + f;
    }
    return o;
  }

 private:
  std::size_t checks_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
};

const std::string kSchema = fixture_path("c1c2.schema");

// "c.m" -> {"DAV": "...", "TAV": "..."} from the analyze text report.
std::map<std::string, std::map<std::string, std::string>> parse_analyze(const std::string& text) {
  std::map<std::string, std::map<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line, cls, key;
  while (std::getline(in, line)) {
    if (line.rfind("class ", 0) == 0) {
      cls = line.substr(6);
    } else if (line.rfind("  method ", 0) == 0) {
      std::string m = line.substr(9);
      key = cls + "." + m.substr(0, m.find(' '));
    } else if (line.rfind("    DAV ", 0) == 0 || line.rfind("    TAV ", 0) == 0) {
      out[key][line.substr(4, 3)] = line.substr(8);
    }
  }
  return out;
}

Outcome worked_vectors() {
  Checker ck;
  auto start = Clock::now();
  auto r = run_cli("analyze " + kSchema);
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  ck.equal(r.exit_code, 0, "exit code");
  auto v = parse_analyze(r.out);
  ck.equal(v["c1.m2"]["DAV"], "(Write f1, Read f2, Null f3)", "DAV(c1,m2)");
  ck.equal(v["c1.m2"]["TAV"], v["c1.m2"]["DAV"], "TAV(c1,m2)");
  ck.equal(v["c2.m3"]["TAV"], v["c2.m3"]["DAV"], "TAV(c2,m3)");
  ck.equal(v["c2.m4"]["TAV"], v["c2.m4"]["DAV"], "TAV(c2,m4)");
  ck.equal(v["c2.m3"]["TAV"], "(Null f1, Read f2, Read f3, Null f4, Null f5, Null f6)", "TAV(c2,m3) value");
  ck.equal(v["c2.m4"]["TAV"], "(Null f1, Null f2, Null f3, Null f4, Read f5, Write f6)", "TAV(c2,m4) value");
  ck.equal(v["c2.m2"]["TAV"], "(Write f1, Read f2, Null f3, Write f4, Read f5, Null f6)", "TAV(c2,m2)");
  ck.equal(v["c2.m1"]["TAV"], "(Write f1, Read f2, Read f3, Write f4, Read f5, Null f6)", "TAV(c2,m1)");
  ck.expect(secs < 1.0, "runtime " + std::to_string(secs) + " s");
  std::ostringstream note;
  note << "8 vectors exact, analyze took " << static_cast<int>(secs * 1000) << " ms";
  return ck.done(note.str());
}

Outcome worked_graph() {
  Checker ck;
  auto r = run_cli("graph " + kSchema + " --class c2 --json");
  ck.equal(r.exit_code, 0, "exit code");
  auto g = json::parse(r.out);
  std::set<std::string> vertices, edges;
  for (const auto& v : g["vertices"]) vertices.insert(v[0].get<std::string>() + "." + v[1].get<std::string>());
  for (const auto& e : g["edges"]) {
    edges.insert(e["from"][0].get<std::string>() + "." + e["from"][1].get<std::string>() + "->" +
                 e["to"][0].get<std::string>() + "." + e["to"][1].get<std::string>());
  }
  ck.equal(g["vertices"].size(), 5u, "vertex count");
  ck.equal(g["edges"].size(), 3u, "edge count");
  ck.expect(vertices == std::set<std::string>{"c2.m1", "c2.m2", "c2.m3", "c2.m4", "c1.m2"}, "vertex set");
  ck.expect(edges == std::set<std::string>{"c2.m1->c2.m2", "c2.m1->c2.m3", "c2.m2->c1.m2"}, "edge set");
  return ck.done("5 vertices, 3 edges");
}

Outcome worked_tables() {
  Checker ck;
  const std::vector<std::string> ms{"m1", "m2", "m3", "m4"};
  const bool expected[4][4] = {
      {false, false, true, true},
      {false, false, true, true},
      {true, true, true, true},
      {true, true, true, false},
  };
  auto t2 = json::parse(run_cli("table " + kSchema + " --class c2 --json").out);
  ck.expect(t2["methods"] == json(ms), "c2 modes");
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      ck.expect(t2["commutes"][i][j].get<bool>() == expected[i][j], "c2 cell " + ms[i] + "/" + ms[j]);
    }
  }
  auto t1 = json::parse(run_cli("table " + kSchema + " --class c1 --json").out);
  ck.expect(t1["methods"] == json(std::vector<std::string>{"m1", "m2", "m3"}), "c1 modes");
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      ck.expect(t1["commutes"][i][j].get<bool>() == expected[i][j], "c1 cell " + ms[i] + "/" + ms[j]);
    }
  }
  const bool classical[3][3] = {{true, true, true}, {true, true, false}, {true, false, false}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ck.expect(mode_compatible(kAllModes[i], kAllModes[j]) == classical[i][j], "compatibility cell");
    }
  }
  return ck.done("16 + 9 cells, 9 compatibility cells");
}

Outcome worked_scenario() {
  Checker ck;
  auto r = run_cli("simulate " + kSchema + " " + fixture_path("c1c2_locking.scenario") + " --json");
  ck.equal(r.exit_code, 0, "exit code");
  auto j = json::parse(r.out);
  ck.expect(j["maximal_sets"] == json::parse(R"([["T1","T3","T4"],["T2","T3","T4"]])"),
            "maximal sets " + j["maximal_sets"].dump());
  ck.equal(j["conflicts"].size(), 1u, "conflict count");
  if (!j["conflicts"].empty()) {
    const auto& c = j["conflicts"][0];
    ck.equal(c["a"].get<std::string>(), "T1", "conflict first");
    ck.equal(c["b"].get<std::string>(), "T2", "conflict second");
    ck.equal(c["resource"].get<std::string>(), "class c1", "conflict resource");
    ck.expect(c["modes"] == json::parse(R"(["m1","m1"])"), "conflict modes " + c["modes"].dump());
  }
  return ck.done("{T1, T3, T4} and {T2, T3, T4}; T1/T2 on class c1 (m1, m1)");
}

Outcome oracle_equivalence() {
  Checker ck;
  GenParams p;
  p.multiple_inheritance = 0.5;
  p.recursion = 0.4;
  std::size_t schemas = 0, cyclic = 0, multi = 0, cells = 0;
  for (std::uint64_t seed = 0; seed < 600; ++seed) {
    auto model = parse_schema(generate_random_schema(seed, p));
    ++schemas;
    FactsCache facts(model);
    bool has_cycle = false, has_multi = false;
    for (const auto& c : model.classes()) {
      if (c.supers.size() > 1) has_multi = true;
      auto g = build_lbr_graph(facts, c.name);
      auto cond = condense(g);
      for (bool b : cond.cyclic) has_cycle = has_cycle || b;
      auto tavs = compute_tavs(facts, c.name);
      for (std::size_t k = 0; k < tavs.methods.size(); ++k) {
        ck.expect(tavs.tavs[k] == naive_tav(model, c.name, tavs.methods[k]),
                  "seed " + std::to_string(seed) + " " + c.name + "." + tavs.methods[k]);
      }
      CommutativityTable t(tavs);
      for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = 0; j < t.size(); ++j) {
          ++cells;
          if (t.commutes(i, j) != av_commutes(tavs.tavs[i], tavs.tavs[j])) {
            ck.expect(false, "cell seed " + std::to_string(seed) + " " + c.name);
          }
        }
      }
    }
    cyclic += has_cycle;
    multi += has_multi;
  }
  ck.expect(cyclic > 0, "no generated schema had a recursion cycle");
  ck.expect(multi > 0, "no generated schema had multiple inheritance");
  std::ostringstream note;
  note << schemas << " schemas (" << cyclic << " with cycles, " << multi
       << " with multiple inheritance), " << ck.checks() << " vectors, " << cells << " cells";
  return ck.done(note.str());
}

AccessVector random_vector(std::mt19937& rng) {
  static const char* names[] = {"a", "b", "c", "d", "e"};
  AccessVector v;
  for (const char* n : names) {
    if (rng() % 3 == 0) continue;
    v.set(n, kAllModes[rng() % 3]);
  }
  return v;
}

Outcome algebra() {
  Checker ck;
  std::mt19937 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    auto a = random_vector(rng), b = random_vector(rng), c = random_vector(rng);
    ck.expect(av_join(a, a) == a, "idempotence " + to_string(a));
    ck.expect(av_join(a, b) == av_join(b, a), "commutativity");
    ck.expect(av_join(av_join(a, b), c) == av_join(a, av_join(b, c)), "associativity");
    ck.expect(av_commutes(a, b) == av_commutes(b, a), "symmetry");
  }
  std::size_t tav_checks = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto model = parse_schema(generate_random_schema(seed));
    FactsCache facts(model);
    for (const auto& c : model.class_names()) {
      auto tavs = compute_tavs(facts, c);
      for (std::size_t k = 0; k < tavs.methods.size(); ++k) {
        ++tav_checks;
        ck.expect(av_leq(facts.get(c, tavs.methods[k]).dav, tavs.tavs[k]), "TAV >= DAV " + c);
      }
    }
  }
  return ck.done(std::to_string(ck.checks()) + " checks (" + std::to_string(tav_checks) +
                 " TAV >= DAV)");
}

Outcome problem_fixes() {
  Checker ck;
  // (a) read then self-send a writer
  auto account = parse_schema(read_fixture("escalation.schema"));
  auto report = run_scenario(account, build_all_tables(account),
                             parse_scenario(read_fixture("escalation.scenario"), account));
  ck.equal(report.replay.escalations, 0u, "escalations under method modes");
  ck.expect(report.replay.deadlocks.empty(), "deadlock under method modes");
  ck.expect(std::none_of(report.replay.events.begin(), report.replay.events.end(),
                         [](const LockEvent& e) { return e.action == "escalate"; }),
            "escalate event under method modes");
  InstanceId a{"a", "Account"};
  auto steps = per_message_steps(account, a, "deposit");
  LockTable rw(read_write_conflicts());
  auto ref = replay(rw, {{"TA", steps}, {"TB", steps}});
  ck.expect(!ref.deadlocks.empty(), "per-message reference produced no wait-for cycle");
  ck.expect(ref.escalations > 0, "per-message reference produced no upgrade");

  // (b) one lock-table operation per footprint entry
  const auto& model = c1c2();
  std::vector<InstanceId> inst{{"i", "c1"}, {"j", "c1"}, {"k", "c2"}, {"l", "c2"}};
  std::mt19937 rng(9);
  LockManager mgr(model);
  std::size_t requests = 0;
  for (int n = 0; n < 200; ++n) {
    const auto& i = inst[rng() % inst.size()];
    auto methods = model.method_names(i.proper_class);
    std::string m = methods[rng() % methods.size()];
    AccessRequest req;
    std::size_t expected = 0;
    switch (rng() % 4) {
      case 0:
        req = OneInstance{i, m};
        expected = 1 + 1;
        break;
      case 1:
        req = Extent{i.proper_class, m};
        expected = model.domain(i.proper_class).size();
        break;
      case 2: {
        std::vector<InstanceId> named{i};
        if (i.proper_class == "c1") named.push_back(inst[2]);
        std::string root = "c1";
        std::string rm = methods[rng() % 3];
        req = DomainSome{root, rm, named};
        expected = model.domain(root).size() + named.size();
        break;
      }
      default:
        req = DomainAll{i.proper_class, m};
        expected = model.domain(i.proper_class).size();
        break;
    }
    auto t = mgr.begin();
    std::size_t before = mgr.table().acquire_operations();
    mgr.acquire(t, req);
    ++requests;
    ck.equal(mgr.table().acquire_operations() - before, expected, describe(req));
    mgr.release_all(t, false);
  }

  // (c) m2 and m4 on c2
  auto tavs = compute_tavs(model, "c2");
  CommutativityTable fine(tavs);
  auto coarse = CommutativityTable::reader_writer(tavs);
  ck.expect(fine.commutes("m2", "m4"), "m2 || m4 under method modes");
  ck.expect(!coarse.commutes("m2", "m4"), "reader/writer classification allows m2 || m4");
  LockManager both(model);
  InstanceId k{"k", "c2"};
  auto t1 = both.begin(), t2 = both.begin();
  ck.expect(both.acquire(t1, OneInstance{k, "m2"}).granted, "m2 on k granted");
  ck.expect(both.acquire(t2, OneInstance{k, "m4"}).granted, "m4 on k granted alongside m2");

  std::ostringstream note;
  note << "(a) no upgrade or deadlock vs " << ref.deadlocks.size() << " cycle and "
       << ref.escalations << " upgrades per message; (b) " << requests
       << " requests counted; (c) m2 || m4 allowed, reader/writer forbids";
  return ck.done(note.str());
}

double best_tav_seconds(const ClassModel& model, int runs) {
  double best = 1e9;
  for (int r = 0; r < runs; ++r) {
    auto start = Clock::now();
    auto tavs = compute_tavs(model, "Chain");
    double s = std::chrono::duration<double>(Clock::now() - start).count();
    if (tavs.methods.empty()) return -1;
    best = std::min(best, s);
  }
  return best;
}

Outcome linear_scaling() {
  Checker ck;
  auto small = parse_schema(generate_chain_schema(1000));
  auto large = parse_schema(generate_chain_schema(10000));
  auto start = Clock::now();
  double t_small = best_tav_seconds(small, 7);
  double t_large = best_tav_seconds(large, 5);
  double total = std::chrono::duration<double>(Clock::now() - start).count();
  double ratio = t_large / t_small;
  ck.expect(ratio < 10.0, "ratio " + std::to_string(ratio));
  ck.expect(total < 5.0, "total " + std::to_string(total) + " s");
  std::ostringstream note;
  note.precision(3);
  note << "1000: " << t_small * 1000 << " ms, 10000: " << t_large * 1000 << " ms, ratio "
       << ratio << ", total " << total << " s";
  auto o = ck.done(note.str());
  if (!o.pass) o.detail = note.str() + "\n    " + o.detail;
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"worked-example vectors", worked_vectors},
      {"worked-example graph", worked_graph},
      {"worked-example tables", worked_tables},
      {"worked-example scenario", worked_scenario},
      {"oracle equivalence", oracle_equivalence},
      {"algebra suite", algebra},
      {"upgrade, operation count and pseudo-conflict properties", problem_fixes},
      {"linear-scaling smoke", linear_scaling},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].name << ": "
              << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
