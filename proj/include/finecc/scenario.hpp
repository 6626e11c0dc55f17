#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finecc/lexer.hpp"
#include "finecc/replay.hpp"

namespace finecc {

struct ScenarioAction {
  enum class Kind { Request, Commit, Abort };
  Kind kind = Kind::Request;
  std::optional<AccessRequest> request;
  SourcePos pos;
};

struct ScenarioTxn {
  std::string name;
  std::vector<ScenarioAction> actions;
  SourcePos pos;
};

struct Scenario {
  std::vector<InstanceId> instances;
  std::vector<ScenarioTxn> txns;
};

inline constexpr std::size_t kDefaultMaxTransactions = 16;

namespace detail {

inline ScenarioAction parse_action(TokenCursor& cur,
                                   const std::map<std::string, InstanceId>& instances) {
  ScenarioAction a;
  a.pos = cur.peek().pos;
  auto instance = [&](const Token& t) {
    auto it = instances.find(t.text);
    if (it == instances.end()) {
      throw Error(ErrorKind::UnknownInstance, "'" + t.text + "' is not declared", t.pos);
    }
    return it->second;
  };
  if (cur.accept("commit")) {
    a.kind = ScenarioAction::Kind::Commit;
  } else if (cur.accept("abort")) {
    a.kind = ScenarioAction::Kind::Abort;
  } else if (cur.accept("one")) {
    std::string m = cur.expect_ident("method name").text;
    cur.expect("on");
    a.request = OneInstance{instance(cur.expect_ident("instance name")), std::move(m)};
  } else if (cur.accept("extent")) {
    std::string m = cur.expect_ident("method name").text;
    cur.expect("on");
    a.request = Extent{cur.expect_ident("class name").text, std::move(m)};
  } else if (cur.accept("some")) {
    DomainSome r;
    r.method = cur.expect_ident("method name").text;
    cur.expect("on");
    cur.expect("domain");
    r.cls = cur.expect_ident("class name").text;
    cur.expect("using");
    r.instances.push_back(instance(cur.expect_ident("instance name")));
    while (cur.accept(",")) r.instances.push_back(instance(cur.expect_ident("instance name")));
    a.request = std::move(r);
  } else if (cur.accept("all")) {
    DomainAll r;
    r.method = cur.expect_ident("method name").text;
    cur.expect("on");
    cur.expect("domain");
    r.cls = cur.expect_ident("class name").text;
    a.request = std::move(r);
  } else {
    cur.fail("expected action");
  }
  cur.expect(";");
  return a;
}

}  // namespace detail

// Parses a scenario and validates it against `model`: classes exist,
// methods apply, every transaction ends with exactly one commit or abort.
inline Scenario parse_scenario(std::string_view text, const ClassModel& model,
                               std::size_t max_transactions = kDefaultMaxTransactions) {
  TokenCursor cur(tokenize(text));
  Scenario s;
  std::map<std::string, InstanceId> instances;
  while (cur.is("instance")) {
    cur.expect("instance");
    const Token& name = cur.expect_ident("instance name");
    cur.expect("of");
    const Token& cls = cur.expect_ident("class name");
    cur.expect(";");
    if (!model.has_class(cls.text)) {
      throw Error(ErrorKind::UnknownClass, "'" + cls.text + "'", cls.pos);
    }
    InstanceId id{name.text, cls.text};
    if (!instances.emplace(name.text, id).second) {
      throw Error(ErrorKind::DuplicateName, "instance '" + name.text + "'", name.pos);
    }
    s.instances.push_back(std::move(id));
  }
  std::set<std::string> names;
  while (!cur.at_end()) {
    ScenarioTxn t;
    t.pos = cur.expect("txn").pos;
    t.name = cur.expect_ident("transaction name").text;
    if (!names.insert(t.name).second) {
      throw Error(ErrorKind::DuplicateName, "transaction '" + t.name + "'", t.pos);
    }
    cur.expect("{");
    while (!cur.is("}")) {
      if (cur.at_end()) cur.fail("expected '}'");
      t.actions.push_back(detail::parse_action(cur, instances));
    }
    cur.expect("}");
    s.txns.push_back(std::move(t));
  }
  if (s.txns.size() > max_transactions) {
    throw Error(ErrorKind::TooLarge,
                std::to_string(s.txns.size()) + " transactions exceed the limit of " +
                    std::to_string(max_transactions));
  }
  for (const auto& t : s.txns) {
    for (std::size_t k = 0; k < t.actions.size(); ++k) {
      const auto& a = t.actions[k];
      bool last = k + 1 == t.actions.size();
      if (a.kind != ScenarioAction::Kind::Request && !last) {
        throw Error(ErrorKind::Syntax,
                    "transaction '" + t.name + "' has actions after its end", a.pos);
      }
      if (a.request) {
        try {
          footprint(model, *a.request);
        } catch (const Error& e) {
          throw Error(e.kind(), e.detail(), a.pos);
        }
      }
    }
    if (t.actions.empty() || t.actions.back().kind == ScenarioAction::Kind::Request) {
      throw Error(ErrorKind::Syntax,
                  "transaction '" + t.name + "' must end with commit or abort", t.pos);
    }
  }
  return s;
}

// Why two transactions cannot run concurrently: the first clashing pair of
// locks, in footprint order.
struct ConflictWitness {
  LockSpec first;
  LockSpec second;
};

struct ConcurrencyReport {
  std::vector<std::string> txns;
  std::vector<std::vector<bool>> conflict;  // symmetric, false on the diagonal
  std::map<std::pair<std::size_t, std::size_t>, ConflictWitness> witnesses;  // i < j
  std::vector<std::vector<std::size_t>> maximal_sets;  // sorted, lexicographic
  ReplayResult replay;
};

inline std::vector<LockSpec> transaction_locks(const ClassModel& model,
                                               const ScenarioTxn& t) {
  std::vector<LockSpec> out;
  for (const auto& a : t.actions) {
    if (!a.request) continue;
    auto locks = footprint(model, *a.request).locks();
    out.insert(out.end(), locks.begin(), locks.end());
  }
  return out;
}

// Maximal sets of pairwise compatible transactions, by enumeration of all
// subsets. Callers cap the transaction count.
inline std::vector<std::vector<std::size_t>> maximal_compatible_sets(
    const std::vector<std::vector<bool>>& conflict) {
  const std::size_t n = conflict.size();
  if (n > 24) throw Error(ErrorKind::TooLarge, "too many transactions to enumerate");
  std::vector<std::uint32_t> clash(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (conflict[i][j]) clash[i] |= 1u << j;
    }
  }
  std::vector<std::vector<std::size_t>> out;
  const std::uint32_t full = n == 0 ? 0 : static_cast<std::uint32_t>((1ull << n) - 1);
  for (std::uint64_t set = 1; set <= full; ++set) {
    auto s = static_cast<std::uint32_t>(set);
    bool independent = true;
    for (std::size_t i = 0; i < n && independent; ++i) {
      if ((s >> i & 1u) && (clash[i] & s)) independent = false;
    }
    if (!independent) continue;
    bool extendable = false;
    for (std::size_t i = 0; i < n && !extendable; ++i) {
      if (!(s >> i & 1u) && !(clash[i] & s)) extendable = true;
    }
    if (extendable) continue;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (s >> i & 1u) members.push_back(i);
    }
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline ConcurrencyReport run_scenario(const ClassModel& model, const TableSet& tables,
                                      const Scenario& s) {
  ConcurrencyReport report;
  const std::size_t n = s.txns.size();
  std::vector<std::vector<LockSpec>> locks;
  for (const auto& t : s.txns) {
    report.txns.push_back(t.name);
    locks.push_back(transaction_locks(model, t));
  }
  report.conflict.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (const auto& a : locks[i]) {
        auto hit = std::find_if(locks[j].begin(), locks[j].end(),
                                [&](const LockSpec& b) { return conflicts(tables, a, b); });
        if (hit != locks[j].end()) {
          report.conflict[i][j] = report.conflict[j][i] = true;
          report.witnesses.emplace(std::make_pair(i, j), ConflictWitness{a, *hit});
          break;
        }
      }
    }
  }
  report.maximal_sets = maximal_compatible_sets(report.conflict);

  std::vector<ReplayTxn> plan;
  for (const auto& t : s.txns) {
    ReplayTxn rt{t.name, {}};
    for (const auto& a : t.actions) {
      switch (a.kind) {
        case ScenarioAction::Kind::Request:
          rt.steps.push_back(request_step(model, *a.request));
          break;
        case ScenarioAction::Kind::Commit:
          rt.steps.push_back({ReplayStep::Kind::Commit, {}, "commit"});
          break;
        case ScenarioAction::Kind::Abort:
          rt.steps.push_back({ReplayStep::Kind::Abort, {}, "abort"});
          break;
      }
    }
    plan.push_back(std::move(rt));
  }
  LockTable table(commutativity_conflicts(std::make_shared<const TableSet>(tables)));
  report.replay = replay(table, plan);
  return report;
}

}  // namespace finecc
