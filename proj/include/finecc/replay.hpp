#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "finecc/lockmgr.hpp"

namespace finecc {

struct ReplayStep {
  enum class Kind { Request, Commit, Abort };
  Kind kind = Kind::Request;
  std::vector<LockSpec> locks;
  std::string label;
};

struct ReplayTxn {
  std::string name;
  std::vector<ReplayStep> steps;
};

struct TraceEntry {
  std::size_t seq = 0;
  std::string txn;
  std::string action;
  std::string outcome;  // granted, blocked, granted-after-wait, committed, aborted, deadlock-victim
  std::vector<std::string> blockers;
};

struct ReplayResult {
  std::vector<TraceEntry> trace;
  std::vector<std::vector<std::string>> deadlocks;  // cycles, in detection order
  std::vector<std::string> committed;
  std::vector<std::string> aborted;
  std::size_t acquire_operations = 0;
  std::size_t escalations = 0;
  std::vector<LockEvent> events;
};

// Replays transactions round-robin in declaration order, one step per
// transaction per round. A blocked transaction sits out until a release
// grants its request. After every round the wait-for graph is checked and
// the youngest member of any cycle is aborted. A transaction whose steps
// run out without a terminal step commits.
inline ReplayResult replay(LockTable& table, const std::vector<ReplayTxn>& txns) {
  ReplayResult out;
  const std::size_t n = txns.size();
  std::vector<TxnId> ids;
  std::map<TxnId, std::size_t> slot;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back(table.begin(txns[i].name));
    slot[ids.back()] = i;
  }
  std::vector<std::size_t> next(n, 0);
  std::vector<bool> done(n, false);

  auto names_of = [&](const std::set<TxnId>& s) {
    std::vector<std::string> v;
    for (TxnId t : s) v.push_back(txns[slot.at(t)].name);
    return v;
  };
  auto record = [&](std::size_t i, std::string action, std::string outcome,
                    std::vector<std::string> blockers = {}) {
    out.trace.push_back({out.trace.size(), txns[i].name, std::move(action),
                         std::move(outcome), std::move(blockers)});
  };
  auto wake = [&](const std::vector<TxnId>& woken) {
    for (TxnId t : woken) {
      std::size_t j = slot.at(t);
      record(j, txns[j].steps[next[j]].label, "granted-after-wait");
      ++next[j];
    }
  };
  auto finish = [&](std::size_t i, bool commit, std::string label) {
    auto woken = table.release_all(ids[i], commit);
    done[i] = true;
    (commit ? out.committed : out.aborted).push_back(txns[i].name);
    record(i, std::move(label), commit ? "committed" : "aborted");
    wake(woken);
  };

  while (std::find(done.begin(), done.end(), false) != done.end()) {
    bool progress = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || table.state(ids[i]) == TxnState::Waiting) continue;
      progress = true;
      if (next[i] == txns[i].steps.size()) {
        finish(i, true, "commit");
        continue;
      }
      const ReplayStep& step = txns[i].steps[next[i]];
      if (step.kind != ReplayStep::Kind::Request) {
        ++next[i];
        finish(i, step.kind == ReplayStep::Kind::Commit, step.label);
        continue;
      }
      AcquireResult r = table.acquire(ids[i], step.locks);
      if (r.granted) {
        record(i, step.label, "granted");
        ++next[i];
      } else {
        record(i, step.label, "blocked", names_of(r.blockers));
      }
    }
    while (auto cycle = table.detect_deadlock()) {
      std::vector<std::string> names;
      for (TxnId t : *cycle) names.push_back(txns[slot.at(t)].name);
      out.deadlocks.push_back(names);
      TxnId victim = *std::max_element(cycle->begin(), cycle->end());
      std::size_t v = slot.at(victim);
      finish(v, false, "deadlock victim");
      progress = true;
    }
    if (!progress) {
      throw std::logic_error("replay stalled without a deadlock");
    }
  }
  out.acquire_operations = table.acquire_operations();
  out.escalations = table.escalations();
  out.events = table.events();
  return out;
}

// --- step builders ----------------------------------------------------------

inline std::string describe(const AccessRequest& req) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, OneInstance>) {
          return "one " + r.method + " on " + r.instance.id;
        } else if constexpr (std::is_same_v<T, Extent>) {
          return "extent " + r.method + " on " + r.cls;
        } else if constexpr (std::is_same_v<T, DomainSome>) {
          std::string s = "some " + r.method + " on domain " + r.cls + " using ";
          for (std::size_t i = 0; i < r.instances.size(); ++i) {
            if (i) s += ", ";
            s += r.instances[i].id;
          }
          return s;
        } else {
          return "all " + r.method + " on domain " + r.cls;
        }
      },
      req);
}

// One step per top-level request, locking its footprint with method modes.
inline ReplayStep request_step(const ClassModel& model, const AccessRequest& req) {
  return {ReplayStep::Kind::Request, footprint(model, req).locks(), describe(req)};
}

// The messages executed on the receiver when `method` is sent to a proper
// instance of `cls`, in call order: self-sends bind to `cls`, prefixed sends
// to their named class. Each (class, method) appears once.
inline std::vector<MethodRef> message_sequence(const ClassModel& model,
                                               const std::string& cls,
                                               const std::string& method) {
  std::vector<MethodRef> out;
  std::set<MethodRef> seen;
  std::function<void(const MethodRef&)> visit = [&](const MethodRef& at) {
    if (!seen.insert(at).second) return;
    out.push_back(at);
    const MethodDef& def = model.method_def(at.cls, at.method);
    for (const auto& st : def.body) {
      if (const auto* s = std::get_if<SelfSend>(&st.kind)) {
        visit({cls, s->method});
      } else if (const auto* p = std::get_if<PrefixedSend>(&st.kind)) {
        visit({p->ancestor, p->method});
      }
    }
  };
  visit({cls, method});
  return out;
}

// Reference locking where every message, including self-sends, asks for a
// Read or Write lock on the instance according to its own code.
inline std::vector<ReplayStep> per_message_steps(const ClassModel& model,
                                                 const InstanceId& instance,
                                                 const std::string& method) {
  std::vector<ReplayStep> out;
  for (const auto& msg : message_sequence(model, instance.proper_class, method)) {
    bool writer = extract_dav(model, msg.cls, msg.method).has_write();
    std::string mode(to_string(writer ? Mode::Write : Mode::Read));
    out.push_back({ReplayStep::Kind::Request,
                   {{Resource::of_instance(instance), mode, false}},
                   "send " + to_string(msg) + " to " + instance.id + " (" + mode + ")"});
  }
  return out;
}

}  // namespace finecc
