#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "finecc/commutativity.hpp"

namespace finecc {

// Transactions are numbered in begin order, so a larger id is younger.
using TxnId = std::uint32_t;

struct InstanceId {
  std::string id;
  std::string proper_class;

  friend auto operator<=>(const InstanceId&, const InstanceId&) = default;
  friend bool operator==(const InstanceId&, const InstanceId&) = default;
};

enum class ResourceKind { Class, Instance };

// A lockable granule. `table_class` selects the commutativity table used for
// conflicts: the class itself, or the proper class of an instance.
struct Resource {
  ResourceKind kind = ResourceKind::Class;
  std::string name;
  std::string table_class;

  static Resource of_class(const std::string& c) { return {ResourceKind::Class, c, c}; }
  static Resource of_instance(const InstanceId& i) {
    return {ResourceKind::Instance, i.id, i.proper_class};
  }

  friend auto operator<=>(const Resource&, const Resource&) = default;
  friend bool operator==(const Resource&, const Resource&) = default;
};

inline std::string to_string(const Resource& r) {
  return (r.kind == ResourceKind::Class ? "class " : "instance ") + r.name;
}

// Mode plus, for class locks, whether it covers every instance of the class
// (hierarchical) or only announces instance locks below (intentional).
struct LockSpec {
  Resource resource;
  std::string mode;
  bool hierarchical = false;

  friend bool operator==(const LockSpec&, const LockSpec&) = default;
};

inline std::string mode_string(const LockSpec& s) {
  if (s.resource.kind == ResourceKind::Instance) return s.mode;
  return "(" + s.mode + ", " + (s.hierarchical ? "true" : "false") + ")";
}

struct Lock {
  TxnId holder = 0;
  LockSpec spec;

  friend bool operator==(const Lock&, const Lock&) = default;
};

// --- access requests ------------------------------------------------------

// A method sent to a single instance.
struct OneInstance {
  InstanceId instance;
  std::string method;
};
// A method sent to every instance of a class and of its subclasses.
struct Extent {
  std::string cls;
  std::string method;
};
// A method sent to some instances of the domain rooted at a class.
struct DomainSome {
  std::string cls;
  std::string method;
  std::vector<InstanceId> instances;
};
// A method sent to all instances of the domain rooted at a class.
struct DomainAll {
  std::string cls;
  std::string method;
};

using AccessRequest = std::variant<OneInstance, Extent, DomainSome, DomainAll>;

inline const std::string& request_method(const AccessRequest& r) {
  return std::visit([](const auto& x) -> const std::string& { return x.method; }, r);
}

struct ClassLockShape {
  std::string cls;
  std::string mode;
  bool hierarchical = false;

  friend bool operator==(const ClassLockShape&, const ClassLockShape&) = default;
};

struct InstanceLockShape {
  InstanceId instance;
  std::string mode;

  friend bool operator==(const InstanceLockShape&, const InstanceLockShape&) = default;
};

struct Footprint {
  std::vector<ClassLockShape> classes;
  std::vector<InstanceLockShape> instances;

  std::vector<LockSpec> locks() const {
    std::vector<LockSpec> out;
    for (const auto& c : classes) {
      out.push_back({Resource::of_class(c.cls), c.mode, c.hierarchical});
    }
    for (const auto& i : instances) {
      out.push_back({Resource::of_instance(i.instance), i.mode, false});
    }
    return out;
  }

  std::size_t size() const { return classes.size() + instances.size(); }
};

namespace detail {

inline void require_method(const ClassModel& model, const std::string& c,
                           const std::string& m) {
  if (!model.has_class(c)) {
    throw Error(ErrorKind::UnknownClass, "'" + c + "'");
  }
  if (!model.has_method(c, m)) {
    throw Error(ErrorKind::InvalidRequest,
                "method '" + m + "' is not applicable to class '" + c + "'");
  }
}

}  // namespace detail

// Locks implied by a request. Validates the request against the schema.
//
//   OneInstance(i, M)      (M, false) on class(i); M on i
//   Extent(C, M)           (M, true) on C and every subclass
//   DomainSome(C, M, is)   (M, false) on C and every subclass; M on each i
//   DomainAll(C, M)        (M, true) on C and every subclass
inline Footprint footprint(const ClassModel& model, const AccessRequest& req) {
  Footprint out;
  auto whole_domain = [&](const std::string& c, const std::string& m, bool hier) {
    detail::require_method(model, c, m);
    for (const auto& d : model.domain(c)) {
      detail::require_method(model, d, m);
      out.classes.push_back({d, m, hier});
    }
  };
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, OneInstance>) {
          detail::require_method(model, r.instance.proper_class, r.method);
          out.classes.push_back({r.instance.proper_class, r.method, false});
          out.instances.push_back({r.instance, r.method});
        } else if constexpr (std::is_same_v<T, Extent> ||
                             std::is_same_v<T, DomainAll>) {
          whole_domain(r.cls, r.method, true);
        } else {
          whole_domain(r.cls, r.method, false);
          std::set<std::string> seen;
          for (const auto& i : r.instances) {
            if (!model.has_class(i.proper_class) ||
                !model.in_domain(r.cls, i.proper_class)) {
              throw Error(ErrorKind::InvalidRequest,
                          "instance '" + i.id + "' of class '" + i.proper_class +
                              "' is outside the domain of '" + r.cls + "'");
            }
            if (!seen.insert(i.id).second) {
              throw Error(ErrorKind::InvalidRequest,
                          "instance '" + i.id + "' listed twice");
            }
            out.instances.push_back({i, r.method});
          }
        }
      },
      req);
  return out;
}

// --- conflicts --------------------------------------------------------------

// Conflict rule on one resource, holders aside. Instance locks clash when
// their modes do not commute at the instance's class. Class locks clash only
// if one of them is hierarchical and the modes do not commute; two
// intentional locks leave the decision to instance granularity.
inline bool conflicts(const TableSet& tables, const LockSpec& a, const LockSpec& b) {
  if (a.resource != b.resource) return false;
  const auto& table = table_for(tables, a.resource.table_class);
  bool commute = table.commutes(a.mode, b.mode);
  if (a.resource.kind == ResourceKind::Instance) return !commute;
  return (a.hierarchical || b.hierarchical) && !commute;
}

inline bool conflicts(const TableSet& tables, const Lock& a, const Lock& b) {
  return a.holder != b.holder && conflicts(tables, a.spec, b.spec);
}

using ConflictFn = std::function<bool(const LockSpec&, const LockSpec&)>;

inline ConflictFn commutativity_conflicts(std::shared_ptr<const TableSet> tables) {
  return [tables = std::move(tables)](const LockSpec& a, const LockSpec& b) {
    return conflicts(*tables, a, b);
  };
}

// Classical read/write locking, with modes spelled "Read" and "Write". Used
// as the reference the method-level modes are compared against.
inline ConflictFn read_write_conflicts() {
  return [](const LockSpec& a, const LockSpec& b) {
    if (a.resource != b.resource) return false;
    auto ma = parse_mode(a.mode), mb = parse_mode(b.mode);
    if (!ma || !mb) {
      throw Error(ErrorKind::InvalidRequest,
                  "read/write locking needs Read or Write modes, got '" + a.mode +
                      "' and '" + b.mode + "'");
    }
    bool compatible = mode_compatible(*ma, *mb);
    if (a.resource.kind == ResourceKind::Instance) return !compatible;
    return (a.hierarchical || b.hierarchical) && !compatible;
  };
}

// --- lock table ------------------------------------------------------------

enum class TxnState { Active, Waiting, Committed, Aborted };

struct AcquireResult {
  bool granted = false;
  std::set<TxnId> blockers;

  friend bool operator==(const AcquireResult&, const AcquireResult&) = default;
};

struct LockEvent {
  std::uint64_t seq = 0;
  std::string txn;
  std::string action;    // lock, escalate, commit, abort
  std::string resource;  // empty for commit/abort
  std::string mode;
  std::string outcome;   // granted, held, blocked, granted-after-wait, released N
};

// Strict two-phase lock table. A request is granted as a whole or queued as
// a whole; locks are only released by release_all. Every public member
// takes the table mutex, so concurrent callers see a linearizable history.
class LockTable {
 public:
  explicit LockTable(ConflictFn conflict) : conflict_(std::move(conflict)) {}

  LockTable(const LockTable&) = delete;
  LockTable& operator=(const LockTable&) = delete;

  TxnId begin(std::string name = {}) {
    std::lock_guard lock(mu_);
    TxnId id = static_cast<TxnId>(txns_.size());
    if (name.empty()) name = "T" + std::to_string(id);
    txns_.push_back({std::move(name), TxnState::Active});
    return id;
  }

  std::string name(TxnId t) const {
    std::lock_guard lock(mu_);
    return txn(t).name;
  }

  TxnState state(TxnId t) const {
    std::lock_guard lock(mu_);
    return txn(t).state;
  }

  AcquireResult acquire(TxnId t, const std::vector<LockSpec>& specs) {
    std::lock_guard lock(mu_);
    auto& info = txn(t);
    if (info.state != TxnState::Active) {
      throw Error(ErrorKind::TransactionState,
                  "transaction '" + info.name + "' cannot acquire locks while " +
                      std::string(state_name(info.state)));
    }
    AcquireResult result;
    for (const auto& s : specs) {
      ++acquire_ops_;
      result.blockers.merge(blockers_of(t, s));
      if (holds_other_mode(t, s)) {
        ++escalations_;
        log(info.name, "escalate", s, "requested");
      }
    }
    if (!result.blockers.empty()) {
      for (const auto& s : specs) log(info.name, "lock", s, "blocked");
      pending_.push_back({t, specs});
      info.state = TxnState::Waiting;
      return result;
    }
    for (const auto& s : specs) log(info.name, "lock", s, grant(t, s) ? "granted" : "held");
    result.granted = true;
    return result;
  }

  // Terminal release at commit or abort. Returns the transactions whose
  // queued requests became grantable, in FIFO order.
  std::vector<TxnId> release_all(TxnId t, bool commit = true) {
    std::lock_guard lock(mu_);
    auto& info = txn(t);
    if (info.state == TxnState::Committed || info.state == TxnState::Aborted) {
      throw Error(ErrorKind::TransactionState,
                  "transaction '" + info.name + "' already " + std::string(state_name(info.state)));
    }
    if (info.state == TxnState::Waiting && commit) {
      throw Error(ErrorKind::TransactionState,
                  "transaction '" + info.name + "' cannot commit while waiting");
    }
    std::erase_if(pending_, [t](const Pending& p) { return p.txn == t; });
    std::size_t released = 0;
    for (auto it = held_.begin(); it != held_.end();) {
      released += std::erase_if(it->second, [t](const Lock& l) { return l.holder == t; });
      it = it->second.empty() ? held_.erase(it) : std::next(it);
    }
    info.state = commit ? TxnState::Committed : TxnState::Aborted;
    log(info.name, commit ? "commit" : "abort", std::nullopt,
        "released " + std::to_string(released));

    std::vector<TxnId> woken;
    for (auto it = pending_.begin(); it != pending_.end();) {
      bool free = std::all_of(it->specs.begin(), it->specs.end(), [&](const LockSpec& s) {
        return blockers_of(it->txn, s).empty();
      });
      if (!free) {
        ++it;
        continue;
      }
      auto& waiter = txns_[it->txn];
      for (const auto& s : it->specs) {
        grant(it->txn, s);
        log(waiter.name, "lock", s, "granted-after-wait");
      }
      waiter.state = TxnState::Active;
      woken.push_back(it->txn);
      it = pending_.erase(it);
    }
    return woken;
  }

  // Edges from each waiting transaction to the holders blocking it.
  std::map<TxnId, std::set<TxnId>> wait_for() const {
    std::lock_guard lock(mu_);
    return wait_for_locked();
  }

  // A cycle in the wait-for graph, rotated to start at its smallest id.
  std::optional<std::vector<TxnId>> detect_deadlock() const {
    std::lock_guard lock(mu_);
    return find_cycle(wait_for_locked());
  }

  std::vector<Lock> granted() const {
    std::lock_guard lock(mu_);
    std::vector<Lock> out;
    for (const auto& [r, locks] : held_) out.insert(out.end(), locks.begin(), locks.end());
    return out;
  }

  std::vector<Lock> held_by(TxnId t) const {
    std::lock_guard lock(mu_);
    std::vector<Lock> out;
    for (const auto& [r, locks] : held_) {
      for (const auto& l : locks) {
        if (l.holder == t) out.push_back(l);
      }
    }
    return out;
  }

  // Per-resource checks performed by acquire() since construction.
  std::size_t acquire_operations() const {
    std::lock_guard lock(mu_);
    return acquire_ops_;
  }

  // Requests for a new mode on a resource the transaction already holds.
  std::size_t escalations() const {
    std::lock_guard lock(mu_);
    return escalations_;
  }

  std::vector<LockEvent> events() const {
    std::lock_guard lock(mu_);
    return events_;
  }

  bool conflict(const LockSpec& a, const LockSpec& b) const { return conflict_(a, b); }

  static std::string_view state_name(TxnState s) {
    switch (s) {
      case TxnState::Active: return "active";
      case TxnState::Waiting: return "waiting";
      case TxnState::Committed: return "committed";
      case TxnState::Aborted: return "aborted";
    }
    return "?";
  }

  static std::optional<std::vector<TxnId>> find_cycle(
      const std::map<TxnId, std::set<TxnId>>& graph) {
    enum : unsigned char { White, Grey, Black };
    std::map<TxnId, unsigned char> colour;
    std::vector<TxnId> path;
    std::optional<std::vector<TxnId>> found;

    std::function<bool(TxnId)> dfs = [&](TxnId v) {
      colour[v] = Grey;
      path.push_back(v);
      auto it = graph.find(v);
      if (it != graph.end()) {
        for (TxnId w : it->second) {
          if (colour[w] == Grey) {
            auto start = std::find(path.begin(), path.end(), w);
            std::vector<TxnId> cycle(start, path.end());
            std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()),
                        cycle.end());
            found = std::move(cycle);
            return true;
          }
          if (colour[w] == White && dfs(w)) return true;
        }
      }
      path.pop_back();
      colour[v] = Black;
      return false;
    };
    for (const auto& [v, _] : graph) {
      if (colour[v] == White && dfs(v)) break;
    }
    return found;
  }

 private:
  struct TxnInfo {
    std::string name;
    TxnState state;
  };
  struct Pending {
    TxnId txn;
    std::vector<LockSpec> specs;
  };

  TxnInfo& txn(TxnId t) {
    if (t >= txns_.size()) {
      throw Error(ErrorKind::TransactionState, "unknown transaction " + std::to_string(t));
    }
    return txns_[t];
  }
  const TxnInfo& txn(TxnId t) const { return const_cast<LockTable*>(this)->txn(t); }

  std::set<TxnId> blockers_of(TxnId t, const LockSpec& s) const {
    std::set<TxnId> out;
    auto it = held_.find(s.resource);
    if (it == held_.end()) return out;
    for (const auto& l : it->second) {
      if (l.holder != t && conflict_(l.spec, s)) out.insert(l.holder);
    }
    return out;
  }

  bool holds_other_mode(TxnId t, const LockSpec& s) const {
    auto it = held_.find(s.resource);
    if (it == held_.end()) return false;
    bool holds_any = false, holds_same = false;
    for (const auto& l : it->second) {
      if (l.holder != t) continue;
      holds_any = true;
      if (l.spec == s) holds_same = true;
    }
    return holds_any && !holds_same;
  }

  // False when the identical lock was already held.
  bool grant(TxnId t, const LockSpec& s) {
    auto& locks = held_[s.resource];
    for (const auto& l : locks) {
      if (l.holder == t && l.spec == s) return false;
    }
    locks.push_back({t, s});
    return true;
  }

  std::map<TxnId, std::set<TxnId>> wait_for_locked() const {
    std::map<TxnId, std::set<TxnId>> out;
    for (const auto& p : pending_) {
      auto& edges = out[p.txn];
      for (const auto& s : p.specs) edges.merge(blockers_of(p.txn, s));
    }
    return out;
  }

  void log(const std::string& txn, std::string action,
           const std::optional<LockSpec>& spec, std::string outcome) {
    LockEvent e;
    e.seq = events_.size();
    e.txn = txn;
    e.action = std::move(action);
    if (spec) {
      e.resource = to_string(spec->resource);
      e.mode = mode_string(*spec);
    }
    e.outcome = std::move(outcome);
    events_.push_back(std::move(e));
  }

  ConflictFn conflict_;
  mutable std::mutex mu_;
  std::vector<TxnInfo> txns_;
  std::map<Resource, std::vector<Lock>> held_;
  std::deque<Pending> pending_;
  std::vector<LockEvent> events_;
  std::size_t acquire_ops_ = 0;
  std::size_t escalations_ = 0;
};

// The protocol front end: turns access requests into footprints and runs
// them through a lock table using per-class commutativity.
class LockManager {
 public:
  LockManager(const ClassModel& model, TableSet tables)
      : model_(&model),
        tables_(std::make_shared<const TableSet>(std::move(tables))),
        table_(commutativity_conflicts(tables_)) {}

  explicit LockManager(const ClassModel& model)
      : LockManager(model, build_all_tables(model)) {}

  TxnId begin(std::string name = {}) { return table_.begin(std::move(name)); }

  AcquireResult acquire(TxnId t, const AccessRequest& req) {
    return table_.acquire(t, footprint(*model_, req).locks());
  }

  std::vector<TxnId> release_all(TxnId t, bool commit = true) {
    return table_.release_all(t, commit);
  }

  std::optional<std::vector<TxnId>> detect_deadlock() const {
    return table_.detect_deadlock();
  }

  LockTable& table() noexcept { return table_; }
  const LockTable& table() const noexcept { return table_; }
  const TableSet& tables() const noexcept { return *tables_; }
  const ClassModel& model() const noexcept { return *model_; }

 private:
  const ClassModel* model_;
  std::shared_ptr<const TableSet> tables_;
  LockTable table_;
};

}  // namespace finecc
