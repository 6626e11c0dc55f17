#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "finecc/error.hpp"

namespace finecc {

enum class BaseType { Int, Bool, Float, String, Ref };

struct FieldType {
  BaseType base = BaseType::Int;
  std::string ref_class;  // set iff base == Ref

  friend bool operator==(const FieldType&, const FieldType&) = default;
};

struct FieldDecl {
  std::string name;
  FieldType type;
  std::string declaring_class;
  SourcePos pos;

  friend bool operator==(const FieldDecl& a, const FieldDecl& b) {
    return a.name == b.name && a.type == b.type &&
           a.declaring_class == b.declaring_class;
  }
};

// f := expr(reads...)
struct Assign {
  std::string target;
  std::vector<std::string> reads;
  friend bool operator==(const Assign&, const Assign&) = default;
};

// use(reads...)
struct Use {
  std::vector<std::string> reads;
  friend bool operator==(const Use&, const Use&) = default;
};

// send M to self
struct SelfSend {
  std::string method;
  friend bool operator==(const SelfSend&, const SelfSend&) = default;
};

// send C.M to self
struct PrefixedSend {
  std::string ancestor;
  std::string method;
  friend bool operator==(const PrefixedSend&, const PrefixedSend&) = default;
};

// send M to f
struct FieldSend {
  std::string field;
  std::string method;
  friend bool operator==(const FieldSend&, const FieldSend&) = default;
};

using StatementKind = std::variant<Assign, Use, SelfSend, PrefixedSend, FieldSend>;

struct Statement {
  StatementKind kind;
  SourcePos pos;

  friend bool operator==(const Statement& a, const Statement& b) {
    return a.kind == b.kind;
  }
};

struct MethodDef {
  std::string name;
  std::vector<Statement> body;
  std::string defining_class;
  SourcePos pos;

  friend bool operator==(const MethodDef& a, const MethodDef& b) {
    return a.name == b.name && a.body == b.body &&
           a.defining_class == b.defining_class;
  }
};

struct ClassDef {
  std::string name;
  std::vector<std::string> supers;
  std::vector<FieldDecl> own_fields;
  std::vector<MethodDef> own_methods;
  SourcePos pos;

  const MethodDef* find_method(std::string_view m) const {
    for (const auto& md : own_methods) {
      if (md.name == m) return &md;
    }
    return nullptr;
  }

  friend bool operator==(const ClassDef& a, const ClassDef& b) {
    return a.name == b.name && a.supers == b.supers &&
           a.own_fields == b.own_fields && a.own_methods == b.own_methods;
  }
};

// (class, method) identity used for prefixed calls, graph vertices and
// access modes.
struct MethodRef {
  std::string cls;
  std::string method;

  friend auto operator<=>(const MethodRef&, const MethodRef&) = default;
  friend bool operator==(const MethodRef&, const MethodRef&) = default;
};

// Borrowed (class, method) pair for lookups without copying strings.
struct MethodRefView {
  std::string_view cls;
  std::string_view method;

  friend bool operator==(const MethodRefView& a, const MethodRef& b) {
    return a.cls == b.cls && a.method == b.method;
  }
};

// Hash for MethodRef keys; transparent over MethodRefView.
struct MethodRefHash {
  using is_transparent = void;

  std::size_t operator()(const MethodRefView& r) const noexcept {
    std::size_t h = std::hash<std::string_view>{}(r.cls);
    return h ^ (std::hash<std::string_view>{}(r.method) + 0x9e3779b97f4a7c15ULL + (h << 6) +
                (h >> 2));
  }
  std::size_t operator()(const MethodRef& r) const noexcept {
    return (*this)(MethodRefView{r.cls, r.method});
  }
};

inline std::string to_string(const MethodRef& r) { return r.cls + "." + r.method; }

// One applicable method of a class and the class its code comes from.
struct MethodBinding {
  std::string name;
  std::string defining_class;

  friend bool operator==(const MethodBinding&, const MethodBinding&) = default;
};

// Validated schema with inheritance resolved. Immutable once built.
class ClassModel {
 public:
  // Validates `classes` and populates every cache. Throws Error.
  static ClassModel build(std::vector<ClassDef> classes);

  const std::vector<ClassDef>& classes() const noexcept { return classes_; }

  std::vector<std::string> class_names() const {
    std::vector<std::string> out;
    out.reserve(classes_.size());
    for (const auto& c : classes_) out.push_back(c.name);
    return out;
  }

  bool has_class(std::string_view c) const {
    return by_name_.count(std::string(c)) != 0;
  }

  const ClassDef& cls(std::string_view c) const {
    return classes_[slot(c)];
  }

  // Linearized ancestors, nearest first, excluding `c`.
  const std::vector<std::string>& ancestors(std::string_view c) const {
    return resolved_[slot(c)].ancestors;
  }

  bool is_proper_ancestor(std::string_view anc, std::string_view c) const {
    const auto& a = ancestors(c);
    return std::find(a.begin(), a.end(), anc) != a.end();
  }

  // All classes having `c` among their ancestors, in declaration order.
  std::vector<std::string> subclasses(std::string_view c) const {
    std::size_t target = slot(c);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      if (i == target) continue;
      if (is_proper_ancestor(classes_[target].name, classes_[i].name)) {
        out.push_back(classes_[i].name);
      }
    }
    return out;
  }

  // `c` followed by its subclasses.
  std::vector<std::string> domain(std::string_view c) const {
    std::vector<std::string> out{std::string(c)};
    auto subs = subclasses(c);
    out.insert(out.end(), subs.begin(), subs.end());
    return out;
  }

  bool in_domain(std::string_view root, std::string_view c) const {
    return root == c || is_proper_ancestor(root, c);
  }

  // FIELDS(C): ancestor-first, declaration order.
  const std::vector<std::string>& fields(std::string_view c) const {
    return resolved_[slot(c)].fields;
  }

  const FieldDecl* find_field(std::string_view c, std::string_view f) const {
    const auto& r = resolved_[slot(c)];
    auto it = r.field_decl.find(std::string(f));
    return it == r.field_decl.end() ? nullptr : &it->second;
  }

  // METHODS(C) with the defining class of each.
  const std::vector<MethodBinding>& methods(std::string_view c) const {
    return resolved_[slot(c)].methods;
  }

  std::vector<std::string> method_names(std::string_view c) const {
    std::vector<std::string> out;
    for (const auto& b : methods(c)) out.push_back(b.name);
    return out;
  }

  bool has_method(std::string_view c, std::string_view m) const {
    const auto& r = resolved_[slot(c)];
    return r.method_slot.find(std::string(m)) != r.method_slot.end();
  }

  std::optional<std::string> defining_class(std::string_view c,
                                            std::string_view m) const {
    const auto& r = resolved_[slot(c)];
    auto it = r.method_slot.find(std::string(m));
    if (it == r.method_slot.end()) return std::nullopt;
    return r.methods[it->second].defining_class;
  }

  // The code executed for `m` on a proper instance of `c`.
  const MethodDef& method_def(std::string_view c, std::string_view m) const {
    const auto& r = resolved_[slot(c)];
    auto it = r.method_slot.find(std::string(m));
    if (it == r.method_slot.end()) {
      throw Error(ErrorKind::UnknownMethod,
                  "method '" + std::string(m) + "' is not applicable to class '" +
                      std::string(c) + "'");
    }
    auto [k, idx] = r.definitions[it->second];
    return classes_[k].own_methods[idx];
  }

  friend bool operator==(const ClassModel& a, const ClassModel& b) {
    return a.classes_ == b.classes_;
  }

 private:
  struct Resolved {
    std::vector<std::string> ancestors;
    std::vector<std::string> fields;
    std::unordered_map<std::string, FieldDecl> field_decl;
    std::vector<MethodBinding> methods;
    std::unordered_map<std::string, std::size_t> method_slot;
    // (class slot, index in own_methods) of each binding
    std::vector<std::pair<std::size_t, std::size_t>> definitions;
  };

  std::size_t slot(std::string_view c) const {
    auto it = by_name_.find(std::string(c));
    if (it == by_name_.end()) {
      throw Error(ErrorKind::UnknownClass, "'" + std::string(c) + "'");
    }
    return it->second;
  }

  void check_names();
  void check_acyclic() const;
  void resolve();
  void check_bodies() const;

  std::vector<ClassDef> classes_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::vector<Resolved> resolved_;
};

// Left-to-right depth-first walk of the supers, dropping duplicates and
// keeping the last occurrence. For D(B, C), B(A), C(A) this gives [B, C, A].
inline std::vector<std::string> linearize(
    const std::string& start,
    const std::unordered_map<std::string, const ClassDef*>& defs) {
  std::vector<std::string> walk;
  // Iterative pre-order DFS; inheritance is known to be acyclic here.
  std::vector<std::pair<const ClassDef*, std::size_t>> stack;
  stack.emplace_back(defs.at(start), 0);
  while (!stack.empty()) {
    auto& [def, next] = stack.back();
    if (next == def->supers.size()) {
      stack.pop_back();
      continue;
    }
    const std::string& s = def->supers[next++];
    walk.push_back(s);
    stack.emplace_back(defs.at(s), 0);
  }
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
    if (seen.insert(*it).second) out.push_back(*it);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

inline ClassModel ClassModel::build(std::vector<ClassDef> classes) {
  ClassModel model;
  model.classes_ = std::move(classes);
  for (auto& c : model.classes_) {
    for (auto& f : c.own_fields) f.declaring_class = c.name;
    for (auto& m : c.own_methods) m.defining_class = c.name;
  }
  model.check_names();
  model.check_acyclic();
  model.resolve();
  model.check_bodies();
  return model;
}

inline void ClassModel::check_names() {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto& c = classes_[i];
    if (c.name == "self") {
      throw Error(ErrorKind::ReservedName, "'self' cannot name a class", c.pos);
    }
    if (!by_name_.emplace(c.name, i).second) {
      throw Error(ErrorKind::DuplicateClass, "'" + c.name + "'", c.pos);
    }
  }
  for (const auto& c : classes_) {
    std::set<std::string> seen;
    for (const auto& s : c.supers) {
      if (!by_name_.count(s)) {
        throw Error(ErrorKind::UnknownClass,
                    "superclass '" + s + "' of '" + c.name + "' is not declared",
                    c.pos);
      }
      if (!seen.insert(s).second) {
        throw Error(ErrorKind::DuplicateClass,
                    "'" + s + "' listed twice among the superclasses of '" +
                        c.name + "'",
                    c.pos);
      }
    }
    std::set<std::string> own_fields;
    for (const auto& f : c.own_fields) {
      if (!own_fields.insert(f.name).second) {
        throw Error(ErrorKind::DuplicateField,
                    "'" + f.name + "' declared twice in '" + c.name + "'", f.pos);
      }
    }
    std::set<std::string> methods;
    for (const auto& m : c.own_methods) {
      if (!methods.insert(m.name).second) {
        throw Error(ErrorKind::DuplicateMethod,
                    "'" + m.name + "' defined twice in '" + c.name + "'", m.pos);
      }
    }
    for (const auto& f : c.own_fields) {
      if (f.name == "self") {
        throw Error(ErrorKind::ReservedName, "'self' cannot name a field", f.pos);
      }
      if (f.type.base == BaseType::Ref && !by_name_.count(f.type.ref_class)) {
        throw Error(ErrorKind::UnknownClass,
                    "field '" + f.name + "' references undeclared class '" +
                        f.type.ref_class + "'",
                    f.pos);
      }
    }
  }
}

inline void ClassModel::check_acyclic() const {
  enum : unsigned char { White, Grey, Black };
  std::vector<unsigned char> colour(classes_.size(), White);
  for (std::size_t root = 0; root < classes_.size(); ++root) {
    if (colour[root] != White) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    colour[root] = Grey;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const auto& supers = classes_[v].supers;
      if (next == supers.size()) {
        colour[v] = Black;
        stack.pop_back();
        continue;
      }
      std::size_t w = by_name_.at(supers[next++]);
      if (colour[w] == Grey) {
        throw Error(ErrorKind::InheritanceCycle,
                    "'" + classes_[w].name + "' inherits from itself through '" +
                        classes_[v].name + "'",
                    classes_[v].pos);
      }
      if (colour[w] == White) {
        colour[w] = Grey;
        stack.emplace_back(w, 0);
      }
    }
  }
}

inline void ClassModel::resolve() {
  std::unordered_map<std::string, const ClassDef*> defs;
  for (const auto& c : classes_) defs.emplace(c.name, &c);
  std::vector<std::unordered_map<std::string, std::size_t>> own(classes_.size());
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    for (std::size_t j = 0; j < classes_[k].own_methods.size(); ++j) {
      own[k].emplace(classes_[k].own_methods[j].name, j);
    }
  }

  resolved_.resize(classes_.size());
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto& c = classes_[i];
    auto& r = resolved_[i];
    r.ancestors = linearize(c.name, defs);

    // Ancestor-first order: farthest ancestor first, the class itself last.
    std::vector<const ClassDef*> top_down;
    for (auto it = r.ancestors.rbegin(); it != r.ancestors.rend(); ++it) {
      top_down.push_back(defs.at(*it));
    }
    top_down.push_back(&c);

    for (const ClassDef* d : top_down) {
      for (const auto& f : d->own_fields) {
        auto [it, inserted] = r.field_decl.emplace(f.name, f);
        if (inserted) {
          r.fields.push_back(f.name);
        } else if (it->second.declaring_class != f.declaring_class) {
          throw Error(ErrorKind::DuplicateField,
                      "field '" + f.name + "' of '" + c.name +
                          "' is declared in both '" +
                          it->second.declaring_class + "' and '" +
                          f.declaring_class + "'",
                      f.pos);
        }
      }
    }

    // Method names in ancestor-first order; the binding is the first
    // definition along [C, linearized ancestors...].
    std::vector<std::size_t> lookup{i};
    for (const auto& a : r.ancestors) lookup.push_back(by_name_.at(a));
    for (const ClassDef* d : top_down) {
      for (const auto& m : d->own_methods) {
        if (r.method_slot.count(m.name)) continue;
        for (std::size_t k : lookup) {
          auto hit = own[k].find(m.name);
          if (hit == own[k].end()) continue;
          r.method_slot.emplace(m.name, r.methods.size());
          r.methods.push_back({m.name, classes_[k].name});
          r.definitions.emplace_back(k, hit->second);
          break;
        }
      }
    }
  }
}

inline void ClassModel::check_bodies() const {
  for (const auto& c : classes_) {
    const auto& r = resolved_[by_name_.at(c.name)];
    auto visible = [&](const std::string& f, SourcePos pos) {
      if (!r.field_decl.count(f)) {
        throw Error(ErrorKind::UnknownField,
                    "'" + f + "' is not a field of '" + c.name + "'", pos);
      }
    };
    for (const auto& m : c.own_methods) {
      for (const auto& st : m.body) {
        std::visit(
            [&](const auto& s) {
              using T = std::decay_t<decltype(s)>;
              if constexpr (std::is_same_v<T, Assign>) {
                visible(s.target, st.pos);
                for (const auto& f : s.reads) visible(f, st.pos);
              } else if constexpr (std::is_same_v<T, Use>) {
                for (const auto& f : s.reads) visible(f, st.pos);
              } else if constexpr (std::is_same_v<T, SelfSend>) {
                // METHODS only grows towards subclasses, so checking at the
                // defining class covers every class inheriting this code.
                if (!r.method_slot.count(s.method)) {
                  throw Error(ErrorKind::UnknownMethod,
                              "'" + s.method + "' sent to self in '" + c.name +
                                  "." + m.name + "' is not a method of '" +
                                  c.name + "'",
                              st.pos);
                }
              } else if constexpr (std::is_same_v<T, PrefixedSend>) {
                if (std::find(r.ancestors.begin(), r.ancestors.end(),
                              s.ancestor) == r.ancestors.end()) {
                  throw Error(ErrorKind::BadPrefixedSend,
                              "'" + s.ancestor + "' is not an ancestor of '" +
                                  c.name + "'",
                              st.pos);
                }
                const auto& ar = resolved_[by_name_.at(s.ancestor)];
                if (!ar.method_slot.count(s.method)) {
                  throw Error(ErrorKind::BadPrefixedSend,
                              "'" + s.method + "' is not a method of '" +
                                  s.ancestor + "'",
                              st.pos);
                }
              } else if constexpr (std::is_same_v<T, FieldSend>) {
                visible(s.field, st.pos);
              }
            },
            st.kind);
      }
    }
  }
}

}  // namespace finecc
