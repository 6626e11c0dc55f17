#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "finecc/schema.hpp"
#include "finecc/vectors.hpp"

namespace finecc {

// Per (class, method) facts read off a method body.
struct MethodFacts {
  AccessVector dav;                // over FIELDS(C)
  std::set<std::string> dsc;       // direct self-calls
  std::set<MethodRef> psc;         // prefixed self-calls
};

namespace detail {

inline const MethodDef& applicable_method(const ClassModel& model,
                                          std::string_view c,
                                          std::string_view m) {
  return model.method_def(c, m);
}

// Field usage of `def` over the index of `blank`, an all-Null vector over
// FIELDS(c). A field that is assigned anywhere is Write regardless of where
// else it appears. An inherited method reads the same code, so its vector
// is that of its defining class widened with Null entries.
inline AccessVector body_access(AccessVector v, const MethodDef& def) {
  for (const auto& st : def.body) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Assign>) {
            v.raise(s.target, Mode::Write);
            for (const auto& f : s.reads) v.raise(f, Mode::Read);
          } else if constexpr (std::is_same_v<T, Use>) {
            for (const auto& f : s.reads) v.raise(f, Mode::Read);
          } else if constexpr (std::is_same_v<T, FieldSend>) {
            v.raise(s.field, Mode::Read);
          }
        },
        st.kind);
  }
  return v;
}

// Self-directed calls of `def`, plain into *dsc and prefixed into *psc
// (either may be null). Prefixed targets are checked against the ancestors
// of the defining class, which stay ancestors of every inheriting class.
inline void self_calls(const ClassModel& model, std::string_view c, const MethodDef& def,
                       std::set<std::string>* dsc, std::set<MethodRef>* psc) {
  for (const auto& st : def.body) {
    if (const auto* s = std::get_if<SelfSend>(&st.kind)) {
      if (!dsc) continue;
      if (!model.has_method(c, s->method)) {
        throw Error(ErrorKind::UnknownMethod,
                    "'" + s->method + "' is not a method of '" + std::string(c) + "'",
                    st.pos);
      }
      dsc->insert(s->method);
    } else if (const auto* p = std::get_if<PrefixedSend>(&st.kind)) {
      if (!psc) continue;
      if (!model.has_class(p->ancestor) ||
          !model.is_proper_ancestor(p->ancestor, def.defining_class)) {
        throw Error(ErrorKind::BadPrefixedSend,
                    "'" + p->ancestor + "' is not an ancestor of '" +
                        def.defining_class + "'",
                    st.pos);
      }
      if (!model.has_method(p->ancestor, p->method)) {
        throw Error(ErrorKind::BadPrefixedSend,
                    "'" + p->method + "' is not a method of '" + p->ancestor + "'",
                    st.pos);
      }
      psc->insert({p->ancestor, p->method});
    }
  }
}

}  // namespace detail

// Direct access vector of `m` in `c`.
inline AccessVector extract_dav(const ClassModel& model, std::string_view c,
                                std::string_view m) {
  const MethodDef& def = detail::applicable_method(model, c, m);
  return detail::body_access(AccessVector(model.fields(c)), def);
}

inline std::set<std::string> extract_dsc(const ClassModel& model,
                                         std::string_view c, std::string_view m) {
  std::set<std::string> out;
  detail::self_calls(model, c, detail::applicable_method(model, c, m), &out, nullptr);
  return out;
}

inline std::set<MethodRef> extract_psc(const ClassModel& model, std::string_view c,
                                       std::string_view m) {
  std::set<MethodRef> out;
  detail::self_calls(model, c, detail::applicable_method(model, c, m), nullptr, &out);
  return out;
}

// All three at once; `blank` is an all-Null vector over FIELDS(c).
inline MethodFacts extract_facts(const ClassModel& model, std::string_view c,
                                 std::string_view m, const AccessVector& blank) {
  const MethodDef& def = detail::applicable_method(model, c, m);
  MethodFacts out{detail::body_access(blank, def), {}, {}};
  detail::self_calls(model, c, def, &out.dsc, &out.psc);
  return out;
}

inline MethodFacts extract_facts(const ClassModel& model, std::string_view c,
                                 std::string_view m) {
  return extract_facts(model, c, m, AccessVector(model.fields(c)));
}

// Memoizing front end over one model. Results are identical to calling the
// free functions; not thread-safe, use one per thread.
class FactsCache {
 public:
  explicit FactsCache(const ClassModel& model) : model_(&model) {}

  const MethodFacts& get(const std::string& c, const std::string& m) {
    auto it = cache_.find(MethodRefView{c, m});
    if (it == cache_.end()) {
      it = cache_.emplace(MethodRef{c, m}, extract_facts(*model_, c, m, blank(c))).first;
    }
    return it->second;
  }

  // All-Null vector over FIELDS(c); vectors derived from it share its index.
  const AccessVector& blank(const std::string& c) {
    auto it = blanks_.find(c);
    if (it == blanks_.end()) it = blanks_.emplace(c, AccessVector(model_->fields(c))).first;
    return it->second;
  }

  const ClassModel& model() const { return *model_; }

 private:
  const ClassModel* model_;
  std::unordered_map<MethodRef, MethodFacts, MethodRefHash, std::equal_to<>> cache_;
  std::unordered_map<std::string, AccessVector> blanks_;
};

}  // namespace finecc
