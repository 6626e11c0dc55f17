#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace finecc {

// Field access modes, totally ordered Null < Read < Write.
enum class Mode : std::uint8_t { Null = 0, Read = 1, Write = 2 };

inline constexpr Mode kAllModes[] = {Mode::Null, Mode::Read, Mode::Write};

inline constexpr std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Null: return "Null";
    case Mode::Read: return "Read";
    case Mode::Write: return "Write";
  }
  return "?";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
  for (Mode m : kAllModes) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

// Lattice join on a total order is max.
inline constexpr Mode mode_join(Mode a, Mode b) { return a < b ? b : a; }

// Classical read/write compatibility: only Read/Write and Write/Write clash.
inline constexpr bool mode_compatible(Mode a, Mode b) {
  if (a == Mode::Null || b == Mode::Null) return true;
  return a == Mode::Read && b == Mode::Read;
}

// A bag of modes indexed by a set of field names.
//
// Only non-Null entries are stored; every indexed field without an entry
// reads as Null. The index keeps insertion order, which is used for display
// only: equality and the algebra treat the index as a set.
//
// The index is immutable once shared, so copies and vectors built from the
// same blank share one index; adding a field to a shared index copies it.
class AccessVector {
 public:
  // Ordered field names with a hash lookup for wide indexes.
  class Index {
   public:
    static constexpr std::size_t kLinearLimit = 16;

    const std::vector<std::string>& names() const noexcept { return names_; }

    std::uint32_t find(std::string_view f) const {
      if (pos_.empty()) {
        for (std::uint32_t k = 0; k < names_.size(); ++k) {
          if (names_[k] == f) return k;
        }
        return kAbsent;
      }
      auto it = pos_.find(std::string(f));
      return it == pos_.end() ? kAbsent : it->second;
    }

    std::uint32_t append(const std::string& f) {
      auto p = static_cast<std::uint32_t>(names_.size());
      names_.push_back(f);
      if (!pos_.empty()) {
        pos_.emplace(f, p);
      } else if (names_.size() > kLinearLimit) {
        for (std::uint32_t k = 0; k < names_.size(); ++k) pos_.emplace(names_[k], k);
      }
      return p;
    }

    static constexpr std::uint32_t kAbsent = UINT32_MAX;

   private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> pos_;  // only past kLinearLimit
  };

  AccessVector() = default;

  // All-Null vector over `fields`. Duplicate names are collapsed.
  explicit AccessVector(const std::vector<std::string>& fields) {
    for (const auto& f : fields) add_field(f);
  }

  AccessVector(std::initializer_list<std::pair<std::string, Mode>> entries) {
    for (const auto& [f, m] : entries) set(f, m);
  }

  const std::vector<std::string>& fields() const noexcept {
    static const std::vector<std::string> none;
    return index_ ? index_->names() : none;
  }
  std::size_t size() const noexcept { return fields().size(); }
  bool empty() const noexcept { return fields().empty(); }

  bool has_field(std::string_view f) const { return position(f) != Index::kAbsent; }

  // Mode of `f`; Null for an unindexed field as well as an indexed Null.
  Mode at(std::string_view f) const {
    std::uint32_t p = position(f);
    if (p == Index::kAbsent) return Mode::Null;
    auto it = entry(p);
    return it != entries_.end() && it->first == p ? it->second : Mode::Null;
  }

  // Adds `f` to the index (if absent) and sets its mode.
  void set(const std::string& f, Mode m) {
    std::uint32_t p = add_field(f);
    auto it = entry(p);
    bool present = it != entries_.end() && it->first == p;
    if (m == Mode::Null) {
      if (present) entries_.erase(it);
    } else if (present) {
      it->second = m;
    } else {
      entries_.insert(it, {p, m});
    }
  }

  // Adds `f` to the index and raises its mode to at least `m`.
  void raise(const std::string& f, Mode m) { raise_at(add_field(f), m); }

  // Position of `f` in the index, adding it if absent.
  std::uint32_t add_field(const std::string& f) {
    std::uint32_t p = position(f);
    if (p != Index::kAbsent) return p;
    if (!index_) {
      index_ = std::make_shared<Index>();
    } else if (index_.use_count() > 1) {
      index_ = std::make_shared<Index>(*index_);
    }
    return index_->append(f);
  }

  bool has_write() const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [](const auto& e) { return e.second == Mode::Write; });
  }

  // In-place join: the index becomes the union, common fields take the max.
  AccessVector& join_with(const AccessVector& other) {
    if (!other.index_ || this == &other) return *this;
    if (!index_) {
      *this = other;
      return *this;
    }
    if (index_ == other.index_) {
      merge_entries(other.entries_);
      return *this;
    }
    for (const auto& f : other.fields()) add_field(f);
    for (const auto& [p, m] : other.entries_) raise_at(position(other.fields()[p]), m);
    return *this;
  }

  // Same content with the index re-ordered: fields of `order` first (only
  // those present), then the rest in current order.
  AccessVector reordered(const std::vector<std::string>& order) const {
    AccessVector out;
    for (const auto& f : order) {
      if (has_field(f)) out.set(f, at(f));
    }
    for (const auto& f : fields()) {
      if (!out.has_field(f)) out.set(f, at(f));
    }
    return out;
  }

  std::size_t non_null_count() const noexcept { return entries_.size(); }

  // Calls fn(field, mode) for each non-Null entry.
  template <class F>
  void for_each_non_null(F&& fn) const {
    for (const auto& [p, m] : entries_) fn(index_->names()[p], m);
  }

  // Non-Null entries only, in index order.
  std::vector<std::pair<std::string, Mode>> non_null() const {
    std::vector<std::pair<std::string, Mode>> out;
    for_each_non_null([&](const std::string& f, Mode m) { out.emplace_back(f, m); });
    return out;
  }

  friend bool operator==(const AccessVector& a, const AccessVector& b) {
    if (a.size() != b.size() || a.entries_.size() != b.entries_.size()) return false;
    if (a.index_ == b.index_) return a.entries_ == b.entries_;
    for (const auto& f : a.fields()) {
      if (!b.has_field(f)) return false;
    }
    for (const auto& [p, m] : a.entries_) {
      if (b.at(a.fields()[p]) != m) return false;
    }
    return true;
  }

 private:
  using Entries = std::vector<std::pair<std::uint32_t, Mode>>;  // sorted by position

  std::uint32_t position(std::string_view f) const {
    return index_ ? index_->find(f) : Index::kAbsent;
  }

  void raise_at(std::uint32_t p, Mode m) {
    if (m == Mode::Null) return;
    auto it = entry(p);
    if (it != entries_.end() && it->first == p) {
      it->second = mode_join(it->second, m);
    } else {
      entries_.insert(it, {p, m});
    }
  }

  // Join of entries over the same index.
  void merge_entries(const Entries& other) {
    Entries out;
    out.reserve(entries_.size() + other.size());
    auto a = entries_.cbegin();
    auto b = other.begin();
    while (a != entries_.cend() || b != other.end()) {
      if (b == other.end() || (a != entries_.cend() && a->first < b->first)) {
        out.push_back(*a++);
      } else if (a == entries_.cend() || b->first < a->first) {
        out.push_back(*b++);
      } else {
        out.emplace_back(a->first, mode_join(a->second, b->second));
        ++a;
        ++b;
      }
    }
    entries_ = std::move(out);
  }

  Entries::iterator entry(std::uint32_t p) {
    return std::lower_bound(entries_.begin(), entries_.end(), p,
                            [](const auto& e, std::uint32_t q) { return e.first < q; });
  }
  Entries::const_iterator entry(std::uint32_t p) const {
    return std::lower_bound(entries_.begin(), entries_.end(), p,
                            [](const auto& e, std::uint32_t q) { return e.first < q; });
  }

  std::shared_ptr<Index> index_;
  Entries entries_;
};

inline AccessVector av_join(const AccessVector& a, const AccessVector& b) {
  AccessVector out = a;
  out.join_with(b);
  return out;
}

// Two vectors commute when every common field carries compatible modes.
// Null is compatible with anything, so only fields that are non-Null in both
// can break commutativity.
inline bool av_commutes(const AccessVector& a, const AccessVector& b) {
  const auto& small = a.non_null_count() <= b.non_null_count() ? a : b;
  const auto& large = &small == &a ? b : a;
  bool ok = true;
  small.for_each_non_null([&](const std::string& f, Mode m) {
    if (ok && !mode_compatible(m, large.at(f))) ok = false;
  });
  return ok;
}

// Componentwise a <= b: every field of `a` is indexed in `b` with a mode at
// least as strong.
inline bool av_leq(const AccessVector& a, const AccessVector& b) {
  for (const auto& f : a.fields()) {
    if (!b.has_field(f)) return false;
  }
  bool ok = true;
  a.for_each_non_null([&](const std::string& f, Mode m) {
    if (b.at(f) < m) ok = false;
  });
  return ok;
}

// "(Write f1, Read f2, Null f3)" in index order.
inline std::string to_string(const AccessVector& v) {
  std::string out = "(";
  bool first = true;
  for (const auto& f : v.fields()) {
    if (!first) out += ", ";
    first = false;
    out += to_string(v.at(f));
    out += ' ';
    out += f;
  }
  out += ')';
  return out;
}

}  // namespace finecc
