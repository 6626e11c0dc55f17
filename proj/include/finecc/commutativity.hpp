#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "finecc/tav_graph.hpp"

namespace finecc {

// One access mode per applicable method of a class, with a dense symmetric
// commutativity matrix over them. Lookups are a hash probe plus an index.
class CommutativityTable {
 public:
  CommutativityTable() = default;

  explicit CommutativityTable(const ClassTavs& tavs)
      : cls_(tavs.cls), methods_(tavs.methods) {
    const std::size_t n = methods_.size();
    for (std::size_t i = 0; i < n; ++i) ordinal_.emplace(methods_[i], i);
    matrix_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        std::uint8_t v = av_commutes(tavs.tavs[i], tavs.tavs[j]) ? 1 : 0;
        matrix_[i * n + j] = v;
        matrix_[j * n + i] = v;
      }
    }
  }

  // Reader/writer table: a method is a writer iff its vector has a Write,
  // and only reader pairs commute.
  static CommutativityTable reader_writer(const ClassTavs& tavs) {
    CommutativityTable t;
    t.cls_ = tavs.cls;
    t.methods_ = tavs.methods;
    const std::size_t n = t.methods_.size();
    for (std::size_t i = 0; i < n; ++i) t.ordinal_.emplace(t.methods_[i], i);
    t.matrix_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        t.matrix_[i * n + j] =
            !tavs.tavs[i].has_write() && !tavs.tavs[j].has_write() ? 1 : 0;
      }
    }
    return t;
  }

  const std::string& cls() const noexcept { return cls_; }
  const std::vector<std::string>& methods() const noexcept { return methods_; }
  std::size_t size() const noexcept { return methods_.size(); }

  bool has_mode(std::string_view m) const {
    return ordinal_.count(std::string(m)) != 0;
  }

  std::size_t ordinal(std::string_view m) const {
    auto it = ordinal_.find(std::string(m));
    if (it == ordinal_.end()) {
      throw Error(ErrorKind::UnknownMethod,
                  "'" + std::string(m) + "' is not an access mode of class '" +
                      cls_ + "'");
    }
    return it->second;
  }

  bool commutes(std::size_t i, std::size_t j) const {
    return matrix_[i * methods_.size() + j] != 0;
  }

  bool commutes(std::string_view a, std::string_view b) const {
    return commutes(ordinal(a), ordinal(b));
  }

 private:
  std::string cls_;
  std::vector<std::string> methods_;
  std::unordered_map<std::string, std::size_t> ordinal_;
  std::vector<std::uint8_t> matrix_;
};

inline CommutativityTable build_table(const ClassModel& model, const std::string& c) {
  return CommutativityTable(compute_tavs(model, c));
}

inline bool modes_commute(const CommutativityTable& table, std::string_view m,
                          std::string_view other) {
  return table.commutes(m, other);
}

// Tables of every class, keyed by class name.
using TableSet = std::map<std::string, CommutativityTable, std::less<>>;

inline TableSet build_all_tables(const ClassModel& model) {
  FactsCache facts(model);
  TableSet out;
  for (const auto& c : model.classes()) {
    out.emplace(c.name, CommutativityTable(compute_tavs(facts, c.name)));
  }
  return out;
}

inline const CommutativityTable& table_for(const TableSet& tables,
                                           std::string_view cls) {
  auto it = tables.find(cls);
  if (it == tables.end()) {
    throw Error(ErrorKind::UnknownClass, "no commutativity table for '" +
                                             std::string(cls) + "'");
  }
  return it->second;
}

}  // namespace finecc
