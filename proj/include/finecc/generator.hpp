#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace finecc {

struct GenParams {
  std::size_t classes = 6;
  std::size_t fields_per_class = 3;
  std::size_t method_pool = 6;       // distinct method names shared by all classes
  std::size_t methods_per_class = 3;
  std::size_t statements_per_method = 4;
  double multiple_inheritance = 0.3;  // chance a class gets a second superclass
  double self_call_density = 0.3;     // chance a statement is a self-send
  double prefixed_call_density = 0.2; // chance an override calls an ancestor's version
  double recursion = 0.2;             // chance a method sends itself or a later sibling
};

namespace detail {

// Bounded draws built on the raw engine output, which the standard fixes
// exactly, so generated text does not depend on the library's distributions.
class GenRng {
 public:
  explicit GenRng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return n == 0 ? 0 : engine_() % n; }

  bool chance(double p) {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p;
  }

  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

// Valid schema source, a deterministic function of `seed` and `params`.
inline std::string generate_random_schema(std::uint64_t seed, const GenParams& params = {}) {
  detail::GenRng rng(seed);
  const std::size_t n = std::max<std::size_t>(params.classes, 1);

  struct Gen {
    std::string name;
    std::vector<std::size_t> supers;
    std::vector<std::string> own_fields;
    std::vector<std::string> own_methods;
    std::set<std::size_t> ancestors;
    std::vector<std::string> fields;      // visible
    std::set<std::string> methods;        // applicable
  };
  std::vector<Gen> cls(n);
  std::vector<std::string> pool;
  for (std::size_t k = 0; k < std::max<std::size_t>(params.method_pool, 1); ++k) {
    pool.push_back("m" + std::to_string(k));
  }

  for (std::size_t i = 0; i < n; ++i) {
    Gen& g = cls[i];
    g.name = "K" + std::to_string(i);
    if (i > 0 && rng.below(4) != 0) {
      g.supers.push_back(rng.below(i));
      if (i > 1 && rng.chance(params.multiple_inheritance)) {
        std::size_t other = rng.below(i);
        if (other != g.supers[0]) g.supers.push_back(other);
      }
    }
    for (std::size_t s : g.supers) {
      g.ancestors.insert(s);
      g.ancestors.insert(cls[s].ancestors.begin(), cls[s].ancestors.end());
    }
    // Fields are unique per declaring class, so diamonds never clash.
    std::set<std::string> seen;
    for (std::size_t a : g.ancestors) {
      for (const auto& f : cls[a].own_fields) {
        if (seen.insert(f).second) g.fields.push_back(f);
      }
      g.methods.insert(cls[a].own_methods.begin(), cls[a].own_methods.end());
    }
    std::size_t nf = rng.below(params.fields_per_class + 1);
    for (std::size_t k = 0; k < nf; ++k) {
      g.own_fields.push_back("f" + std::to_string(i) + "_" + std::to_string(k));
      g.fields.push_back(g.own_fields.back());
    }
    std::size_t nm = rng.below(params.methods_per_class + 1);
    std::set<std::string> chosen;
    for (std::size_t k = 0; k < nm; ++k) chosen.insert(rng.pick(pool));
    g.own_methods.assign(chosen.begin(), chosen.end());
    g.methods.insert(g.own_methods.begin(), g.own_methods.end());
  }

  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    const Gen& g = cls[i];
    out += "class " + g.name;
    for (std::size_t k = 0; k < g.supers.size(); ++k) {
      out += k == 0 ? " inherits " : ", ";
      out += cls[g.supers[k]].name;
    }
    out += " {\n";
    if (!g.own_fields.empty()) {
      out += "  fields {\n";
      for (const auto& f : g.own_fields) {
        // Roughly one field in four is a reference to some class.
        if (rng.below(4) == 0) {
          out += "    " + f + ": ref " + cls[rng.below(n)].name + ";\n";
        } else {
          static const char* kTypes[] = {"int", "bool", "float", "string"};
          out += "    " + f + ": " + kTypes[rng.below(4)] + ";\n";
        }
      }
      out += "  }\n";
    }
    std::vector<std::string> applicable(g.methods.begin(), g.methods.end());
    std::vector<std::size_t> ancestors(g.ancestors.begin(), g.ancestors.end());
    for (std::size_t mi = 0; mi < g.own_methods.size(); ++mi) {
      const std::string& m = g.own_methods[mi];
      out += "  method " + m + " {\n";
      // Overrides sometimes extend an ancestor's version.
      std::vector<std::size_t> providers;
      for (std::size_t a : ancestors) {
        if (cls[a].methods.count(m)) providers.push_back(a);
      }
      if (!providers.empty() && rng.chance(params.prefixed_call_density)) {
        out += "    send " + cls[rng.pick(providers)].name + "." + m + " to self;\n";
      }
      if (rng.chance(params.recursion)) {
        // Self or a later sibling; together with ordinary self-sends this
        // closes cycles.
        std::size_t target = mi + rng.below(g.own_methods.size() - mi);
        out += "    send " + g.own_methods[target] + " to self;\n";
      }
      std::size_t ns = rng.below(params.statements_per_method + 1);
      for (std::size_t k = 0; k < ns; ++k) {
        if (rng.chance(params.self_call_density)) {
          out += "    send " + rng.pick(applicable) + " to self;\n";
          continue;
        }
        if (!ancestors.empty() && rng.chance(params.prefixed_call_density / 2)) {
          std::size_t a = rng.pick(ancestors);
          std::vector<std::string> am(cls[a].methods.begin(), cls[a].methods.end());
          if (!am.empty()) {
            out += "    send " + cls[a].name + "." + rng.pick(am) + " to self;\n";
            continue;
          }
        }
        if (g.fields.empty()) continue;
        switch (rng.below(3)) {
          case 0: {
            std::string reads;
            std::size_t nr = rng.below(3);
            for (std::size_t r = 0; r < nr; ++r) {
              if (r) reads += ", ";
              reads += rng.pick(g.fields);
            }
            out += "    " + rng.pick(g.fields) + " := expr(" + reads + ");\n";
            break;
          }
          case 1: {
            std::string reads = rng.pick(g.fields);
            if (rng.chance(0.5)) reads += ", " + rng.pick(g.fields);
            out += "    use(" + reads + ");\n";
            break;
          }
          default:
            out += "    send " + rng.pick(pool) + " to " + rng.pick(g.fields) + ";\n";
            break;
        }
      }
      out += "  }\n";
    }
    out += "}\n";
  }
  return out;
}

// A single class whose methods form a self-call chain m0 -> m1 -> ... ->
// m(n-1). Method k writes field k mod `fields` and reads the next one.
inline std::string generate_chain_schema(std::size_t methods, std::size_t fields = 8) {
  fields = std::max<std::size_t>(fields, 1);
  std::string out = "class Chain {\n  fields {\n";
  for (std::size_t f = 0; f < fields; ++f) out += "    c" + std::to_string(f) + ": int;\n";
  out += "  }\n";
  for (std::size_t k = 0; k < methods; ++k) {
    out += "  method m" + std::to_string(k) + " {\n";
    out += "    c" + std::to_string(k % fields) + " := expr(c" +
           std::to_string((k + 1) % fields) + ");\n";
    if (k + 1 < methods) out += "    send m" + std::to_string(k + 1) + " to self;\n";
    out += "  }\n";
  }
  out += "}\n";
  return out;
}

}  // namespace finecc
