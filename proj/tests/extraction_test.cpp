#include <gtest/gtest.h>

#include "test_support.hpp"

namespace finecc {
namespace {

using namespace finecc::testing;
using Names = std::set<std::string>;

TEST(ExtractionTest, DirectAccessVectors) {
  const auto& model = c1c2();
  EXPECT_EQ(to_string(extract_dav(model, "c1", "m2")), "(Write f1, Read f2, Null f3)");
  EXPECT_EQ(to_string(extract_dav(model, "c2", "m3")),
            "(Null f1, Read f2, Read f3, Null f4, Null f5, Null f6)");
  EXPECT_EQ(to_string(extract_dav(model, "c2", "m2")),
            "(Null f1, Null f2, Null f3, Write f4, Read f5, Null f6)");
  EXPECT_EQ(to_string(extract_dav(model, "c2", "m4")),
            "(Null f1, Null f2, Null f3, Null f4, Read f5, Write f6)");
}

TEST(ExtractionTest, OnlySelfSendsGiveAllNull) {
  auto model = parse_schema(
      "class A { fields { x: int; y: int; } method a { send b to self; send b to self; } method b { x := expr(); } }");
  auto dav = extract_dav(model, "A", "a");
  EXPECT_EQ(dav, AccessVector(model.fields("A")));
  EXPECT_EQ(extract_dsc(model, "A", "a"), Names{"b"});
}

TEST(ExtractionTest, WriteDominatesRead) {
  auto model = parse_schema(R"(
    class A {
      fields { x: int; y: int; z: ref A; }
      method m { use(x); x := expr(x, y); send q to z; }
    }
  )");
  EXPECT_EQ(to_string(extract_dav(model, "A", "m")), "(Write x, Read y, Read z)");
}

TEST(ExtractionTest, SelfCallSets) {
  const auto& model = c1c2();
  EXPECT_EQ(extract_dsc(model, "c2", "m1"), (Names{"m2", "m3"}));
  EXPECT_TRUE(extract_dsc(model, "c1", "m3").empty());
  EXPECT_EQ(extract_psc(model, "c2", "m2"), (std::set<MethodRef>{{"c1", "m2"}}));
  EXPECT_TRUE(extract_psc(model, "c1", "m2").empty());
  // Everything else is empty except DSC(m1).
  for (const auto& c : {"c1", "c2"}) {
    for (const auto& m : model.method_names(c)) {
      if (m != "m1") {
        EXPECT_TRUE(extract_dsc(model, c, m).empty()) << c << "." << m;
      }
      if (!(std::string(c) == "c2" && m == "m2")) {
        EXPECT_TRUE(extract_psc(model, c, m).empty()) << c << "." << m;
      }
    }
  }
}

TEST(ExtractionTest, InheritedPrefixedCallsInGrandchild) {
  auto model = parse_schema(R"(
    class A { method m { } }
    class B inherits A { method m { send A.m to self; } }
    class C inherits B { fields { c: int; } }
  )");
  EXPECT_EQ(extract_psc(model, "C", "m"), extract_psc(model, "B", "m"));
  EXPECT_EQ(extract_psc(model, "C", "m"), (std::set<MethodRef>{{"A", "m"}}));
}

TEST(ExtractionTest, UnknownClassOrMethod) {
  EXPECT_EQ(error_kind([] { extract_dav(c1c2(), "zz", "m1"); }), ErrorKind::UnknownClass);
  EXPECT_EQ(error_kind([] { extract_dav(c1c2(), "c1", "m4"); }), ErrorKind::UnknownMethod);
  EXPECT_EQ(error_kind([] { extract_dsc(c1c2(), "c1", "m9"); }), ErrorKind::UnknownMethod);
  EXPECT_EQ(error_kind([] { extract_psc(c1c2(), "c1", "m9"); }), ErrorKind::UnknownMethod);
}

TEST(ExtractionTest, CacheMatchesFreeFunctions) {
  const auto& model = c1c2();
  FactsCache cache(model);
  for (const auto& c : model.class_names()) {
    for (const auto& m : model.method_names(c)) {
      const auto& f = cache.get(c, m);
      EXPECT_EQ(f.dav, extract_dav(model, c, m));
      EXPECT_EQ(f.dsc, extract_dsc(model, c, m));
      EXPECT_EQ(f.psc, extract_psc(model, c, m));
      EXPECT_EQ(&cache.get(c, m), &f);
    }
  }
}

TEST(ExtractionProperty, InheritedMethodsAreStable) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto model = parse_schema(generate_random_schema(seed));
    for (const auto& c : model.class_names()) {
      for (const auto& b : model.methods(c)) {
        auto dav = extract_dav(model, c, b.name);
        ASSERT_EQ(dav.fields().size(), model.fields(c).size());
        if (b.defining_class == c) continue;
        const auto& d = b.defining_class;
        auto base = extract_dav(model, d, b.name);
        for (const auto& f : model.fields(c)) {
          Mode expected = base.has_field(f) ? base.at(f) : Mode::Null;
          ASSERT_EQ(dav.at(f), expected) << seed << " " << c << "." << b.name << " " << f;
        }
        ASSERT_EQ(extract_dsc(model, c, b.name), extract_dsc(model, d, b.name));
        ASSERT_EQ(extract_psc(model, c, b.name), extract_psc(model, d, b.name));
      }
    }
  }
}

}  // namespace
}  // namespace finecc
