#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace finecc {
namespace {

using namespace finecc::testing;

TEST(ModeTest, JoinIsMax) {
  EXPECT_EQ(mode_join(R, W), W);
  EXPECT_EQ(mode_join(N, N), N);
  EXPECT_EQ(mode_join(W, R), W);
  for (Mode a : kAllModes) {
    for (Mode b : kAllModes) EXPECT_EQ(mode_join(a, b), std::max(a, b));
  }
}

TEST(ModeTest, CompatibilityMatchesClassicalTable) {
  // Rows and columns in Null, Read, Write order.
  const bool table[3][3] = {
      {true, true, true},
      {true, true, false},
      {true, false, false},
  };
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(mode_compatible(kAllModes[i], kAllModes[j]), table[i][j])
          << to_string(kAllModes[i]) << "/" << to_string(kAllModes[j]);
    }
  }
  EXPECT_FALSE(mode_compatible(W, W));
  EXPECT_TRUE(mode_compatible(N, W));
  EXPECT_TRUE(mode_compatible(R, R));
}

TEST(AccessVectorTest, JoinCollectsAllFields) {
  auto a = V({{"X", W}, {"Y", R}, {"Z", R}});
  auto b = V({{"X", R}, {"Y", N}, {"T", R}});
  auto j = av_join(a, b);
  EXPECT_EQ(j, V({{"X", W}, {"Y", R}, {"Z", R}, {"T", R}}));
  EXPECT_EQ(to_string(j), "(Write X, Read Y, Read Z, Read T)");
}

TEST(AccessVectorTest, JoinIdentities) {
  auto a = V({{"f1", W}, {"f2", R}, {"f3", N}});
  EXPECT_EQ(av_join(a, a), a);
  EXPECT_EQ(av_join(a, AccessVector(a.fields())), a);
}

TEST(AccessVectorTest, NullIsStoredSparsely) {
  auto a = V({{"f1", N}, {"f2", R}});
  EXPECT_EQ(a.size(), 2u);
  EXPECT_EQ(a.non_null().size(), 1u);
  EXPECT_TRUE(a.has_field("f1"));
  EXPECT_EQ(a.at("f1"), N);
  EXPECT_EQ(a.at("absent"), N);
  a.set("f2", N);
  EXPECT_TRUE(a.non_null().empty());
  EXPECT_EQ(to_string(a), "(Null f1, Null f2)");
  EXPECT_EQ(to_string(AccessVector()), "()");
}

TEST(AccessVectorTest, CommutesExamples) {
  auto m1 = V({{"f1", W}, {"f2", R}, {"f3", R}, {"f4", W}, {"f5", R}, {"f6", N}});
  auto m2 = V({{"f1", W}, {"f2", R}, {"f3", N}, {"f4", W}, {"f5", R}, {"f6", N}});
  auto m3 = V({{"f1", N}, {"f2", R}, {"f3", R}, {"f4", N}, {"f5", N}, {"f6", N}});
  EXPECT_TRUE(av_commutes(m1, m3));
  EXPECT_FALSE(av_commutes(m1, m2));
  EXPECT_TRUE(av_commutes(m1, AccessVector()));
  // Disjoint index sets commute even when both write.
  EXPECT_TRUE(av_commutes(V({{"a", W}}), V({{"b", W}})));
}

TEST(AccessVectorTest, Reordered) {
  auto a = V({{"f3", R}, {"f1", W}});
  auto r = a.reordered({"f1", "f2", "f3"});
  EXPECT_EQ(r, a);
  EXPECT_EQ(to_string(r), "(Write f1, Read f3)");
}

TEST(AccessVectorTest, WideVectorsUseTheSameSemantics) {
  AccessVector wide, narrow;
  for (int k = 0; k < 40; ++k) {
    std::string f = "w" + std::to_string(k);
    wide.set(f, kAllModes[k % 3]);
    if (k % 5 == 0) narrow.set(f, W);
  }
  EXPECT_EQ(wide.size(), 40u);
  EXPECT_EQ(wide.at("w7"), R);
  EXPECT_EQ(wide.at("w8"), W);
  EXPECT_EQ(wide.at("w9"), N);
  EXPECT_FALSE(wide.has_field("w40"));
  EXPECT_FALSE(av_commutes(wide, narrow));
  auto j = av_join(narrow, wide);
  EXPECT_EQ(j.size(), 40u);
  EXPECT_EQ(j.at("w0"), W);
  EXPECT_EQ(j.fields().front(), "w0");
  EXPECT_EQ(j.fields()[1], "w5");
  EXPECT_EQ(j.reordered(wide.fields()).fields(), wide.fields());
  EXPECT_TRUE(av_leq(narrow, j));
  EXPECT_FALSE(av_leq(j, narrow));
}

// --- randomized algebra -----------------------------------------------------

class VectorGen {
 public:
  explicit VectorGen(unsigned seed) : rng_(seed) {}

  AccessVector next() {
    static const char* names[] = {"a", "b", "c", "d", "e", "f"};
    AccessVector v;
    for (const char* n : names) {
      if (rng_() % 3 == 0) continue;
      v.set(n, kAllModes[rng_() % 3]);
    }
    return v;
  }

 private:
  std::mt19937 rng_;
};

TEST(AccessVectorProperty, JoinIsASemilattice) {
  VectorGen gen(7);
  for (int i = 0; i < 2000; ++i) {
    auto a = gen.next(), b = gen.next(), c = gen.next();
    ASSERT_EQ(av_join(a, a), a);
    ASSERT_EQ(av_join(a, b), av_join(b, a));
    ASSERT_EQ(av_join(av_join(a, b), c), av_join(a, av_join(b, c)));
    ASSERT_TRUE(av_leq(a, av_join(a, b)));
  }
}

TEST(AccessVectorProperty, CommutesIsSymmetricAndAntitone) {
  VectorGen gen(11);
  std::mt19937 rng(5);
  for (int i = 0; i < 2000; ++i) {
    auto a = gen.next(), b = gen.next();
    ASSERT_EQ(av_commutes(a, b), av_commutes(b, a));
    // Lowering modes of `a` can only keep commutativity.
    AccessVector lower = a;
    for (const auto& f : a.fields()) {
      Mode m = a.at(f);
      lower.set(f, kAllModes[rng() % (static_cast<int>(m) + 1)]);
    }
    ASSERT_TRUE(av_leq(lower, a));
    if (av_commutes(a, b)) {
      ASSERT_TRUE(av_commutes(lower, b));
    }
  }
}

TEST(AccessVectorProperty, CommutesMatchesFieldwiseEnumeration) {
  VectorGen gen(13);
  for (int i = 0; i < 2000; ++i) {
    auto a = gen.next(), b = gen.next();
    bool expected = true;
    for (const auto& f : a.fields()) {
      if (!b.has_field(f)) continue;
      Mode x = a.at(f), y = b.at(f);
      bool clash = x >= R && y >= R && (x == W || y == W);
      if (clash) expected = false;
    }
    ASSERT_EQ(av_commutes(a, b), expected);
  }
}

}  // namespace
}  // namespace finecc
