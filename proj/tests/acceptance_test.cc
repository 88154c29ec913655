#include <gtest/gtest.h>

#include "acceptance.h"

namespace roughwave {
namespace acceptance {
namespace {

// A corrupted tolerance fails its own criterion and leaves the others alone.
TEST(Harness, InjectedToleranceFailsOnlyItsCriterion) {
  Options o;
  o.reduced = true;
  o.only = {1, 3};
  o.tolerances.quotient_half = 1e-9;
  const auto r = RunAll(o);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].id, 1);
  EXPECT_FALSE(r[0].passed);
  EXPECT_EQ(r[1].id, 3);
  EXPECT_TRUE(r[1].passed);
}

TEST(Harness, RepeatedRunsPrintIdenticalLines) {
  Options o;
  o.reduced = true;
  o.only = {3, 11};
  const auto a = RunAll(o), b = RunAll(o);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(FormatLine(a[i]), FormatLine(b[i]));
  EXPECT_EQ(ToJson(a).dump(), ToJson(b).dump());
}

}  // namespace
}  // namespace acceptance
}  // namespace roughwave
