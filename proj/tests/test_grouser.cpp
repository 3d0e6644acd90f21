#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sphere/core_model.hpp"
#include "sphere/grouser.hpp"

using namespace sphere;

TEST(Grouser, TenMillimetreRow) {
  const double phi = max_grouser_spacing(0.107, 0.1, 0.2);
  EXPECT_NEAR(phi, 0.260829, 1e-6);
  EXPECT_NEAR(rad_to_deg(phi), 14.9444, 1e-4);
  EXPECT_LE(std::abs(rad_to_deg(phi) - 15.1), 0.2);
}

TEST(Grouser, SevenMillimetreRow) {
  const double phi = max_grouser_spacing(0.074, 0.08, 0.0);
  EXPECT_NEAR(phi, 0.162226, 1e-6);
  EXPECT_NEAR(rad_to_deg(phi), 9.2949, 1e-4);
  EXPECT_LE(std::abs(rad_to_deg(phi) - 9.4), 0.15);
}

TEST(Grouser, ZeroHeightAdmitsZeroSpacing) {
  for (double z : {0.0, 0.3, 1.0}) EXPECT_EQ(max_grouser_spacing(0.0, z, 0.0), 0.0);
}

TEST(Grouser, DomainChecks) {
  EXPECT_THROW(max_grouser_spacing(-0.1, 0.1, 0.1), InvariantError);
  EXPECT_THROW(max_grouser_spacing(0.1, 1.1, 0.1), InvariantError);
  EXPECT_THROW(max_grouser_spacing(0.1, 0.1, 1.0), InvariantError);
  EXPECT_THROW(grouser_layout(0.0, 0.01, 0.0, 0.1), InvariantError);
  EXPECT_THROW(grouser_layout(0.1, 0.01, 0.2, 0.1), InvariantError);
}

TEST(Grouser, LayoutCountsWithAndWithoutRounding) {
  const auto exact = grouser_layout(0.0935, 0.010, 0.00935, 0.2);
  EXPECT_NEAR(rad_to_deg(exact.max_spacing_rad), 14.9385, 1e-4);
  EXPECT_EQ(exact.count, 25);

  const auto rounded = grouser_layout(0.0935, 0.010, 0.00935, 0.2, {.paper_rounding = true});
  EXPECT_EQ(rounded.count, 24);
  EXPECT_NEAR(rad_to_deg(rounded.actual_spacing_rad), 15.0, 1e-12);
}

TEST(Grouser, NoSlipLayout) {
  const double phi = max_grouser_spacing(0.107, 0.1, 0.0);
  EXPECT_NEAR(rad_to_deg(phi), 11.9555, 1e-4);
  const double r = 0.1;
  const auto layout = grouser_layout(r, 0.107 * r, 0.1 * r, 0.0);
  EXPECT_EQ(layout.count, 31);
}

TEST(Grouser, SinkageClampedToGrouserHeight) {
  const auto deep = grouser_layout(0.1, 0.01, 0.05, 0.2);
  const auto flush = grouser_layout(0.1, 0.01, 0.01, 0.2);
  EXPECT_DOUBLE_EQ(deep.normalized_sinkage, deep.normalized_height);
  EXPECT_EQ(deep.max_spacing_rad, flush.max_spacing_rad);
  EXPECT_EQ(deep.count, flush.count);
}

TEST(Grouser, ZeroHeightIsAnError) {
  try {
    grouser_layout(0.1, 0.0, 0.0, 0.2);
    FAIL();
  } catch (const InvariantError& e) {
    EXPECT_NE(std::string(e.what()).find("grousers required"), std::string::npos);
  }
}

TEST(Grouser, MonotonicityByFiniteDifferences) {
  const double d = 1e-6;
  for (double h = 0.01; h <= 0.5; h += 0.049) {
    for (double z = 0.02; z <= 0.98; z += 0.06) {
      for (double i = 0.0; i <= 0.9; i += 0.1) {
        const double phi = max_grouser_spacing(h, z, i);
        EXPECT_GT(max_grouser_spacing(h + d, z, i), phi) << h << " " << z << " " << i;
        EXPECT_GT(max_grouser_spacing(h, z, i + d), phi) << h << " " << z << " " << i;
        EXPECT_LT(max_grouser_spacing(h, z + d, i), phi) << h << " " << z << " " << i;
      }
    }
  }
}

TEST(Grouser, LayoutInvariants) {
  for (double r = 0.03; r <= 0.3; r += 0.027) {
    for (double h = 0.001; h <= 0.03; h += 0.0037) {
      for (double z = 0.0; z <= 0.03; z += 0.005) {
        for (double i = 0.0; i <= 0.9; i += 0.15) {
          const auto l = grouser_layout(r, h, z, i);
          EXPECT_GE(l.count, 3);
          EXPECT_NEAR(l.count * l.actual_spacing_rad, 2.0 * std::numbers::pi, 1e-12);
          EXPECT_LE(l.actual_spacing_rad, l.max_spacing_rad + 1e-12);
        }
      }
    }
  }
}
