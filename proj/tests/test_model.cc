#include <cmath>

#include <gtest/gtest.h>

#include "cascade/errors.h"
#include "cascade/model.h"
#include "cascade/quadrature.h"

using namespace cascade;

TEST(Profile, ConstantAndIndicator) {
  Profile p = Profile::constant(2.0, 1.5);
  EXPECT_DOUBLE_EQ(p(0.0), 1.5);
  EXPECT_DOUBLE_EQ(p(2.0), 1.5);
  EXPECT_TRUE(p.breakpoints().empty());

  Profile q = Profile::indicator(1.0, 0.2, 0.6, 3.0);
  EXPECT_DOUBLE_EQ(q(0.1), 0.0);
  EXPECT_DOUBLE_EQ(q(0.4), 3.0);
  EXPECT_DOUBLE_EQ(q(0.9), 0.0);
  ASSERT_EQ(q.breakpoints().size(), 2u);
  EXPECT_DOUBLE_EQ(q.breakpoints()[0], 0.2);
  EXPECT_DOUBLE_EQ(q.breakpoints()[1], 0.6);
}

TEST(Profile, SampledInterpolatesLinearly) {
  std::vector<double> v(65);
  for (int i = 0; i <= 64; ++i) v[i] = i <= 32 ? i / 32.0 : 1.0 + 3.0 * (i - 32) / 32.0;
  Profile p = Profile::sampled(1.0, v);
  EXPECT_NEAR(p(0.25), 0.5, 1e-15);
  EXPECT_NEAR(p(0.75), 2.5, 1e-15);
  EXPECT_NEAR(p(0.3 / 64), 0.3 / 32, 1e-15);
  EXPECT_THROW(Profile::sampled(1.0, {0.0, 1.0}), ValidationError);
  double covered = 0.0;
  for (const auto& r : p.linear_runs()) {
    EXPECT_NEAR(p(0.5 * (r.x0 + r.x1)), r.p + r.q * 0.5 * (r.x0 + r.x1), 1e-14);
    covered += r.x1 - r.x0;
  }
  EXPECT_NEAR(covered, 1.0, 1e-14);
}

TEST(Profile, Scaled) {
  Profile p = Profile::indicator(1.0, 0.0, 0.5, 2.0).scaled(-1.5);
  EXPECT_DOUBLE_EQ(p(0.25), -3.0);
  EXPECT_DOUBLE_EQ(p(0.75), 0.0);
}

TEST(Rho, ClosedForm) {
  EXPECT_NEAR(rho(2.0, 1.0), -0.54930614433405485, 1e-15);
  EXPECT_NEAR(rho(3.0, 0.5), -0.69314718055994531, 1e-15);
  EXPECT_LT(rho(1e8, 1.0), 0.0);
  EXPECT_GT(rho(1e8, 1.0), -1e-7);
  EXPECT_THROW(rho(1.0), ValidationError);
  EXPECT_THROW(rho(0.5), ValidationError);
}

TEST(Rho, IncreasingAndInvertible) {
  double prev = -INFINITY;
  for (double a = 1.01; a < 50; a *= 1.3) {
    double r = rho(a, 1.3);
    EXPECT_LT(r, 0.0);
    EXPECT_GT(r, prev);
    prev = r;
    EXPECT_NEAR(alpha_for_rho(r, 1.3), a, 1e-10 * a);
  }
  EXPECT_NEAR(alpha_for_rho(-0.625, 1.0), 1.8031022369860258, 1e-13);
}

TEST(Validate, Examples) {
  PlantConfig cfg;
  cfg.L = 1.0;
  cfg.c = 0.0;
  cfg.alpha = 2.0;
  EXPECT_TRUE(validate(cfg).ok);

  cfg.c = rho(2.0) + M_PI * M_PI;
  auto r = validate(cfg);
  EXPECT_FALSE(r.ok);
  ASSERT_TRUE(r.offending_n.has_value());
  EXPECT_EQ(*r.offending_n, 1);
  EXPECT_THROW(require_valid(cfg), ValidationError);

  cfg.c = 50.0;
  cfg.beta = Profile::indicator(1.0, 0.0, 0.586, 1.0);
  EXPECT_TRUE(validate(cfg).ok);
}

TEST(Validate, ResonanceAtHigherIndex) {
  PlantConfig cfg;
  cfg.L = 1.5;
  cfg.beta = Profile::constant(1.5, 1.0);
  cfg.alpha = 3.0;
  cfg.c = rho(3.0, 1.5) + 9 * M_PI * M_PI / (1.5 * 1.5);
  auto r = validate(cfg);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.offending_n.value_or(0), 3);
  cfg.c += 1e-3;
  EXPECT_TRUE(validate(cfg).ok);
}

TEST(Validate, Invariants) {
  PlantConfig cfg;
  cfg.L = -1.0;
  EXPECT_FALSE(validate(cfg).ok);
  cfg.L = 1.0;
  cfg.alpha = 0.9;
  EXPECT_FALSE(validate(cfg).ok);
  cfg.alpha = 2.0;
  cfg.beta = Profile::constant(2.0, 1.0);
  EXPECT_FALSE(validate(cfg).ok);
  cfg.beta = Profile::constant(1.0, 1.0);
  cfg.alpha = 0.9;
  EXPECT_FALSE(validate(cfg).ok);
  cfg.alpha.reset();
  EXPECT_TRUE(validate(cfg).ok);
}

TEST(Config, JsonRoundTrip) {
  const char* text = R"({"L": 1.3, "c": 4, "alpha": 2,
    "beta": {"kind": "piecewise", "pieces": [[0.1, 0.9, 1.5]]}})";
  PlantConfig cfg = config_from_json_text(text);
  EXPECT_DOUBLE_EQ(cfg.L, 1.3);
  EXPECT_DOUBLE_EQ(cfg.c, 4.0);
  EXPECT_DOUBLE_EQ(cfg.alpha.value(), 2.0);
  EXPECT_DOUBLE_EQ(cfg.beta(0.5), 1.5);
  EXPECT_DOUBLE_EQ(cfg.beta(0.95), 0.0);

  PlantConfig back = config_from_json_text(config_to_json_text(cfg));
  EXPECT_DOUBLE_EQ(back.L, cfg.L);
  EXPECT_DOUBLE_EQ(back.c, cfg.c);
  EXPECT_EQ(back.alpha, cfg.alpha);
  for (double x : {0.05, 0.3, 0.85, 1.2}) EXPECT_DOUBLE_EQ(back.beta(x), cfg.beta(x));
}

TEST(Config, ScalarAndSampledBeta) {
  PlantConfig a = config_from_json_text(R"({"L": 2, "c": 0, "beta": 0.5})");
  EXPECT_DOUBLE_EQ(a.beta(1.7), 0.5);
  EXPECT_FALSE(a.alpha.has_value());
  std::string samples;
  for (int i = 0; i <= 64; ++i) samples += (i ? ", " : "") + std::to_string(2.0 * i / 64);
  PlantConfig b = config_from_json_text(R"({"L": 1, "c": 0, "beta": {"kind": "sampled", "values": [)"
                                        + samples + "]}}");
  EXPECT_NEAR(b.beta(0.25), 0.5, 1e-14);
}

TEST(Config, Rejects) {
  EXPECT_THROW(config_from_json_text("{not json"), ValidationError);
  EXPECT_THROW(config_from_json_text(R"({"L": 1, "beta": {"kind": "spline"}})"), ValidationError);
}

TEST(Quadrature, SmoothAndBroken) {
  double v = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
  EXPECT_NEAR(v, 2.0, 1e-13);
  double w = integrate([](double x) { return x < 0.3 ? 1.0 : -2.0; }, 0.0, 1.0, {0.3});
  EXPECT_NEAR(w, 0.3 - 1.4, 1e-14);
  auto z = integrate([](double x) { return std::exp(std::complex<double>(0, 3 * x)); }, 0.0, 1.0);
  EXPECT_NEAR(std::abs(z - (std::exp(std::complex<double>(0, 3)) - 1.0) / std::complex<double>(0, 3)), 0, 1e-14);
  EXPECT_NEAR(integrate_fixed([](double x) { return x * x * x * x; }, 0.0, 2.0, 3), 32.0 / 5, 1e-13);
}

TEST(Quadrature, CompositeNodes) {
  NodeSet ns = composite_nodes(0.0, 1.0, {0.4}, 2);
  EXPECT_EQ(ns.x.size(), 64u);
  double s = 0.0;
  for (size_t i = 0; i < ns.x.size(); ++i) s += ns.w[i] * std::exp(ns.x[i]);
  EXPECT_NEAR(s, std::exp(1.0) - 1.0, 1e-14);
}
