// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include "t2certify/config.hpp"
#include "t2certify/error.hpp"
#include "t2certify/models.hpp"

using namespace t2c;

TEST(Config, ParsesSectionsAndComments) {
  const Config c = Config::parse_string(
      "# comment\n"
      "model.name = sgn\n"
      "  grid.T=0.5  \n"
      "\n"
      "tilt.c = 0.5, -1\n");
  EXPECT_EQ(c.get("model.name"), "sgn");
  EXPECT_EQ(c.get_double("grid.T"), 0.5);
  EXPECT_EQ(c.get_list("tilt.c"), (std::vector<double>{0.5, -1.0}));
  EXPECT_EQ(c.get_size("grid.n"), 1000u);  // default
}

TEST(Config, SuffixResolution) {
  Config c;
  c.apply_override("T=0.25");
  EXPECT_EQ(c.get_double("grid.T"), 0.25);
  c.apply_override("sigma_sup=3");
  EXPECT_EQ(c.get_double("constant.sigma_sup"), 3.0);
  EXPECT_THROW(c.apply_override("N=5"), ConfigError);  // sample.N or concentration.N
  EXPECT_THROW(c.apply_override("model.colour=red"), ConfigError);
  EXPECT_THROW(c.apply_override("novalue"), ConfigError);
}

TEST(Config, TypedGettersValidate) {
  Config c;
  c.set("grid.n", "-3");
  EXPECT_THROW(c.get_size("grid.n"), ConfigError);
  c.set("grid.T", "abc");
  EXPECT_THROW(c.get_double("grid.T"), ConfigError);
  c.set("zvonkin.enabled", "yes");
  EXPECT_TRUE(c.get_bool("zvonkin.enabled"));
  c.set("zvonkin.enabled", "maybe");
  EXPECT_THROW(c.get_bool("zvonkin.enabled"), ConfigError);
  EXPECT_THROW(Config::parse_string("model.name sgn\n"), ConfigError);
}

TEST(Config, SerializeRoundTrip) {
  Config c;
  c.set("model.name", "atlas");
  c.set("model.atlas_permutation", "2,1,3,5,4");
  c.set("experiment.seed", "99");
  const Config back = Config::parse_string(c.serialize());
  EXPECT_EQ(back, c);
}

TEST(Models, BuildEveryNamedModel) {
  for (const char* name : {"driftless", "sgn", "regime", "rank", "atlas", "quantile"}) {
    Config c;
    c.set("model.name", name);
    c.set("model.sigma_amplitude", "0.2");
    const ModelSpec m = build_model(c);
    EXPECT_EQ(m.name, name);
    const bool particles = std::string(name) == "rank" || std::string(name) == "atlas" ||
                           std::string(name) == "quantile";
    EXPECT_EQ(m.dim, particles ? 5u : 1u);
    EXPECT_EQ(m.x0.size(), m.dim);
    EXPECT_NEAR(m.diffusion.ellipticity(), 0.8, 1e-15);
  }
  Config bad;
  bad.set("model.name", "heston");
  EXPECT_THROW(build_model(bad), ConfigError);
  bad.set("model.name", "sgn");
  bad.set("model.x0", "1,2");
  EXPECT_THROW(build_model(bad), ConfigError);
}

TEST(Models, TiltsAndGrid) {
  Config c;
  for (const char* kind : {"zero", "constant", "time", "path"}) {
    c.set("tilt.kind", kind);
    EXPECT_EQ(build_tilt(c, 3, 1.0).dim(), 3u);
  }
  c.set("tilt.kind", "sideways");
  EXPECT_THROW(build_tilt(c, 1, 1.0), ConfigError);
  c.set("grid.T", "0");
  EXPECT_THROW(build_grid(c), ConfigError);
}
