#include <gtest/gtest.h>

#include "dirac_gap/analytic_oracles.hpp"
#include "dirac_gap/spec_json.hpp"
#include "test_support.hpp"

using namespace dirac_gap;

TEST(SpecJson, ParsesEveryDescriptorKind) {
  const std::string text = R"({
    "m1": {"kind": "sum", "terms": [
      {"kind": "constant", "value": 4},
      {"kind": "step", "window": [-1, 1], "pieces": [[-1, 1, -2]], "tail": 0}]},
    "m2": {"kind": "expwell", "amplitude": 0.5, "rate": 2},
    "w": {"kind": "sampled", "x": [0, 1], "y": [0.5, 0.25], "limit_left": 0.5, "limit_right": 0.25},
    "domain": {"half": {"alpha": "pi/2"}}
  })";
  const PotentialSpec s = parse_spec_string(text);
  EXPECT_DOUBLE_EQ(s.m1.value(0.0), 2.0);
  EXPECT_DOUBLE_EQ(s.m1.value(3.0), 4.0);
  EXPECT_DOUBLE_EQ(s.m2.value(0.0), 0.5);
  EXPECT_DOUBLE_EQ(s.w.value(0.5), 0.375);
  EXPECT_TRUE(s.domain.is_half_line());
  EXPECT_EQ(s.domain.alpha, HalfLineAlpha::HalfPi);
}

TEST(SpecJson, RoundTrip) {
  for (const PotentialSpec& s : {toy_spec({4.0, 1, 2.0, 0.0}), hydrogenic_spec(1.0, 2.0),
                                 toy_spec({4.0, 0, 1.0, 0.0}, Domain::half_line(HalfLineAlpha::Zero))}) {
    const PotentialSpec back = spec_from_json(spec_to_json(s));
    EXPECT_EQ(back, s);
    EXPECT_EQ(parse_spec_string(spec_to_json(s).dump()), s);
  }
}

TEST(SpecJson, FullDomainString) {
  const PotentialSpec s = parse_spec_string(
      R"({"m1": {"kind": "constant", "value": 1}, "m2": {"kind": "constant", "value": 1},
          "w": {"kind": "constant", "value": 0}, "domain": "full"})");
  EXPECT_FALSE(s.domain.is_half_line());
}

TEST(SpecJson, MalformedInputIsInvalidSpec) {
  EXPECT_ERROR_CODE(parse_spec_string("{not json"), ErrorCode::InvalidSpec);
  EXPECT_ERROR_CODE(parse_spec_string(R"({"m1": {"kind": "constant", "value": 1}})"), ErrorCode::InvalidSpec);
  EXPECT_ERROR_CODE(parse_spec_string(R"({"m1": {"kind": "bogus"}, "m2": {"kind": "constant", "value": 1},
                                          "w": {"kind": "constant", "value": 0}, "domain": "full"})"),
                    ErrorCode::InvalidSpec);
  EXPECT_ERROR_CODE(parse_spec_string(R"({"m1": {"kind": "constant", "value": 1},
                                          "m2": {"kind": "constant", "value": 1},
                                          "w": {"kind": "constant", "value": 0},
                                          "domain": {"half": {"alpha": "pi/4"}}})"),
                    ErrorCode::InvalidSpec);
  EXPECT_ERROR_CODE(load_spec_file("/nonexistent/spec.json"), ErrorCode::InvalidSpec);
}

TEST(SpecJson, DiagnosticNamesTheLocation) {
  try {
    (void)parse_spec_string(R"({"m1": {"kind": "expwell", "amplitude": 1}, "m2": {"kind": "constant", "value": 1},
                                "w": {"kind": "constant", "value": 0}, "domain": "full"})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("m1"), std::string::npos) << e.what();
  }
}
