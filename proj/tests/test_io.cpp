#include <gtest/gtest.h>

#include <random>

#include "crmorse/io.hpp"
#include "support.hpp"

using namespace crmorse;

namespace {

const char* kMinimal = R"({"schema": 1, "n": 2, "delta": 1.0,
  "points": [{"label": "a", "weight": 1.0, "R": [[[2, 0]]], "L": [[[1, 0]]]}]})";

std::string error_of(const std::string& doc) {
  try {
    io::parse_field(doc);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ParseField, MinimalDocument) {
  const auto f = io::parse_field(kMinimal);
  EXPECT_EQ(f.d(), 1);
  ASSERT_EQ(f.points.size(), 1u);
  EXPECT_EQ(f.points[0].label, "a");
  EXPECT_EQ(f.points[0].R(0, 0), Complex(2.0, 0.0));
}

TEST(ParseField, ConjugateMismatchNamesMatrix) {
  const std::string doc = R"({"schema": 1, "n": 3, "delta": 1.0, "points": [{"label": "a", "weight": 1.0,
    "R": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]], "L": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}]})";
  const auto msg = error_of(doc);
  EXPECT_NE(msg.find("$.points[0].R"), std::string::npos) << msg;
  EXPECT_NE(msg.find("Hermitian"), std::string::npos) << msg;
}

TEST(ParseField, PathPreciseErrors) {
  EXPECT_NE(error_of(R"({"schema": 1, "n": 2, "delta": 1.0, "points": [{"label": "a", "weight": 0,
    "R": [[[2, 0]]], "L": [[[1, 0]]]}]})").find("$.points[0].weight"), std::string::npos);
  EXPECT_NE(error_of(R"({"schema": 1, "n": 2, "delta": 1.0, "points": [{"label": "a", "weight": 1,
    "R": [[[2, 0]]], "L": [[[1, "x"]]]}]})").find("$.points[0].L[0][0][1]"), std::string::npos);
  EXPECT_NE(error_of(R"({"schema": 1, "n": 3, "delta": 1.0, "points": [{"label": "a", "weight": 1,
    "R": [[[2, 0]]], "L": [[[1, 0]]]}]})").find("$.points[0]"), std::string::npos);
  EXPECT_NE(error_of(R"({"schema": 2, "n": 2, "delta": 1.0, "points": []})").find("$.schema"), std::string::npos);
  EXPECT_NE(error_of(R"({"schema": 1, "delta": 1.0, "points": []})").find("$.n"), std::string::npos);
  EXPECT_NE(error_of("{not json").find("invalid JSON"), std::string::npos);
}

TEST(ParseField, RoundTripIsIdentity) {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 4;
    PencilField f;
    f.n = d + 1;
    f.delta = 0.1 + 0.37 * trial;
    for (int i = 0; i < 3; ++i) {
      f.points.push_back({"pt-" + std::to_string(i), 0.5 + 0.3 * i, testkit::random_hermitian(rng, d),
                          testkit::random_hermitian(rng, d)});
    }
    const auto text = io::serialize_field(f);
    const auto g = io::parse_field(text);
    ASSERT_EQ(g.points.size(), f.points.size());
    EXPECT_EQ(g.n, f.n);
    EXPECT_EQ(g.delta, f.delta);
    for (std::size_t i = 0; i < f.points.size(); ++i) {
      EXPECT_EQ(g.points[i].label, f.points[i].label);
      EXPECT_EQ(g.points[i].weight, f.points[i].weight);
      EXPECT_EQ(g.points[i].R, f.points[i].R);
      EXPECT_EQ(g.points[i].L, f.points[i].L);
    }
    EXPECT_EQ(io::serialize_field(g), text);
  }
}

TEST(ParseModel, RoundTrip) {
  const ModelData m{{1.0, -2.5}, HermitianMatrix::real(2, {3.0, 1.0, 1.0, 3.0}), 0.75};
  const auto back = io::parse_model(io::model_to_json(m).dump());
  EXPECT_EQ(back.lambda, m.lambda);
  EXPECT_EQ(back.mu, m.mu);
  EXPECT_EQ(back.delta, m.delta);
}

TEST(ParseTorusSpec, IntegerEntriesRequired) {
  EXPECT_NO_THROW(io::parse_torus_spec(R"({"schema":1,"lambda":[[[1,0]]],"mu":[[[2,0]]],"delta":0.5})"));
  EXPECT_THROW(io::parse_torus_spec(R"({"schema":1,"lambda":[[[1,0]]],"mu":[[[2.5,0]]],"delta":0.5})"), InputError);
}

TEST(Calibration, RecordRoundTrip) {
  const auto cal = calibrate();
  const auto text = io::serialize_calibration(cal);
  EXPECT_NE(text.find("\"c_dim\": \"2/1\""), std::string::npos) << text;
  EXPECT_EQ(io::parse_calibration(text), cal);
  EXPECT_THROW(io::parse_calibration("{}"), CalibrationError);
  EXPECT_THROW(io::parse_calibration(R"({"c_mode": "1/x", "c_dim": "2/1"})"), CalibrationError);
}

TEST(Csv, ChamberColumnsAndDigits) {
  const auto dec = chambers(HermitianMatrix::real(2, {1.0, 0.0, 0.0, -1.0}), HermitianMatrix::identity(2), 2.0);
  const auto csv = io::chambers_csv(dec);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "lo,hi,neg,zero,pos,det_sign");
  EXPECT_NE(csv.find("-2,-0.5,2,0,0,1\n"), std::string::npos) << csv;
  EXPECT_EQ(io::fmt_double(0.1), "0.10000000000000001");
}
