#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "trustmaze/trust.hpp"

using namespace trustmaze;

TEST_CASE("coactive colour scores") {
  for (Side side : {Side::Performer, Side::Supporter}) {
    CHECK(rating_score(Colour::Green, side) == 3);
    CHECK(rating_score(Colour::Yellow, side) == 2);
    CHECK(rating_score(Colour::Orange, side) == 1);
    CHECK(rating_score(Colour::Red, side) == 0);
  }
}

TEST_CASE("capability totals per role") {
  CapabilityMatrix m = CapabilityMatrix::defaults();
  CHECK(m.total(Role::Leader, Side::Performer) == 6);
  CHECK(m.total(Role::Collector, Side::Performer) == 9);
  CHECK(m.total(Role::GateUser, Side::Performer) == 5);
  CHECK(m.total(Role::Neutral, Side::Performer) == 9);
  CHECK(m.total(Role::Leader, Side::Supporter) == 2);
  CHECK(m.total(Role::Collector, Side::Supporter) == 3);
  CHECK(m.total(Role::GateUser, Side::Supporter) == 2);
  CHECK(m.total(Role::Neutral, Side::Supporter) == 5);

  CapabilityMatrix zero;
  CHECK(zero.total(Role::Leader, Side::Performer) == 0);
}

TEST_CASE("per-function capability scores") {
  CapabilityMatrix m = CapabilityMatrix::defaults();
  CHECK(m.score(Role::Collector, PurposeFunction::GatherTokens, Side::Performer) == 3);
  CHECK(m.score(Role::Leader, PurposeFunction::GatherTokens, Side::Performer) == 0);
  CHECK(m.score(Role::Neutral, PurposeFunction::HelpTeamMates, Side::Performer) == 3);
  CHECK(m.score(Role::Collector, PurposeFunction::HelpTeamMates, Side::Performer) == 1);
  CHECK(m.score(Role::GateUser, PurposeFunction::Communicate, Side::Performer) == 2);
  CHECK(m.score(Role::Neutral, PurposeFunction::HelpTeamMates, Side::Supporter) == 3);
  CHECK(m.score(Role::Collector, PurposeFunction::GatherTokens, Side::Supporter) == 0);
}

TEST_CASE("predictability follows the smoothed frequency") {
  PredictabilityCell fresh;
  CHECK(fresh.estimate() == doctest::Approx(0.5));

  TrustMatrix trust;
  for (int i = 0; i < 3; ++i)
    trust.update_predictability(0, 1, PurposeFunction::GatherTokens, true);
  double estimate = trust.update_predictability(0, 1, PurposeFunction::GatherTokens, false);
  CHECK(estimate == doctest::Approx(4.0 / 6.0));  // 3 successes, 1 failure

  TrustMatrix trust2;
  double last = 0.0;
  for (int i = 0; i < 8; ++i)
    last = trust2.update_predictability(0, 1, PurposeFunction::GatherTokens, false);
  CHECK(last == doctest::Approx(0.1));  // 0 successes, 8 failures
}

TEST_CASE("integrity penalties and hard absorption") {
  TrustMatrix trust;
  CHECK(trust.integrity(0, 1).score == doctest::Approx(1.0));
  CHECK_FALSE(trust.integrity(0, 1).hard_violation);

  Violation soft{"minimise_time", 1, Hardness::Soft, ""};
  trust.update_integrity(0, 1, soft, 0.8);
  CHECK(trust.integrity(0, 1).score == doctest::Approx(0.8));

  Violation hard{"no_pickup_zone", 1, Hardness::Hard, ""};
  trust.update_integrity(0, 1, hard, 0.8);
  CHECK(trust.integrity(0, 1).score == 0.0);
  CHECK(trust.integrity(0, 1).hard_violation);

  // pinned at zero even through recovery and new soft violations
  trust.apply_recovery(0, 1, 1.5);
  CHECK(trust.integrity(0, 1).score == 0.0);
  trust.update_integrity(0, 1, soft, 0.8);
  CHECK(trust.integrity(0, 1).score == 0.0);
}

TEST_CASE("recovery multiplier never lifts integrity above one") {
  TrustMatrix trust;
  Violation soft{"minimise_time", 1, Hardness::Soft, ""};
  trust.update_integrity(0, 1, soft, 0.8);
  for (int i = 0; i < 100; ++i) trust.apply_recovery(0, 1, 1.05);
  CHECK(trust.integrity(0, 1).score <= 1.0);
  CHECK(trust.integrity(0, 1).score == doctest::Approx(1.0));
}

TEST_CASE("composite trust is the weighted mean") {
  TrustWeights thirds;
  CHECK(composite_trust(1.0, 1.0, 1.0, thirds) == doctest::Approx(1.0));
  CHECK(composite_trust(0.9, 0.5, 1.0, thirds) == doctest::Approx(0.8));
  CHECK(composite_trust(0.0, 0.0, 0.0, thirds) == doctest::Approx(0.0));

  try {
    composite_trust(1, 1, 1, TrustWeights{0.5, 0.5, 0.5});
    FAIL("expected BadWeights");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::BadWeights);
  }
  try {
    composite_trust(1, 1, 1, TrustWeights{-0.5, 1.0, 0.5});
    FAIL("expected BadWeights");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::BadWeights);
  }
}

TEST_CASE("ladder rungs are threshold-inclusive") {
  TrustLadder ladder;
  CHECK(ladder.rung(0.0) == 0);
  CHECK(ladder.rung(1.0) == 4);
  CHECK(ladder.rung(0.8) == 4);
  CHECK(ladder.rung(0.7999999) == 3);
  CHECK(ladder.rung(0.2) == 1);
  CHECK(ladder.rung(0.19) == 0);
  CHECK(ladder.rung(0.45) == 2);
}

TEST_CASE("ladder validation") {
  TrustLadder good;
  CHECK(good.validate().empty());
  TrustLadder descending;
  descending.thresholds = {0.4, 0.2};
  CHECK_FALSE(descending.validate().empty());
  TrustLadder outside;
  outside.thresholds = {0.0, 0.5};
  CHECK_FALSE(outside.validate().empty());
}

TEST_CASE("trust records combine the three components") {
  TrustMatrix trust;
  TrustConfig config;
  CapabilityMatrix capability = CapabilityMatrix::defaults();

  TrustRecord r = trust.record(0, 1, Role::Collector, PurposeFunction::GatherTokens, capability,
                               config);
  CHECK(r.capability_norm == doctest::Approx(1.0));
  CHECK(r.predictability == doctest::Approx(0.5));
  CHECK(r.integrity == doctest::Approx(1.0));
  CHECK(r.composite == doctest::Approx((1.0 + 0.5 + 1.0) / 3.0));
  CHECK(r.rung == 4);

  // pair record is the weakest function
  TrustRecord pair = trust.pair_record(0, 1, Role::Collector, capability, config);
  CHECK(pair.capability_norm ==
        doctest::Approx(capability.norm(Role::Collector, PurposeFunction::HelpTeamMates)));
  CHECK(pair.composite <= r.composite);
}

TEST_CASE("property: components and composites stay in [0,1] over random sequences") {
  std::mt19937 rng(20260810);
  std::uniform_int_distribution<int> op(0, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  TrustConfig config;
  CapabilityMatrix capability = CapabilityMatrix::defaults();

  for (int sequence = 0; sequence < 1200; ++sequence) {
    TrustMatrix trust;
    for (int step = 0; step < 40; ++step) {
      switch (op(rng)) {
        case 0:
          trust.update_predictability(0, 1, PurposeFunction::GatherTokens, coin(rng) == 1);
          break;
        case 1: {
          Violation v{"minimise_time", 1, Hardness::Soft, ""};
          trust.update_integrity(0, 1, v, config.soft_penalty);
          break;
        }
        case 2: {
          Violation v{"zone", 1, Hardness::Hard, ""};
          if (step % 17 == 3) trust.update_integrity(0, 1, v, config.soft_penalty);
          break;
        }
        case 3:
          trust.apply_recovery(0, 1, 1.01);
          break;
      }
      TrustRecord r =
          trust.record(0, 1, Role::Collector, PurposeFunction::GatherTokens, capability, config);
      CHECK(r.capability_norm >= 0.0);
      CHECK(r.capability_norm <= 1.0);
      CHECK(r.predictability > 0.0);
      CHECK(r.predictability < 1.0);
      CHECK(r.integrity >= 0.0);
      CHECK(r.integrity <= 1.0);
      CHECK(r.composite >= 0.0);
      CHECK(r.composite <= 1.0);
      CHECK(r.rung >= 0);
      CHECK(r.rung <= 4);
      if (trust.hard_violation(0, 1)) CHECK(r.integrity == 0.0);
    }
  }
}

TEST_CASE("property: rung is monotone in the score") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TrustLadder ladder;
  for (int i = 0; i < 2000; ++i) {
    double a = unit(rng), b = unit(rng);
    if (a > b) std::swap(a, b);
    CHECK(ladder.rung(a) <= ladder.rung(b));
  }
}

TEST_CASE("property: success never lowers, failure never raises the estimate") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> coin(0, 1);
  TrustMatrix trust;
  double before = trust.predictability(0, 1, PurposeFunction::HelpTeamMates).estimate();
  for (int i = 0; i < 2000; ++i) {
    bool success = coin(rng) == 1;
    double after = trust.update_predictability(0, 1, PurposeFunction::HelpTeamMates, success);
    if (success)
      CHECK(after >= before);
    else
      CHECK(after <= before);
    before = after;
  }
}

TEST_CASE("ladder dynamics: alternating outcomes move the composite across rungs") {
  TrustMatrix trust;
  TrustConfig config;
  // predictability-dominant weighting, as a scenario tracking performance would use
  config.weights = {0.1, 0.8, 0.1};
  CapabilityMatrix capability = CapabilityMatrix::defaults();

  int max_rung_seen = 0;
  int min_rung_seen = 99;
  bool went_up = false, went_down = false;
  int prev = trust.record(0, 1, Role::Collector, PurposeFunction::GatherTokens, capability, config)
                 .rung;
  for (int block = 0; block < 12; ++block) {
    bool success = block % 2 == 0;
    for (int i = 0; i < 6; ++i)
      trust.update_predictability(0, 1, PurposeFunction::GatherTokens, success);
    int rung = trust.record(0, 1, Role::Collector, PurposeFunction::GatherTokens, capability,
                            config)
                   .rung;
    if (rung > prev) went_up = true;
    if (rung < prev) went_down = true;
    max_rung_seen = std::max(max_rung_seen, rung);
    min_rung_seen = std::min(min_rung_seen, rung);
    prev = rung;
  }
  CHECK(went_up);
  CHECK(went_down);
  CHECK(max_rung_seen > min_rung_seen);
}
