#include "siov/engine.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <vector>

#include "siov/rng.hpp"
#include "support/stats.hpp"

using namespace siov;

namespace {

void register_noops(Engine& e) {
  for (auto kind : {EventKind::MessageAttempt, EventKind::MessageArrival, EventKind::BlockWon,
                    EventKind::BlockReceived, EventKind::MetricTick}) {
    e.on(kind, [](SimEvent&) {});
  }
}

TEST(EventQueue, DequeuesInTimeOrder) {
  Engine e(1);
  register_noops(e);
  e.schedule(seconds_to_us(1.0), MessageAttemptEv{1, 0, 0});
  e.schedule(seconds_to_us(0.5), BlockWonEv{0});
  const auto& log = e.run_until(seconds_to_us(10));
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[0].kind, EventKind::BlockWon);
  EXPECT_EQ(log[0].time, seconds_to_us(0.5));
  EXPECT_EQ(log[1].kind, EventKind::MessageAttempt);
}

TEST(EventQueue, EqualTimesAreFifo) {
  Engine e(1);
  register_noops(e);
  e.schedule(seconds_to_us(2.0), MessageAttemptEv{1, 0, 0});  // A
  e.schedule(seconds_to_us(2.0), MessageAttemptEv{2, 0, 0});  // B
  const auto& log = e.run_until(seconds_to_us(10));
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(std::get<MessageAttemptEv>(log[0].payload).message_id, 1u);
  EXPECT_EQ(std::get<MessageAttemptEv>(log[1].payload).message_id, 2u);
}

TEST(EventQueue, RejectsPastEvents) {
  Engine e(1);
  register_noops(e);
  e.schedule(seconds_to_us(3.0), MetricTickEv{0});
  e.run_until(seconds_to_us(3.0));
  EXPECT_EQ(e.clock(), seconds_to_us(3.0));
  EXPECT_THROW(e.schedule(seconds_to_us(2.9), MetricTickEv{1}), PastEventError);
}

TEST(EventQueue, EmptyQueueAdvancesClock) {
  Engine e(1);
  register_noops(e);
  const auto& log = e.run_until(seconds_to_us(50));
  EXPECT_TRUE(log.empty());
  EXPECT_EQ(e.clock(), seconds_to_us(50));
}

TEST(EventQueue, MissingHandlerIsAnError) {
  Engine e(1);
  e.on(EventKind::MessageAttempt, [](SimEvent&) {});
  EXPECT_THROW(e.run_until(100), HandlerMissingError);
}

TEST(EventQueue, HandlerSpawnsFollowupInOrder) {
  // a message attempt at t=0.5 whose handler schedules the arrival at t=0.5012
  Engine e(1);
  register_noops(e);
  e.on(EventKind::MessageAttempt, [&](SimEvent& ev) {
    e.schedule(ev.time + 1200, MessageArrivalEv{1, 0, 3, ev.time, 1200, 0});
  });
  e.schedule(seconds_to_us(0.5), MessageAttemptEv{1, 0, 0});
  const auto& log = e.run_until(seconds_to_us(1));
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[0].kind, EventKind::MessageAttempt);
  EXPECT_EQ(log[1].kind, EventKind::MessageArrival);
  EXPECT_EQ(log[1].time, seconds_to_us(0.5) + 1200);
}

TEST(EventQueue, EventsBeyondEndStayQueued) {
  Engine e(1);
  register_noops(e);
  e.schedule(seconds_to_us(5), MetricTickEv{0});
  e.run_until(seconds_to_us(1));
  EXPECT_EQ(e.clock(), seconds_to_us(1));
  EXPECT_FALSE(e.queue_empty());
  const auto& log = e.run_until(seconds_to_us(10));
  EXPECT_EQ(log.size(), 1u);
}

TEST(EventLog, NdjsonIsStable) {
  Engine e(1);
  register_noops(e);
  e.schedule(10, BlockWonEv{2, 5, 4, 1, 7, 147000});
  e.run_until(20);
  std::ostringstream os;
  write_event_log_ndjson(e.log(), os);
  EXPECT_EQ(os.str(),
            "{\"time_us\":10,\"kind\":\"BlockWon\",\"payload\":{\"miner\":2,\"block_id\":5,"
            "\"parent_id\":4,\"height\":1,\"tx_count\":7,\"gas_used\":147000}}\n");
}

// -- randomness ---------------------------------------------------------------

TEST(Rng, ExponentialMeanMatchesRate) {
  RngStream rng(42);
  auto& s = rng.sub("block");
  // block interval 2.7 s
  std::vector<double> xs;
  xs.reserve(100000);
  for (int i = 0; i < 100000; ++i) xs.push_back(sample_exponential(1.0 / 2.7, s));
  const double m = test::mean(xs);
  EXPECT_GT(m, 2.65);
  EXPECT_LT(m, 2.75);

  // broadcast delay 0.25 s
  auto& s2 = rng.sub("broadcast");
  xs.clear();
  for (int i = 0; i < 100000; ++i) xs.push_back(sample_exponential(1.0 / 0.25, s2));
  const double m2 = test::mean(xs);
  EXPECT_GT(m2, 0.245);
  EXPECT_LT(m2, 0.255);
}

TEST(Rng, ExponentialRejectsNonPositiveRate) {
  RngStream rng(1);
  EXPECT_THROW(sample_exponential(0.0, rng.sub("x")), NonPositiveRateError);
  EXPECT_THROW(sample_exponential(-1.0, rng.sub("x")), NonPositiveRateError);
}

TEST(Rng, ExponentialIsStrictlyPositive) {
  RngStream rng(7);
  auto& s = rng.sub("x");
  for (int i = 0; i < 100000; ++i) {
    ASSERT_GT(sample_exponential(1000.0, s), 0.0);
  }
}

TEST(Rng, ExponentialPassesKsAtAlpha01) {
  RngStream rng(3);
  auto& s = rng.sub("block");
  const double rate = 1.0 / 2.7;
  std::vector<double> xs;
  xs.reserve(100000);
  for (int i = 0; i < 100000; ++i) xs.push_back(s.exponential(rate));
  const double d = test::ks_statistic(xs, [&](double x) { return test::exp_cdf(x, rate); });
  EXPECT_LT(d, test::ks_critical_alpha01(xs.size()));
}

TEST(Rng, SubStreamsAreIndependent) {
  RngStream a(99), b(99);
  // interleave draws from an unrelated stream in `a` only
  std::vector<double> got_a, got_b;
  for (int i = 0; i < 100; ++i) {
    got_a.push_back(a.sub("fading").uniform01());
    a.sub("unrelated").uniform01();
  }
  for (int i = 0; i < 100; ++i) got_b.push_back(b.sub("fading").uniform01());
  EXPECT_EQ(got_a, got_b);
}

TEST(Rng, KeyedStreamIsPureFunctionOfKey) {
  RngStream rng(5);
  const KeyedStream k1 = rng.keyed("fading");
  const KeyedStream k2 = rng.keyed("fading");
  EXPECT_EQ(k1.uniform01(10, 2, 3), k2.uniform01(10, 2, 3));
  EXPECT_NE(k1.uniform01(10, 2, 3), k1.uniform01(11, 2, 3));
  // values in (0, 1]
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = k1.uniform01(i);
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
  }
}

TEST(Rng, NormalMoments) {
  RngStream rng(11);
  auto& s = rng.sub("hashpower");
  std::vector<double> xs;
  xs.reserve(100000);
  for (int i = 0; i < 100000; ++i) xs.push_back(s.normal(100.0, 20.0));
  EXPECT_NEAR(test::mean(xs), 100.0, 0.5);
  EXPECT_NEAR(test::sample_stddev(xs), 20.0, 0.4);
}

TEST(Rng, NormalPositiveIsPositive) {
  RngStream rng(13);
  auto& s = rng.sub("hashpower");
  for (int i = 0; i < 10000; ++i) ASSERT_GT(s.normal_positive(1.0, 5.0), 0.0);
}

TEST(Rng, DeterministicAcrossRuns) {
  const auto draw = [](std::uint64_t seed) {
    RngStream rng(seed);
    std::vector<double> xs;
    for (int i = 0; i < 50; ++i) xs.push_back(rng.sub("strategy").uniform01());
    return xs;
  };
  EXPECT_EQ(draw(123), draw(123));
  EXPECT_NE(draw(123), draw(124));
}

}  // namespace
