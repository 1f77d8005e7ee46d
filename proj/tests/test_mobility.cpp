#include "siov/mobility.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "siov/rng.hpp"
#include "support/fixtures.hpp"

using namespace siov;

namespace {

MobilityTrace fcd(const std::string& text) {
  std::istringstream in(text);
  return parse_fcd_trace(in);
}

MobilityTrace csv(const std::string& text) {
  std::istringstream in(text);
  return parse_csv_trace(in);
}

// -- FCD ------------------------------------------------------------------------

TEST(FcdParser, SingleTimestepSingleVehicle) {
  const auto trace = fcd(R"(<fcd-export>
  <timestep time="0.0">
    <vehicle id="v0" x="10" y="20" speed="5" angle="90"/>
  </timestep>
</fcd-export>)");
  ASSERT_EQ(trace.n_vehicles(), 1u);
  ASSERT_EQ(trace.tracks[0].states.size(), 1u);
  const auto& s = trace.tracks[0].states[0];
  EXPECT_EQ(trace.tracks[0].id, "v0");
  EXPECT_DOUBLE_EQ(s.pos.x, 10);
  EXPECT_DOUBLE_EQ(s.pos.y, 20);
  EXPECT_DOUBLE_EQ(s.speed_mps, 5);
  EXPECT_DOUBLE_EQ(s.heading_deg, 90);
}

TEST(FcdParser, TwoTimestepsStayOrdered) {
  const auto trace = fcd(R"(<fcd-export>
  <timestep time="0"><vehicle id="a" x="0" y="0" speed="1" angle="0"/></timestep>
  <timestep time="0.5"><vehicle id="a" x="5" y="0" speed="1" angle="0"/></timestep>
</fcd-export>)");
  ASSERT_EQ(trace.tracks[0].states.size(), 2u);
  EXPECT_LT(trace.tracks[0].states[0].time_s, trace.tracks[0].states[1].time_s);
  EXPECT_DOUBLE_EQ(trace.duration_s, 0.5);
}

TEST(FcdParser, RegressingTimeIsRejected) {
  EXPECT_THROW(fcd(R"(<fcd-export>
  <timestep time="1.0"><vehicle id="a" x="0" y="0" speed="1" angle="0"/></timestep>
  <timestep time="0.5"><vehicle id="a" x="5" y="0" speed="1" angle="0"/></timestep>
</fcd-export>)"),
               NonMonotoneTimeError);
}

TEST(FcdParser, MissingAttributeReportsLine) {
  try {
    fcd("<fcd-export>\n<timestep time=\"0\">\n<vehicle id=\"a\" x=\"0\" speed=\"1\" "
        "angle=\"0\"/>\n</timestep>\n</fcd-export>");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location(), 3u);
  }
}

// -- CSV ------------------------------------------------------------------------

TEST(CsvParser, SmallFile) {
  const auto trace = csv(
      "time,vehicle_id,x,y,speed,heading\n"
      "0,a,1,2,3,0\n"
      "0,b,4,5,6,90\n"
      "1,a,2,2,3,0\n");
  EXPECT_EQ(trace.n_vehicles(), 2u);
}

TEST(CsvParser, HeaderOnlyIsEmptyTrace) {
  const auto trace = csv("time,vehicle_id,x,y,speed,heading\n");
  EXPECT_EQ(trace.n_vehicles(), 0u);
  EXPECT_DOUBLE_EQ(trace.duration_s, 0);
}

TEST(CsvParser, MatchesFcdForSameContent) {
  const auto a = fcd(test::kFcdFixture);
  const auto b = csv(test::kCsvFixture);
  ASSERT_EQ(a.n_vehicles(), b.n_vehicles());
  ASSERT_DOUBLE_EQ(a.duration_s, b.duration_s);
  for (std::size_t v = 0; v < a.n_vehicles(); ++v) {
    ASSERT_EQ(a.tracks[v].id, b.tracks[v].id);
    ASSERT_EQ(a.tracks[v].states.size(), b.tracks[v].states.size());
    for (std::size_t i = 0; i < a.tracks[v].states.size(); ++i) {
      const auto& x = a.tracks[v].states[i];
      const auto& y = b.tracks[v].states[i];
      ASSERT_DOUBLE_EQ(x.time_s, y.time_s);
      ASSERT_DOUBLE_EQ(x.pos.x, y.pos.x);
      ASSERT_DOUBLE_EQ(x.pos.y, y.pos.y);
      ASSERT_DOUBLE_EQ(x.speed_mps, y.speed_mps);
      ASSERT_DOUBLE_EQ(x.heading_deg, y.heading_deg);
    }
  }
}

TEST(CsvParser, DuplicateStateIsRejected) {
  EXPECT_THROW(csv("time,vehicle_id,x,y,speed,heading\n"
                   "1,a,0,0,1,0\n"
                   "1,a,5,0,1,0\n"),
               DuplicateStateError);
}

TEST(CsvParser, BadNumberReportsRow) {
  try {
    csv("time,vehicle_id,x,y,speed,heading\n"
        "0,a,1,2,3,0\n"
        "0,b,oops,5,6,90\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location(), 3u);
  }
}

TEST(CsvParser, RoundTripIsIdentity) {
  const auto a = csv(test::kCsvFixture);
  std::ostringstream out;
  serialize_csv_trace(a, out);
  const auto b = csv(out.str());
  std::ostringstream out2;
  serialize_csv_trace(b, out2);
  EXPECT_EQ(out.str(), out2.str());
}

// -- interpolation ----------------------------------------------------------------

TEST(PositionsAt, LinearInterpolation) {
  const auto trace = csv(
      "time,vehicle_id,x,y,speed,heading\n"
      "0,a,0,0,2,90\n"
      "1,a,10,0,4,90\n");
  const auto states = positions_at(trace, 0.5);
  ASSERT_EQ(states.size(), 1u);
  EXPECT_DOUBLE_EQ(states[0].pos.x, 5.0);
  EXPECT_DOUBLE_EQ(states[0].speed_mps, 3.0);
}

TEST(PositionsAt, ExactSampleReturnedUnchanged) {
  const auto trace = csv(test::kCsvFixture);
  const auto states = positions_at(trace, 0.5);
  for (const auto& s : states) {
    if (trace.tracks[s.vehicle].id == "v0") {
      EXPECT_DOUBLE_EQ(s.pos.x, 12.5);
      EXPECT_DOUBLE_EQ(s.pos.y, 20.0);
    }
  }
}

TEST(PositionsAt, VehiclesOutsideLifespanAreOmitted) {
  const auto trace = csv(
      "time,vehicle_id,x,y,speed,heading\n"
      "10,late,0,0,1,0\n"
      "20,late,5,0,1,0\n"
      "0,early,0,0,1,0\n"
      "20,early,5,0,1,0\n");
  const auto states = positions_at(trace, 5.0);
  ASSERT_EQ(states.size(), 1u);
  EXPECT_EQ(trace.tracks[states[0].vehicle].id, "early");
}

TEST(PositionsAt, OutOfRangeQueryThrows) {
  const auto trace = csv(test::kCsvFixture);
  EXPECT_THROW(positions_at(trace, -0.1), OutOfRangeError);
  EXPECT_THROW(positions_at(trace, 1.1), OutOfRangeError);
}

TEST(PositionsAt, InterpolationStaysOnSegment) {
  const auto trace = csv(test::kCsvFixture);
  RngStream rng(3);
  auto& s = rng.sub("q");
  for (int i = 0; i < 500; ++i) {
    const double t = s.uniform01();
    for (const auto& st : positions_at(trace, t)) {
      const auto& track = trace.tracks[st.vehicle].states;
      bool on_some_segment = false;
      for (std::size_t k = 1; k < track.size(); ++k) {
        const Vec2 lo = track[k - 1].pos, hi = track[k].pos;
        const double cross =
            (st.pos.x - lo.x) * (hi.y - lo.y) - (st.pos.y - lo.y) * (hi.x - lo.x);
        const bool in_box = st.pos.x >= std::min(lo.x, hi.x) - 1e-9 &&
                            st.pos.x <= std::max(lo.x, hi.x) + 1e-9 &&
                            st.pos.y >= std::min(lo.y, hi.y) - 1e-9 &&
                            st.pos.y <= std::max(lo.y, hi.y) + 1e-9;
        if (std::abs(cross) < 1e-6 && in_box) {
          on_some_segment = true;
          break;
        }
      }
      ASSERT_TRUE(on_some_segment);
    }
  }
}

// -- synthetic traffic ---------------------------------------------------------------

RegionSpec paper_region() {
  RegionSpec r;
  r.width_m = 8700;
  r.height_m = 11700;
  r.zones = {Zone{ZoneClass::Urban, 0, 0, 1800, 2250},
             Zone{ZoneClass::Suburban, 2700, 0, 3000, 1500},
             Zone{ZoneClass::Rural, 6200, 0, 2000, 2000}};
  return r;
}

TEST(Synthetic, CountDurationAndBounds) {
  RngStream rng(5);
  const auto region = paper_region();
  const auto trace = generate_synthetic(region, 100, 50, rng.sub("mobility"));
  EXPECT_EQ(trace.n_vehicles(), 100u);
  EXPECT_GE(trace.duration_s, 50.0);
  for (const auto& track : trace.tracks) {
    ASSERT_FALSE(track.states.empty());
    for (const auto& st : track.states) {
      ASSERT_GE(st.pos.x, 0.0);
      ASSERT_LE(st.pos.x, region.width_m);
      ASSERT_GE(st.pos.y, 0.0);
      ASSERT_LE(st.pos.y, region.height_m);
      ASSERT_GE(st.speed_mps, 0.0);
    }
  }
}

TEST(Synthetic, SameSeedSameTrace) {
  const auto region = paper_region();
  RngStream a(9), b(9);
  const auto ta = generate_synthetic(region, 50, 20, a.sub("mobility"));
  const auto tb = generate_synthetic(region, 50, 20, b.sub("mobility"));
  ASSERT_EQ(ta.n_vehicles(), tb.n_vehicles());
  for (std::size_t v = 0; v < ta.n_vehicles(); ++v) {
    ASSERT_EQ(ta.tracks[v].states.size(), tb.tracks[v].states.size());
    for (std::size_t i = 0; i < ta.tracks[v].states.size(); ++i) {
      ASSERT_DOUBLE_EQ(ta.tracks[v].states[i].pos.x, tb.tracks[v].states[i].pos.x);
      ASSERT_DOUBLE_EQ(ta.tracks[v].states[i].pos.y, tb.tracks[v].states[i].pos.y);
    }
  }
}

TEST(Synthetic, DensityArithmetic) {
  // 500 vehicles on the 8.7 x 11.7 km box is 4.91 per km^2 of map area,
  // or 42.34 per km^2 of the 11.81 km^2 road network
  const double map_area_km2 = 8.7 * 11.7;
  EXPECT_NEAR(500.0 / map_area_km2, 4.912, 1e-3);
  EXPECT_NEAR(500.0 / 11.81, 42.337, 1e-3);
}

// -- RSU placement ---------------------------------------------------------------------

TEST(PlaceRsus, UrbanGrid900m) {
  RegionSpec r;
  r.width_m = 2000;
  r.height_m = 2000;
  r.zones = {Zone{ZoneClass::Urban, 0, 0, 900, 900}};
  const auto rsus = place_rsus(r, RsuSpacing{}, 500, 3);
  EXPECT_EQ(rsus.size(), 9u);  // 3 x 3 at 450 m pitch
  std::size_t miners = 0;
  for (const auto& n : rsus) miners += n.role == RsuRole::Miner ? 1 : 0;
  EXPECT_EQ(miners, 3u);
}

TEST(PlaceRsus, TinyZoneGetsOneCenteredRsu) {
  RegionSpec r;
  r.width_m = 1000;
  r.height_m = 1000;
  r.zones = {Zone{ZoneClass::Urban, 100, 100, 300, 300}};
  const auto rsus = place_rsus(r, RsuSpacing{}, 500, 1);
  ASSERT_EQ(rsus.size(), 1u);
  EXPECT_DOUBLE_EQ(rsus[0].pos.x, 250);
  EXPECT_DOUBLE_EQ(rsus[0].pos.y, 250);
}

TEST(PlaceRsus, PaperLayoutGives54With30Miners) {
  const auto rsus = place_rsus(paper_region(), RsuSpacing{}, 500, 30);
  EXPECT_EQ(rsus.size(), 54u);
  std::size_t miners = 0, regular = 0;
  for (const auto& n : rsus) (n.role == RsuRole::Miner ? miners : regular) += 1;
  EXPECT_EQ(miners, 30u);
  EXPECT_EQ(regular, 24u);
}

TEST(PlaceRsus, OverlappingZonesAreRejected) {
  RegionSpec r;
  r.width_m = 3000;
  r.height_m = 3000;
  r.zones = {Zone{ZoneClass::Urban, 0, 0, 1000, 1000},
             Zone{ZoneClass::Rural, 500, 500, 1000, 1000}};
  EXPECT_THROW(place_rsus(r, RsuSpacing{}, 500, 1), ZoneOverlapError);
}

TEST(PlaceRsus, NearestNeighborWithinZoneRespectsSpacing) {
  const auto rsus = place_rsus(paper_region(), RsuSpacing{}, 500, 30);
  // group by zone via position containment
  const auto region = paper_region();
  for (std::size_t z = 0; z < region.zones.size(); ++z) {
    std::vector<Vec2> in_zone;
    for (const auto& n : rsus) {
      if (region.zones[z].contains(n.pos)) in_zone.push_back(n.pos);
    }
    if (in_zone.size() < 2) continue;
    const double spacing = RsuSpacing{}.for_class(region.zones[z].cls);
    for (std::size_t i = 0; i < in_zone.size(); ++i) {
      double nn = 1e18;
      for (std::size_t j = 0; j < in_zone.size(); ++j) {
        if (i != j) nn = std::min(nn, distance(in_zone[i], in_zone[j]));
      }
      ASSERT_GE(nn, spacing - 1e-9);
      ASSERT_LE(nn, spacing * std::sqrt(2.0) + 1e-9);
    }
  }
}

}  // namespace
