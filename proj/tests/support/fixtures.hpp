#pragma once

// Shared parser fixtures.

namespace siov::test {

// five states, two vehicles, three timesteps
inline constexpr const char* kFcdFixture = R"(<?xml version="1.0" encoding="UTF-8"?>
<fcd-export>
  <timestep time="0.0">
    <vehicle id="v0" x="10.0" y="20.0" speed="5.0" angle="90.0"/>
    <vehicle id="v1" x="100.0" y="200.0" speed="8.0" angle="180.0"/>
  </timestep>
  <timestep time="0.5">
    <vehicle id="v0" x="12.5" y="20.0" speed="5.0" angle="90.0"/>
    <vehicle id="v1" x="100.0" y="196.0" speed="8.0" angle="180.0"/>
  </timestep>
  <timestep time="1.0">
    <vehicle id="v0" x="15.0" y="20.0" speed="5.0" angle="90.0"/>
  </timestep>
</fcd-export>
)";

// same content as kFcdFixture, deliberately unsorted
inline constexpr const char* kCsvFixture =
    "time,vehicle_id,x,y,speed,heading\n"
    "0.5,v0,12.5,20.0,5.0,90.0\n"
    "0,v0,10.0,20.0,5.0,90.0\n"
    "0,v1,100.0,200.0,8.0,180.0\n"
    "1.0,v0,15.0,20.0,5.0,90.0\n"
    "0.5,v1,100.0,196.0,8.0,180.0\n";

// checksums valid (inclination 53.0540 deg, mean motion 15.06391 rev/day)
inline constexpr const char* kTleName = "STARLINK-TEST";
inline constexpr const char* kTleLine1 =
    "1 44713U 19074A   23010.50000000  .00001000  00000-0  80000-4 0  9994";
inline constexpr const char* kTleLine2 =
    "2 44713  53.0540 123.4567 0001500  90.0000 270.0456 15.06391000123455";

}  // namespace siov::test
