#include <doctest.h>

#include "properties.hpp"

using namespace ibc::testing;

namespace {

constexpr std::uint64_t kSeed = 20240601;

void check(const PropertyResult& r)
{
    INFO(r.name << ": " << r.detail);
    CHECK(r.pass);
}

}  // namespace

TEST_CASE("property: mutual information oracle") { check(mi_oracle_property(kSeed)); }
TEST_CASE("property: data processing inequality") { check(dpi_property(kSeed)); }
TEST_CASE("property: objective monotonicity") { check(monotonicity_property(kSeed)); }
TEST_CASE("property: shuffle invariants") { check(shuffle_property(kSeed)); }
TEST_CASE("property: hull on a line") { check(hull_line_property()); }
TEST_CASE("property: hull on the grid") { check(hull_grid_property(kSeed)); }
TEST_CASE("property: hull in 3D") { check(hull_cube_property(kSeed)); }
TEST_CASE("property: dcon range") { check(dcon_range_property(kSeed)); }
