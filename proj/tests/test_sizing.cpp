#include "doctest.h"
#include "pvmpc/error.hpp"
#include "pvmpc/sizing.hpp"

using namespace pvmpc;

TEST_CASE("reference design") {
  const SizingSpec spec;
  const SystemSize s = size_system(spec);
  CHECK(s.n_panels_parallel == 3);
  CHECK(s.n_battery_series == 2);
  CHECK(s.n_battery_strings == 1);
  CHECK(s.n_batteries() == 2);
  CHECK(s.system_voltage == 24.0);
  CHECK(s.total_cost == 1100.0);
  const auto text = describe_sizing(spec, s);
  CHECK(text.find("insolation_psh") != std::string::npos);
}

TEST_CASE("default demand matches the sizing input") {
  const SystemConfig c;
  CHECK(default_daily_demand(c, 0.075) == doctest::Approx(3858.0));
}

TEST_CASE("sizing input errors") {
  SizingSpec spec;
  spec.insolation_psh = 0.0;
  CHECK_THROWS_WITH_AS(size_system(spec), "cannot size for zero sun", DataError);
  spec = {};
  spec.battery.max_dod = 1.5;
  CHECK_THROWS_AS(size_system(spec), DataError);
  spec = {};
  spec.daily_demand_wh = -1.0;
  CHECK_THROWS_AS(size_system(spec), DataError);
}

TEST_CASE("more demand or autonomy never shrinks the system") {
  SizingSpec spec;
  SystemSize prev = size_system(spec);
  for (double demand = 3858.0; demand < 30000.0; demand += 250.0) {
    spec.daily_demand_wh = demand;
    const SystemSize s = size_system(spec);
    CHECK(s.n_panels_parallel >= prev.n_panels_parallel);
    CHECK(s.n_batteries() >= prev.n_batteries());
    prev = s;
  }
  spec = {};
  prev = size_system(spec);
  for (double days = 1.0; days <= 5.0; days += 0.25) {
    spec.storage_days = days;
    const SystemSize s = size_system(spec);
    CHECK(s.n_batteries() >= prev.n_batteries());
    CHECK(s.n_panels_parallel == 3);
    prev = s;
  }
  spec = {};
  spec.storage_days = 2.0;
  CHECK(size_system(spec).n_batteries() == 4);
}

TEST_CASE("ladder") {
  const auto ladder = size_ladder();
  REQUIRE(ladder.size() == 6);
  const double costs[] = {1100, 1200, 1900, 2000, 2100, 2200};
  const char* labels[] = {"A", "B", "C", "D", "E", "F"};
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const auto& s = ladder[i];
    CHECK(s.label == labels[i]);
    CHECK(s.total_cost == costs[i]);
    CHECK(s.total_cost == 100.0 * s.n_panels_parallel + 400.0 * s.n_batteries());
    CHECK(s.system_voltage == 24.0);
    if (i > 0) CHECK(s.total_cost > ladder[i - 1].total_cost);
  }
  const auto ref = size_system(SizingSpec{});
  CHECK(ladder[0].n_panels_parallel == ref.n_panels_parallel);
  CHECK(ladder[0].n_batteries() == ref.n_batteries());
}

TEST_CASE("applying a size scales the plant") {
  SystemConfig c;
  c.initial_e_bat_wh = 3000.0;
  const auto d = apply_size(c, size_ladder()[3]);
  CHECK(d.pv.n_panels == 4);
  CHECK(d.battery.e_min_wh == 2160.0);
  CHECK(d.battery.e_max_wh == 10800.0);
  CHECK(d.battery.e_charge_max_wh == 1620.0);
  CHECK(d.battery.e_discharge_max_wh == 1689.0);
  CHECK(*d.initial_e_bat_wh == 6000.0);
  CHECK(d.battery.eta_charge == c.battery.eta_charge);
  const auto a = apply_size(SystemConfig{}, size_ladder()[0]);
  CHECK(a.battery.e_max_wh == 5400.0);
  CHECK(a.pv.n_panels == 3);
  SystemSize bad;
  bad.n_panels_parallel = 0;
  CHECK_THROWS_AS(apply_size(c, bad), ContractError);
}
