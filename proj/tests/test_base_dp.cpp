#include "doctest.h"
#include "gspkit/base_dp.hpp"

#include <random>

using namespace gspkit;

TEST_CASE("single rectangle covers an interior ray")
{
	Subproblem sp;
	sp.L = 2;
	sp.R = 3;
	sp.inst.rows = {Row{0, {Rect{0, 2, 3, 1, 2}}}};
	sp.inst.rays = {Ray{0, 2, 2}};
	auto r = base_case_dp(sp);
	CHECK(r.feasible);
	CHECK(r.cost == 1);
	CHECK(r.sel == Selection{0});
	sp.inst.rays[0].d = 3;
	CHECK_FALSE(base_case_dp(sp).feasible);
}

TEST_CASE("out-ray demand threads through the rows")
{
	Subproblem sp;
	sp.L = 2;
	sp.R = 3;
	sp.inst.rows = {Row{0, {Rect{0, 0, 2, 1, 2}, Rect{1, 2, 3, 1, 2}}}, Row{1, {Rect{2, 2, 3, 1, 2}}}};
	sp.inst.rays = {Ray{0, 0, 2}, Ray{1, 2, 2}};
	auto r = base_case_dp(sp);
	auto b = brute_force(sp.inst);
	CHECK(r.feasible);
	CHECK(r.cost == b.cost);
	CHECK(r.cost == 2);
	CHECK(is_feasible(sp.inst, r.sel));
}

TEST_CASE("dp matches brute force on random width-1 strips")
{
	std::mt19937_64 rng(7);
	for (int it = 0; it < 200; ++it) {
		Subproblem sp;
		sp.L = 3;
		sp.R = 4;
		int nrows = 1 + static_cast<int>(rng() % 4);
		int id = 0;
		for (int k = 0; k < nrows; ++k) {
			Row w{static_cast<i64>(k), {}};
			int cnt = 1 + static_cast<int>(rng() % 3);
			i64 x = static_cast<i64>(rng() % 4);
			i64 p = 1 + static_cast<i64>(rng() % 4);
			for (int q = 0; q < cnt; ++q) {
				i64 wdt = 1 + static_cast<i64>(rng() % 2);
				w.rects.push_back(Rect{id++, x, x + wdt, Q(1 + static_cast<long>(rng() % 5)), p});
				x += wdt;
			}
			sp.inst.rows.push_back(w);
		}
		sp.inst.rays.push_back(Ray{static_cast<i64>(rng() % 4), 3, static_cast<i64>(rng() % 8)});
		sp.inst.rays.push_back(Ray{static_cast<i64>(rng() % 4), static_cast<i64>(rng() % 3), static_cast<i64>(rng() % 6)});
		auto a = base_case_dp(sp);
		auto b = brute_force(sp.inst);
		REQUIRE(a.feasible == b.feasible);
		if (a.feasible) {
			CHECK(a.cost == b.cost);
			CHECK(is_feasible(sp.inst, a.sel));
		}
	}
}
