#include "doctest.h"
#include "gspkit/rcp.hpp"

using namespace gspkit;

static RcpInstance r1()
{
	RcpInstance in;
	in.rows = {Row{0, {Rect{0, 0, 2, 1, 3}, Rect{1, 2, 4, 1, 3}}}, Row{1, {Rect{2, 1, 3, 2, 2}}}};
	in.rays = {Ray{1, 2, 5}};
	return in;
}

TEST_CASE("validate_rcp computes the derived constants")
{
	auto dg = validate_rcp(r1());
	CHECK(dg.ok());
	CHECK(dg.stats.K == 2);
	CHECK(dg.stats.M == 2);
	CHECK(dg.stats.p_max == 3);
	RcpInstance gap = r1();
	gap.rows[0].rects[1].a = 3;
	gap.rows[0].rects[1].b = 5;
	auto dg2 = validate_rcp(gap);
	REQUIRE_FALSE(dg2.ok());
	CHECK(dg2.violations[0].find("row not consecutive") != std::string::npos);
	RcpInstance zero = r1();
	zero.rows[1].rects[0].c = 0;
	CHECK(validate_rcp(zero).violations[0].find("costs strictly positive") != std::string::npos);
}

TEST_CASE("coverage and feasibility")
{
	RcpInstance in = r1();
	CHECK(coverage(in, {0, 1, 2}, in.rays[0]) == 5);
	CHECK(coverage(in, {}, in.rays[0]) == 0);
	CHECK(coverage(in, {0}, Ray{1, 2, 5}) == 0);
	CHECK(is_feasible(in, {0, 1, 2}));
	CHECK_FALSE(is_feasible(in, {1, 2}));
	RcpInstance none = r1();
	none.rays[0].d = 0;
	CHECK(is_feasible(none, {}));
}

TEST_CASE("prefix closure")
{
	RcpInstance in = r1();
	CHECK(prefix_closure(in, {1}) == Selection{0, 1});
	CHECK(prefix_closure(in, {0, 2}) == Selection{0, 2});
	CHECK(prefix_closure(in, prefix_closure(in, {1, 2})) == prefix_closure(in, {1, 2}));
}

TEST_CASE("brute force and branch and bound agree on R1")
{
	RcpInstance in = r1();
	auto bf = brute_force(in);
	CHECK(bf.feasible);
	CHECK(bf.cost == 4);
	CHECK(bf.sel == Selection{0, 1, 2});
	auto ex = solve_exact(in);
	CHECK(ex.feasible);
	CHECK(ex.cost == 4);
	RcpInstance none = r1();
	none.rays[0].d = 0;
	auto e = brute_force(none);
	CHECK(e.feasible);
	CHECK(e.sel.empty());
	RcpInstance hard = r1();
	hard.rays[0].d = 9;
	CHECK_FALSE(brute_force(hard).feasible);
	CHECK_FALSE(solve_exact(hard).feasible);
	CHECK_THROWS_AS(brute_force(in, 3), BudgetExceeded);
}

TEST_CASE("strip compression")
{
	RcpInstance in;
	in.rows = {Row{0, {Rect{0, 100, 102, 1, 1}}}};
	in.rays = {Ray{0, 101, 1}};
	auto [out, cm] = strip_compress(in);
	CHECK(out.rows[0].rects[0].a == 0);
	CHECK(out.rows[0].rects[0].b == 2);
	CHECK(out.rays[0].t == 1);
	CHECK(cm.map(100) == 0);
	RcpInstance dense;
	dense.rows = {Row{0, {Rect{0, 0, 1, 1, 1}, Rect{1, 1, 2, 1, 1}}}};
	dense.rays = {Ray{0, 0, 1}, Ray{0, 1, 1}};
	auto [d2, cm2] = strip_compress(dense);
	CHECK(d2.rows[0].rects[1].a == 1);
	CHECK(d2.rows[0].rects[1].b == 2);
	CHECK(cm2.map(2) == 2);
	RcpInstance two;
	two.rows = {Row{0, {Rect{0, 0, 2, 1, 2}}}, Row{1, {Rect{1, 50, 53, 3, 2}, Rect{2, 53, 60, 1, 2}}}};
	two.rays = {Ray{1, 1, 2}, Ray{1, 55, 2}};
	auto [t2, cm3] = strip_compress(two);
	CHECK(brute_force(t2).cost == brute_force(two).cost);
	CHECK(t2.rows[1].rects[0].a == 3);
}

TEST_CASE("round_costs threshold and forcing")
{
	RcpInstance in;
	in.rows = {Row{0, {Rect{0, 0, 1, 1, 1}}}, Row{1, {Rect{1, 0, 1, 3, 1}}}, Row{2, {Rect{2, 0, 1, 50, 1}}}};
	in.rays = {Ray{2, 0, 3}};
	auto rr = round_costs(in, Q(1, 2), 2);
	CHECK(rr.cheap_threshold == Q(25, 3));
	CHECK(rr.forced == Selection{0, 1});
	CHECK(rr.inst.rows.size() == 1);
	CHECK(rr.inst.rays[0].d == 1);
	RcpInstance eq;
	eq.rows = {Row{0, {Rect{0, 0, 1, 4, 1}}}, Row{1, {Rect{1, 0, 1, 4, 1}}}};
	auto re = round_costs(eq, Q(1, 2), 0);
	CHECK(rcp_stats(re.inst).M == 1);
	auto rn = round_costs(in, Q(1, 2), std::nullopt);
	CHECK(rn.inst.rows.empty());
}

TEST_CASE("well structured check")
{
	RcpInstance a;
	a.rows = {Row{0, {Rect{0, 4, 6, 1, 1}}}};
	CHECK(check_well_structured(a, Q(1, 2)).empty());
	RcpInstance b;
	b.rows = {Row{0, {Rect{0, 3, 8, 1, 1}}}};
	CHECK(check_well_structured(b, Q(1, 2)).size() == 1);
	RcpInstance c;
	c.rows = {Row{0, {Rect{0, 7, 8, 1, 1}}}};
	CHECK(check_well_structured(c, Q(1, 32)).empty());
}
