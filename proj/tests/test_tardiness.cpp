#include "doctest.h"
#include "gspkit/tardiness.hpp"

#include <random>

using namespace gspkit;

static Subproblem area(i64 L, i64 R, std::vector<Row> rows, std::vector<Ray> rays = {})
{
	Subproblem sp;
	sp.L = L;
	sp.R = R;
	sp.inst.rows = std::move(rows);
	sp.inst.rays = std::move(rays);
	return sp;
}

TEST_CASE("cross rows are grouped by exact translate keys")
{
	Row w{0, {Rect{0, 2, 4, 3, 4}, Rect{1, 4, 8, 5, 4}}};
	Row v{3, {Rect{2, 2, 4, 3, 4}, Rect{3, 4, 8, 5, 4}}};
	Row inside{5, {Rect{4, 0, 2, 1, 1}}};
	Subproblem sp = area(0, 8, {w, v, inside});
	auto groups = group_cross_rows(sp, Q(1));
	REQUIRE(groups.size() == 1);
	CHECK(groups[0].key.k == 2);
	CHECK(groups[0].key.cexp == std::vector<i64>{1, 2});
	CHECK(groups[0].key.pexp == 2);
	CHECK(groups[0].key.t == std::vector<i64>{2, 4, 8});
	CHECK(groups[0].rows.size() == 2);
}

TEST_CASE("greedy selection inside a group")
{
	std::vector<Row> rows;
	for (int k = 0; k < 8; ++k)
		rows.push_back(Row{k, {Rect{2 * k, 0, 2, 1, 1}, Rect{2 * k + 1, 2, 4, 1, 1}}});
	Subproblem sp = area(0, 4, rows);
	auto groups = group_cross_rows(sp, Q(1, 2));
	REQUIRE(groups.size() == 1);
	GroupCounts gc;
	gc.n = {0, 0, 3};
	gc.verbatim = {{}, {}, {}};
	auto len = greedy_group_select(groups[0], gc, Q(1, 2));
	REQUIRE(len);
	CHECK(*len == std::vector<int>{2, 2, 2, 2, 2, 2, 0, 0});
	GroupCounts one;
	one.n = {0, 1, 0};
	one.verbatim = {{}, {5}, {}};
	auto l1 = greedy_group_select(groups[0], one, Q(1, 2));
	REQUIRE(l1);
	CHECK(*l1 == std::vector<int>{0, 0, 0, 0, 0, 1, 0, 0});
	GroupCounts too_many;
	too_many.n = {0, 5, 4};
	too_many.verbatim = {{}, {}, {}};
	CHECK_FALSE(greedy_group_select(groups[0], too_many, Q(1, 2)));
}

TEST_CASE("group selection dominates a random reference on every ray")
{
	std::mt19937_64 rng(3);
	for (int it = 0; it < 100; ++it) {
		std::vector<Row> rows;
		for (int k = 0; k < 5; ++k)
			rows.push_back(Row{k, {Rect{3 * k, 0, 2, 1, 2}, Rect{3 * k + 1, 2, 3, 2, 2}, Rect{3 * k + 2, 3, 4, 1, 2}}});
		Subproblem sp = area(0, 4, rows);
		Selection S;
		for (int k = 0; k < 5; ++k) {
			int len = static_cast<int>(rng() % 4);
			for (int i = 0; i < len; ++i)
				S.push_back(3 * k + i);
		}
		Q eps = it % 2 ? Q(1, 2) : Q(1, 4);
		auto groups = group_cross_rows(sp, eps);
		REQUIRE(groups.size() == 1);
		auto len = greedy_group_select(groups[0], counts_from_reference(sp, groups[0], S, eps), eps);
		REQUIRE(len);
		Selection apx = group_selection(sp, groups[0], *len);
		CHECK(check_group_dominance(sp, apx, S).empty());
		CHECK(selection_cost(sp.inst, apx) <= (1 + 5 * eps) * selection_cost(sp.inst, S));
	}
}

TEST_CASE("split reduces child demands by the group coverage")
{
	Subproblem sp = area(0, 4,
	                     {Row{0, {Rect{0, 0, 2, 1, 4}, Rect{1, 2, 4, 1, 4}}}, Row{1, {Rect{2, 0, 2, 1, 4}, Rect{3, 2, 4, 1, 4}}},
	                      Row{2, {Rect{4, 0, 1, 1, 1}}}},
	                     {Ray{5, 1, 10}});
	auto groups = group_cross_rows(sp, Q(1, 2));
	REQUIRE(groups.size() == 1);
	auto [l, r] = detail::split_tardiness(sp, groups, {0, 2});
	REQUIRE(l.inst.rays.size() == 1);
	CHECK(l.inst.rays[0].d == 2);
	CHECK(l.inst.rows.size() == 1);
	CHECK(r.inst.rows.empty());
	Subproblem plain = area(0, 4, {Row{0, {Rect{0, 0, 1, 1, 1}}}}, {Ray{0, 0, 1}});
	auto [pl, pr] = detail::split_tardiness(plain, group_cross_rows(plain, Q(1, 2)), {});
	CHECK(pl.inst.rays[0].d == 1);
}

TEST_CASE("tardiness preprocessing")
{
	RcpInstance eq;
	eq.rows = {Row{0, {Rect{0, 0, 2, 1, 1}}}, Row{1, {Rect{1, 0, 2, 1, 1}}}};
	eq.rays = {Ray{1, 0, 1}};
	auto c = tardiness_preprocess(eq, Q(1, 2));
	REQUIRE(c.size() == 2);
	CHECK_FALSE(c[0].rmax);
	CHECK(c[1].C == 1);
	CHECK(c[1].forced.empty());

	RcpInstance three;
	three.rows = {Row{0, {Rect{0, 0, 2, Q(1, 12), 1}}}, Row{1, {Rect{1, 0, 2, 3, 1}}}, Row{2, {Rect{2, 0, 2, 2, 1}}}};
	three.rays = {Ray{2, 1, 2}};
	auto t = tardiness_preprocess(three, Q(1, 2));
	const TardinessCandidate* top = nullptr;
	for (const auto& x : t)
		if (x.rmax && *x.rmax == 1)
			top = &x;
	REQUIRE(top);
	CHECK(top->forced == Selection{0});
	CHECK(top->inst.rays[0].d == 1);
	CHECK(top->c_ok);
	CHECK(top->C == Q(3, 2));
}

TEST_CASE("tardiness recursion")
{
	TardinessOptions o;
	o.eps = Q(1, 4);
	RcpInstance zero;
	zero.rows = {Row{0, {Rect{0, 0, 2, 1, 1}}}};
	zero.rays = {Ray{0, 1, 0}};
	auto z = solve_tardiness(zero, o, Selection{});
	CHECK(z.feasible);
	CHECK(z.sel.empty());

	RcpInstance one;
	one.rows = {Row{0, {Rect{0, 0, 2, 1, 2}, Rect{1, 2, 4, 3, 2}}}};
	one.rays = {Ray{0, 1, 2}};
	auto opt = brute_force(one);
	auto r = solve_tardiness(one, o, opt.sel);
	CHECK(r.feasible);
	CHECK(r.cost == opt.cost);
	CHECK_THROWS_AS(solve_tardiness(one, TardinessOptions{Q(1, 3)}, opt.sel), std::invalid_argument);
}

TEST_CASE("tardiness oracle mode stays within 1+5eps on random instances")
{
	std::mt19937_64 rng(17);
	const Q eps(1, 4);
	int checked = 0;
	for (int it = 0; it < 200; ++it) {
		RcpInstance in;
		int id = 0;
		int nrows = 1 + static_cast<int>(rng() % 5);
		for (int k = 0; k < nrows; ++k) {
			Row w{k, {}};
			i64 x = 2 * static_cast<i64>(rng() % 3);
			i64 p = 1 + static_cast<i64>(rng() % 3);
			int cnt = 1 + static_cast<int>(rng() % 2);
			for (int q = 0; q < cnt; ++q) {
				w.rects.push_back(Rect{id++, x, x + 2, Q(1 + static_cast<long>(rng() % 4)), p});
				x += 2;
			}
			in.rows.push_back(w);
		}
		for (int q = 0; q < 2; ++q)
			in.rays.push_back(Ray{static_cast<i64>(rng() % 5), static_cast<i64>(rng() % 8), static_cast<i64>(rng() % 5)});
		auto opt = brute_force(in);
		if (!opt.feasible)
			continue;
		++checked;
		TardinessOptions o;
		o.eps = eps;
		TardinessReport rep;
		auto r = solve_tardiness(in, o, opt.sel, &rep);
		REQUIRE(r.feasible);
		CHECK(is_feasible(in, r.sel));
		CHECK(r.cost <= (1 + 5 * eps) * opt.cost);
		CHECK(rep.ok());
		o.mode = ApproxMode::Exhaustive;
		auto e = solve_tardiness(in, o);
		CHECK(e.feasible);
		CHECK(e.cost <= r.cost);
	}
	CHECK(checked > 20);
}
