#include "doctest.h"
#include "gspkit/approx.hpp"

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

TEST_CASE("row classification")
{
	CHECK(classify_row(Row{0, {Rect{0, 1, 3, 1, 1}, Rect{1, 3, 5, 1, 1}}}, 0, 8) == RowClass::Centered);
	CHECK(classify_row(Row{0, {Rect{0, 0, 4, 1, 1}, Rect{1, 4, 9, 1, 1}}}, 0, 8) == RowClass::Spanning);
	CHECK(classify_row(Row{0, {Rect{0, 2, 6, 1, 1}, Rect{1, 6, 9, 1, 1}}}, 0, 8) == RowClass::RightSticking);
	CHECK(classify_row(Row{0, {Rect{0, 0, 3, 1, 1}}}, 0, 8) == RowClass::LeftSticking);
	CHECK(classify_row(Row{0, {Rect{0, 9, 12, 1, 1}}}, 0, 8) == RowClass::Outside);
}

TEST_CASE("auxiliary cost")
{
	Subproblem a = area(0, 8, {Row{0, {Rect{0, 1, 3, 3, 1}}}});
	CHECK(c_apx(a, {0}) == 6);
	Subproblem b = area(0, 8, {Row{0, {Rect{0, 0, 9, 2, 1}}}, Row{1, {Rect{1, 0, 3, 1, 1}}}});
	CHECK(c_apx(b, {0, 1}) == 3);
	Subproblem m = area(0, 8,
	                    {Row{0, {Rect{0, 1, 3, 3, 1}}}, Row{1, {Rect{1, 0, 9, 2, 1}}},
	                     Row{2, {Rect{2, 0, 2, 1, 1}, Rect{3, 2, 4, 1, 1}}}});
	CHECK(c_apx(m, {0, 1, 2, 3}) == 11);
}

TEST_CASE("centered rows are split at mid with cost reassignment")
{
	Subproblem a = area(0, 4, {Row{0, {Rect{0, 1, 3, 3, 1}}}});
	NodeGuess none;
	auto sr = split_subproblem(a, group_rows(a, Q(1, 4)), none, params_for(a.inst, Q(1, 4)));
	REQUIRE(sr.left.inst.rows.size() == 1);
	REQUIRE(sr.right.inst.rows.size() == 1);
	const Rect& lh = sr.left.inst.rows[0].rects[0];
	const Rect& rh = sr.right.inst.rows[0].rects[0];
	CHECK(lh.a == 1);
	CHECK(lh.b == 2);
	CHECK(lh.c == 3);
	CHECK(rh.a == 2);
	CHECK(rh.b == 3);
	CHECK(rh.c == 3);

	Subproblem b = area(0, 4, {Row{0, {Rect{0, 1, 2, 2, 1}, Rect{1, 2, 3, 5, 1}}}});
	auto sb = split_subproblem(b, group_rows(b, Q(1, 4)), none, params_for(b.inst, Q(1, 4)));
	REQUIRE(sb.left.inst.rows.size() == 1);
	CHECK(sb.left.inst.rows[0].rects.size() == 1);
	CHECK(sb.left.inst.rows[0].rects[0].c == 2);
	CHECK(sb.right.inst.rows[0].rects[0].c == 7);
	REQUIRE(sb.ledger.size() == 1);
	CHECK(sb.ledger[0].id == 1);
	CHECK(sb.ledger[0].after == 7);
}

TEST_CASE("interior ray demand is reduced by the step value and APX_mid")
{
	ApproxParams prm{Q(1), Q(1), 1};
	Subproblem sp = area(0, 4,
	                     {Row{0, {Rect{0, 0, 3, 1, 4}}}, Row{1, {Rect{1, 0, 3, 1, 4}}},
	                      Row{5, {Rect{2, 0, 3, 2, 2}}}},
	                     {Ray{10, 0, 9}});
	auto groups = group_rows(sp, prm.eps);
	REQUIRE(groups.size() == 2);
	NodeGuess g;
	g.large = {1, 0};
	g.filled = {0, 0};
	g.prefix = {{1, 0}, {1}};
	auto sr = split_subproblem(sp, groups, g, prm);
	CHECK(sr.apx_mid == Selection{2});
	CHECK(sr.f_left.value(0, 10) == 4);
	REQUIRE(sr.left.inst.rays.size() == 1);
	CHECK(sr.left.inst.rays[0].d == 3);
	CHECK(sr.right.inst.rays.size() == sr.f_left.rays().size());
	for (const Ray& l : sr.right.inst.rays)
		CHECK(l.d == 4);
}

TEST_CASE("step function basics")
{
	ApproxParams prm{Q(1, 4), Q(1), 2};
	auto empty = build_step_function(0, 8, {}, 0, prm);
	CHECK(empty.steps().size() == 1);
	CHECK(empty.value(3, 100) == 0);
	std::vector<StepRow> one{StepRow{3, 4, 0, 8}};
	auto f = build_step_function(0, 8, one, 1, prm);
	CHECK(f.value(5, 3) == 4);
	CHECK(f.value(5, 2) == 0);
	CHECK(check_sandwich(f, one, {bucket_exp(Q(4), 1 + prm.eps)}, prm).empty());
}

TEST_CASE("step function sandwich on random rows")
{
	std::mt19937_64 rng(5);
	for (int it = 0; it < 60; ++it) {
		ApproxParams prm{Q(1, 1 + static_cast<long>(rng() % 2)), Q(1), 1};
		const i64 xa = 0, xb = 4 + static_cast<i64>(rng() % 40);
		std::vector<StepRow> rows;
		std::vector<i64> pexp{0, 1};
		int n = 6 + static_cast<int>(rng() % 60);
		for (int k = 0; k < n; ++k) {
			int g = static_cast<int>(rng() % 2);
			i64 p = g == 0 ? 1 : 2;
			if (prm.eps == Q(1, 2))
				pexp = {0, 1};
			i64 reach = rng() % 3 == 0 ? std::numeric_limits<i64>::min() : xa + static_cast<i64>(rng() % (xb + 2));
			rows.push_back(StepRow{static_cast<i64>(k), p, g, reach});
		}
		pexp = {bucket_exp(Q(1), 1 + prm.eps), bucket_exp(Q(2), 1 + prm.eps)};
		auto f = build_step_function(xa, xb, rows, 2, prm);
		CHECK(check_sandwich(f, rows, pexp, prm).empty());
		CHECK(Q(static_cast<long>(f.steps().size())) <= step_bound(prm, 2));
	}
}

TEST_CASE("augmenting a reference")
{
	ApproxParams prm{Q(1), Q(1), 1};
	std::vector<Row> rows;
	for (int k = 0; k < 4; ++k)
		rows.push_back(Row{k, {Rect{k, 0, 3, 1, 1}}});
	Subproblem sp = area(0, 4, rows);
	auto groups = group_rows(sp, prm.eps);
	REQUIRE(groups.size() == 1);
	CHECK(groups[0].key.side == Side::Left);
	Selection S{2, 3};
	auto aug = augment_reference(sp, groups, S, prm);
	CHECK(aug.stats[0].n == 2);
	CHECK(aug.stats[0].large);
	CHECK(aug.stats[0].added_y == std::vector<i64>{0});
	CHECK(aug.stats[0].filled == 1);
	CHECK(aug.splus == Selection{0, 2, 3});
	CHECK(check_surplus(sp, groups, S, aug, prm).empty());

	ApproxParams small{Q(1, 4), Q(1), 1};
	auto same = augment_reference(sp, group_rows(sp, small.eps), S, small);
	CHECK(same.splus == S);
}

TEST_CASE("combining children")
{
	Subproblem sp = area(0, 4, {Row{0, {Rect{0, 0, 1, 1, 1}, Rect{1, 1, 3, 1, 1}}}});
	CHECK(combine_children(sp, {}, {}, {}).empty());
	CHECK(combine_children(sp, {}, {}, {1}) == Selection{0, 1});
}

TEST_CASE("recursive solve in oracle mode")
{
	RcpInstance r1;
	r1.rows = {Row{0, {Rect{0, 0, 2, 1, 3}, Rect{1, 2, 4, 1, 3}}}, Row{1, {Rect{2, 1, 3, 2, 2}}}};
	r1.rays = {Ray{1, 2, 5}};
	auto opt = brute_force(r1);
	REQUIRE(opt.cost == 4);
	ApproxOptions o;
	o.params = params_for(r1, Q(1, 4));
	ApproxReport rep;
	auto res = solve_rcp_recursive(r1, o, opt.sel, &rep);
	CHECK(res.feasible);
	CHECK(is_feasible(r1, res.sel));
	CHECK(res.cost <= (1 + o.params.eps) * c_apx(Subproblem{0, 4, r1}, opt.sel));
	CHECK(res.cost <= (2 + 2 * o.params.eps) * 4);
	CHECK(rep.ok());

	RcpInstance unit;
	unit.rows = {Row{0, {Rect{0, 0, 1, 3, 2}}}};
	unit.rays = {Ray{0, 0, 2}};
	auto u = solve_rcp_recursive(unit, o, Selection{0});
	CHECK(u.feasible);
	CHECK(u.cost == 3);
}

TEST_CASE("exhaustive mode agrees with oracle mode on a micro instance")
{
	RcpInstance in;
	in.rows = {Row{0, {Rect{0, 0, 1, 1, 2}, Rect{1, 1, 2, 2, 2}}}, Row{1, {Rect{2, 0, 2, 3, 1}}}};
	in.rays = {Ray{1, 1, 3}, Ray{0, 0, 1}};
	auto opt = brute_force(in);
	REQUIRE(opt.feasible);
	ApproxOptions o;
	o.params = params_for(in, Q(1, 4));
	auto a = solve_rcp_recursive(in, o, opt.sel);
	o.mode = ApproxMode::Exhaustive;
	o.cap_guesses = 1000;
	o.cap_depth = 1;
	auto b = solve_rcp_recursive(in, o);
	CHECK(a.feasible);
	CHECK(b.feasible);
	CHECK(a.cost == b.cost);
	o.cap_guesses = 1;
	CHECK_THROWS_AS(solve_rcp_recursive(in, o), CapsExhausted);
}

TEST_CASE("oracle mode certificates on random instances")
{
	std::mt19937_64 rng(23);
	for (int it = 0; it < 60; ++it) {
		RcpInstance in;
		int id = 0;
		int nrows = 1 + static_cast<int>(rng() % 4);
		for (int k = 0; k < nrows; ++k) {
			Row w{k, {}};
			i64 x = static_cast<i64>(rng() % 4);
			i64 p = 1 + static_cast<i64>(rng() % 3);
			int cnt = 1 + static_cast<int>(rng() % 3);
			for (int q = 0; q < cnt; ++q) {
				i64 wd = 1 + static_cast<i64>(rng() % 3);
				w.rects.push_back(Rect{id++, x, x + wd, Q(1 + static_cast<long>(rng() % 4)), p});
				x += wd;
			}
			in.rows.push_back(w);
		}
		for (int q = 0; q < 2; ++q)
			in.rays.push_back(Ray{static_cast<i64>(rng() % 4), static_cast<i64>(rng() % 8), static_cast<i64>(rng() % 5)});
		auto opt = brute_force(in);
		if (!opt.feasible)
			continue;
		ApproxOptions o;
		o.params = params_for(in, Q(1, 4));
		ApproxReport rep;
		auto res = solve_rcp_recursive(in, o, opt.sel, &rep);
		REQUIRE(res.feasible);
		CHECK(is_feasible(in, res.sel));
		CHECK(res.cost <= (2 + 2 * o.params.eps) * opt.cost);
		for (const auto& f : rep.failures())
			INFO(f);
		CHECK(rep.ok());
	}
}
