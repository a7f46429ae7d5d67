#include "doctest.h"
#include "gspkit/gsp.hpp"

using namespace gspkit;

static Job tard_job(int id, i64 r, i64 p, i64 w, i64 d)
{
	Job j;
	j.id = id;
	j.r = r;
	j.p = p;
	j.fn.kind = CostKind::Tardiness;
	j.fn.w = w;
	j.fn.d = d;
	j.fn.start = r;
	return j;
}

static GspInstance g1()
{
	GspInstance g;
	g.jobs = {tard_job(0, 0, 2, 1, 2), tard_job(1, 1, 1, 2, 1)};
	validate_gsp(g);
	return g;
}

TEST_CASE("cost_at evaluates tardiness and hard deadlines")
{
	CostFn f;
	f.kind = CostKind::Tardiness;
	f.w = 2;
	f.d = 3;
	CHECK(cost_at(f, 5) == Cost(4));
	CHECK(cost_at(f, 3) == Cost(0));
	CostFn h;
	h.kind = CostKind::Deadline;
	h.d = 4;
	CHECK(cost_at(h, 5).inf);
	CHECK(cost_at(h, 4) == Cost(0));
}

TEST_CASE("cost_at rejects times before the domain start")
{
	CostFn f;
	f.start = 3;
	CHECK_THROWS_AS(cost_at(f, 2), std::domain_error);
}

TEST_CASE("time_for_cost inverts the value oracle")
{
	CostFn f;
	f.kind = CostKind::Tardiness;
	f.w = 2;
	f.d = 3;
	CHECK(time_for_cost(f, Cost(4)) == 5);
	CHECK(time_for_cost(f, Cost(0)) == 0);
	CostFn s;
	s.kind = CostKind::Step;
	s.steps = {{0, Cost(0)}, {4, Cost(7)}};
	CHECK(time_for_cost(s, Cost(5)) == 4);
	CHECK(time_for_cost(s, Cost(8)) == kNever);
	CostFn c;
	c.kind = CostKind::Completion;
	c.w = 3;
	c.start = 2;
	for (i64 t = 2; t < 20; ++t)
		CHECK(time_for_cost(c, cost_at(c, t)) <= t);
}

TEST_CASE("deadline condition examples")
{
	GspInstance g;
	g.jobs = {tard_job(0, 0, 2, 0, 0), tard_job(1, 0, 1, 0, 0)};
	CHECK_FALSE(deadline_feasible(g, {2, 2}));
	g.jobs[1].r = 1;
	CHECK(deadline_feasible(g, {4, 2}));
	GspInstance one;
	one.jobs = {tard_job(0, 0, 1, 0, 0)};
	CHECK(deadline_feasible(one, {1}));
}

TEST_CASE("edf schedule follows the deadline order")
{
	GspInstance g;
	g.jobs = {tard_job(0, 0, 2, 0, 0), tard_job(1, 1, 1, 0, 0)};
	auto s = edf_schedule(g, {4, 2});
	REQUIRE(s.has_value());
	REQUIRE(s->segments.size() == 3);
	CHECK(s->segments[0].job == 0);
	CHECK(s->segments[0].start == 0);
	CHECK(s->segments[0].end == 1);
	CHECK(s->segments[1].job == 1);
	CHECK(s->segments[1].end == 2);
	CHECK(s->segments[2].job == 0);
	CHECK(s->segments[2].end == 3);
	CHECK(s->completions == std::vector<i64>{3, 2});
	CHECK(validate_schedule(g, *s).empty());
	g.jobs[1].r = 0;
	CHECK_FALSE(edf_schedule(g, {2, 2}).has_value());
	GspInstance one;
	one.jobs = {tard_job(0, 0, 1, 0, 0)};
	auto s1 = edf_schedule(one, {1});
	REQUIRE(s1.has_value());
	CHECK(s1->completions[0] == 1);
}

TEST_CASE("total cost of G1")
{
	GspInstance g = g1();
	CHECK(total_cost(g, {3, 2}) == Cost(3));
	CHECK(total_cost(g, {2, 3}) == Cost(4));
	CHECK(total_cost(g, {2, 1 + 1}) == Cost(2));
	auto opt = brute_force_gsp(g);
	CHECK(opt.feasible);
	CHECK(opt.cost == Cost(3));
}

TEST_CASE("horizon and piece splitting")
{
	CHECK(horizon(g1()) == 8);
	GspInstance one;
	one.jobs = {tard_job(0, 0, 1, 1, 0)};
	CHECK(horizon(one) == 2);
	GspInstance gap;
	gap.jobs = {tard_job(0, 0, 1, 1, 0), tard_job(1, 10, 1, 1, 10)};
	auto pieces = split_pieces(gap);
	REQUIRE(pieces.size() == 2);
	CHECK(pieces[0] == std::vector<int>{0});
	CHECK(pieces[1] == std::vector<int>{1});
	CHECK(split_pieces(g1()).size() == 1);
}

TEST_CASE("validation reports and normalizes")
{
	GspInstance g = g1();
	CHECK(validate_gsp(g).ok());
	GspInstance bad;
	bad.jobs = {tard_job(0, 0, 0, 1, 0)};
	auto d = validate_gsp(bad);
	REQUIRE_FALSE(d.ok());
	CHECK(d.violations[0].find("processing time must be positive") != std::string::npos);
	GspInstance late;
	late.jobs = {tard_job(0, 5, 1, 2, 3)};
	auto dl = validate_gsp(late);
	CHECK(dl.ok());
	CHECK(dl.warnings.size() == 1);
	CHECK(late.cost_offset == 4);
	CHECK(late.jobs[0].fn.d == 5);
	CHECK(cost_at(late.jobs[0].fn, 7) == Cost(4));
}

TEST_CASE("normalization keeps the original objective through the offset")
{
	GspInstance g;
	Job a;
	a.id = 0;
	a.r = 3;
	a.p = 1;
	a.fn.kind = CostKind::Completion;
	a.fn.w = 2;
	Job b;
	b.id = 1;
	b.r = 1;
	b.p = 2;
	b.fn.kind = CostKind::Step;
	b.fn.steps = {{0, Cost(1)}, {5, Cost(Q(7, 2))}};
	g.jobs = {a, b};
	GspInstance raw = g;
	for (Job& j : raw.jobs)
		j.fn.start = j.r;
	CHECK(validate_gsp(g).ok());
	for (i64 ca = 4; ca < 10; ++ca)
		for (i64 cb = 3; cb < 10; ++cb) {
			Cost lhs = total_cost(g, {ca, cb}) + Cost(g.cost_offset);
			Cost rhs = raw_cost(raw.jobs[0].fn, ca) + raw_cost(raw.jobs[1].fn, cb);
			CHECK(lhs == rhs);
		}
}

TEST_CASE("hard deadline in the past is a violation")
{
	GspInstance g;
	Job a;
	a.id = 0;
	a.r = 5;
	a.p = 1;
	a.fn.kind = CostKind::Deadline;
	a.fn.d = 3;
	g.jobs = {a};
	CHECK_FALSE(validate_gsp(g).ok());
}
