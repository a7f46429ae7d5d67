#include "doctest.h"
#include "gspkit/milestones.hpp"

using namespace gspkit;

static Job make(CostKind k, i64 r, i64 p, i64 w, i64 d)
{
	GspInstance g;
	Job j;
	j.id = 0;
	j.r = r;
	j.p = p;
	j.fn.kind = k;
	j.fn.w = w;
	j.fn.d = d;
	g.jobs = {j};
	validate_gsp(g);
	return g.jobs[0];
}

TEST_CASE("general milestones follow the maximal-time rule")
{
	Job j = make(CostKind::Tardiness, 0, 1, 1, 0);
	auto ms = build_milestones(j, Q(1), 16);
	CHECK(ms.m == std::vector<i64>{0, 2, 6, 14, 16});
	CHECK(check_milestones(j, ms, Q(1), 16, false).empty());
}

TEST_CASE("hard deadline milestones jump to the horizon")
{
	Job j = make(CostKind::Deadline, 0, 1, 0, 5);
	for (Q eps : {Q(1), Q(1, 2), Q(1, 4)}) {
		auto ms = build_milestones(j, eps, 16);
		CHECK(ms.m == std::vector<i64>{0, 5, 16});
		CHECK(check_milestones(j, ms, eps, 16, false).empty());
	}
}

TEST_CASE("zero cost milestones")
{
	Job j = make(CostKind::Completion, 3, 1, 0, 0);
	auto ms = build_milestones(j, Q(1, 2), 8);
	CHECK(ms.m == std::vector<i64>{3, 8});
}

TEST_CASE("tardiness milestones on the absolute grid")
{
	Job j = make(CostKind::Tardiness, 0, 1, 1, 0);
	auto ms = build_milestones_tardiness(j, Q(1, 2), 16);
	CHECK(ms.m == std::vector<i64>{0, 0, 1, 2, 3, 4, 6, 8, 12, 16});
	CHECK(check_milestones(j, ms, Q(1, 2), 16, true).empty());
	Job k = make(CostKind::Tardiness, 0, 1, 3, 5);
	auto mk = build_milestones_tardiness(k, Q(1, 2), 16);
	CHECK(mk.m == std::vector<i64>{0, 5, 6, 7, 8, 9, 11, 13, 16});
	CHECK(check_milestones(k, mk, Q(1, 2), 16, true).empty());
	auto wide = build_milestones_tardiness(k, Q(1, 2), 64);
	CHECK(wide.m == std::vector<i64>{0, 5, 6, 7, 8, 9, 11, 13, 16, 20, 24, 32, 40, 56, 64});
	CHECK(check_milestones(k, wide, Q(1, 2), 64, true).empty());
	Job due = make(CostKind::Tardiness, 1, 1, 2, 16);
	auto md = build_milestones_tardiness(due, Q(1, 2), 16);
	CHECK(md.m == std::vector<i64>{1, 16});
	CHECK(md.f() == 1);
}

TEST_CASE("tau sequences")
{
	Job j = make(CostKind::Completion, 0, 1, 1, 0);
	Milestones ms;
	for (i64 i = 0; i <= 25; ++i)
		ms.m.push_back(100 + i);
	CHECK(build_tau(j, ms, 3, Q(1, 2)) == std::vector<int>{1, 11, 19});
	Job s;
	s.fn.kind = CostKind::Step;
	s.fn.steps = {{0, Cost(1)}, {105, Cost(2)}, {106, Cost(100)}};
	CHECK(build_tau(s, ms, 3, Q(1, 2)) == std::vector<int>{1, 5, 11, 19});
	Milestones small;
	small.m = {0, 1, 2, 3, 4, 5};
	CHECK(build_tau(j, small, 1, Q(1)) == std::vector<int>{1, 2, 3, 4});
}
