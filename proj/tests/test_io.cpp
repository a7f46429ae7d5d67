#include "doctest.h"
#include "gspkit/bench.hpp"
#include "gspkit/gen.hpp"
#include "gspkit/io.hpp"
#include "gspkit/svg.hpp"

#include <regex>

using namespace gspkit;

static RcpInstance r1()
{
	RcpInstance in;
	in.rows = {Row{0, {Rect{0, 0, 2, 1, 3}, Rect{1, 2, 4, 1, 3}}}, Row{1, {Rect{2, 1, 3, 2, 2}}}};
	in.rays = {Ray{1, 2, 5}};
	return in;
}

static std::size_t count(const std::string& text, const std::string& needle)
{
	std::size_t n = 0;
	for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
		++n;
	return n;
}

TEST_CASE("GSP instances round-trip through JSON")
{
	GenSpec gs;
	gs.n = 12;
	gs.seed = 5;
	GspInstance g = gen_instance(gs);
	g.jobs[0].fn.kind = CostKind::Step;
	g.jobs[0].fn.steps = {{3, Cost(Q(1, 2))}, {6, Cost::infinity()}};
	const std::string text = gsp_to_json(g).dump();
	GspInstance back = gsp_from_json(parse_json_text(text));
	CHECK(gsp_to_json(back).dump() == text);
	REQUIRE(back.jobs.size() == 12);
	CHECK(back.jobs[0].fn.steps[0].second == Cost(Q(1, 2)));
	CHECK(back.jobs[0].fn.steps[1].second.inf);
}

TEST_CASE("RCP instances, selections and schedules round-trip through JSON")
{
	RcpInstance in = r1();
	json j = rcp_to_json(in);
	CHECK(j["rows"][1]["rects"][0]["c"] == "2");
	RcpInstance back = rcp_from_json(j);
	CHECK(rcp_to_json(back) == j);
	CHECK(selection_from_json(parse_json_text("[2, 0, 1]")) == Selection{0, 1, 2});
	CHECK(selection_from_json(result_to_json(RcpResult{true, {0, 1, 2}, 4})) == Selection{0, 1, 2});

	Schedule s{{Segment{0, 0, 2}, Segment{1, 2, 3}}, {2, 3}};
	Schedule sb = schedule_from_json(schedule_to_json(s, Cost(7)));
	CHECK(sb.completions == s.completions);
	REQUIRE(sb.segments.size() == 2);
	CHECK(sb.segments[1].start == 2);
}

TEST_CASE("rational fields accept integers and fractions")
{
	RcpInstance in = rcp_from_json(
	    parse_json_text(R"({"rows":[{"j":0,"rects":[{"a":0,"b":1,"c":"3/6","p":1},{"a":1,"b":2,"c":2,"p":1}]}]})"));
	CHECK(in.rows[0].rects[0].c == Q(1, 2));
	CHECK(in.rows[0].rects[1].c == 2);
	CHECK(in.rows[0].rects[1].id == 1);
	CHECK(in.rays.empty());
}

TEST_CASE("variable maps round-trip and still lift selections")
{
	GspInstance g;
	Job a;
	a.id = 0;
	a.p = 2;
	a.fn.kind = CostKind::Tardiness;
	a.fn.w = 1;
	a.fn.d = 2;
	Job b = a;
	b.id = 1;
	b.r = 1;
	b.p = 1;
	b.fn.w = 2;
	b.fn.d = 1;
	g.jobs = {a, b};
	validate_gsp(g);
	const Q eps(1, 2);
	const i64 T = horizon(g);
	auto ms = all_milestones(g, eps, T, false);
	auto [rcp, vm] = build_rcp(g, ms, all_taus(g, ms, 1, eps), eps, T);
	VarMap back = varmap_from_json(parse_json_text(varmap_to_json(vm).dump()));
	CHECK(varmap_to_json(back) == varmap_to_json(vm));
	RcpResult opt = brute_force(rcp_from_json(rcp_to_json(rcp)));
	REQUIRE(opt.feasible);
	CHECK(selection_to_completions(back, opt.sel) == selection_to_completions(vm, opt.sel));
}

TEST_CASE("malformed input reports its location")
{
	try {
		parse_json_text("{\n  \"jobs\": [ ,\n]}", "bad.json");
		FAIL("no exception");
	} catch (const IoError& e) {
		CHECK(std::string(e.what()).rfind("bad.json:2:", 0) == 0);
	}
	try {
		gsp_from_json(parse_json_text(R"({"jobs":[{"id":0,"r":0,"cost":{"kind":"completion"}}]})"));
		FAIL("no exception");
	} catch (const IoError& e) {
		CHECK(std::string(e.what()).find("$.jobs[0]: missing field 'p'") != std::string::npos);
	}
	try {
		rcp_from_json(parse_json_text(R"({"rows":[{"j":0,"rects":[{"a":0,"b":1,"c":"x","p":1}]}]})"));
		FAIL("no exception");
	} catch (const IoError& e) {
		CHECK(std::string(e.what()).find("$.rows[0].rects[0].c") != std::string::npos);
	}
	CHECK_THROWS_AS(gsp_from_json(parse_json_text(R"({"jobs":[{"id":0,"r":0,"p":1,"cost":{"kind":"nope"}}]})")),
	                IoError);
}

TEST_CASE("SVG rendering")
{
	const std::string plain = render_svg(r1());
	CHECK(count(plain, "class=\"box") == 3);
	CHECK(count(plain, "class=\"box selected\"") == 0);
	CHECK(count(plain, "class=\"ray\"") == 1);
	const std::string shaded = render_svg(r1(), Selection{0, 1, 2});
	CHECK(count(shaded, "class=\"box selected\"") == 3);
	CHECK(render_svg(r1(), Selection{0, 1, 2}) == shaded);

	const std::string empty = render_svg(RcpInstance{});
	CHECK(count(empty, "class=\"axis\"") == 2);
	CHECK(count(empty, "class=\"box") == 0);
	CHECK(empty.rfind("<svg", 0) == 0);

	// The ray at t = 2 is drawn at x = 2.5 units right of the left margin.
	std::smatch m;
	REQUIRE(std::regex_search(plain, m, std::regex("<g class=\"ray\"><line x1=\"(\\d+)\"")));
	CHECK(std::stoi(m[1]) == 2 * kSvgUnit + 5 * kSvgUnit / 2);
}

TEST_CASE("instance generation is deterministic")
{
	GenSpec gs;
	gs.n = 2;
	gs.seed = 1;
	CHECK(gsp_to_json(gen_instance(gs)) == gsp_to_json(gen_instance(gs)));
	gs.seed = 2;
	gs.n = 30;
	gs.mix = only_kind(CostKind::Tardiness);
	for (const Job& j : gen_instance(gs).jobs)
		CHECK(j.fn.kind == CostKind::Tardiness);
	gs.mix = {1, 1, 1, 1, 1, 1};
	GspInstance g = gen_instance(gs);
	CHECK(validate_gsp(g).ok());
	gs.n = 0;
	CHECK(gen_instance(gs).jobs.empty());

	RcpGenSpec rs;
	rs.seed = 11;
	CHECK(rcp_to_json(gen_rcp(rs)) == rcp_to_json(gen_rcp(rs)));
	for (std::uint64_t s = 0; s < 50; ++s) {
		rs.seed = s;
		RcpInstance a = gen_rcp(rs);
		CHECK(validate_rcp(a).ok());
		CHECK(brute_force(a).feasible);
		RcpInstance w = gen_rcp_aligned(rs);
		CHECK(validate_rcp(w).ok());
		CHECK(check_well_structured(w, Q(1, 128)).empty());
	}
}

TEST_CASE("benchmark rows, budgets and determinism")
{
	BenchConfig cfg;
	cfg.gen.n = 3;
	cfg.gen.seed = 5;
	cfg.count = 10;
	cfg.threads = 4;
	BenchReport rep = run_bench(cfg);
	REQUIRE(rep.rows.size() == 10);
	CHECK(rep.ok());
	for (std::size_t k = 0; k < rep.rows.size(); ++k) {
		CHECK(rep.rows[k].instance == static_cast<int>(k));
		REQUIRE(rep.rows[k].optimum);
		for (const ModeOutcome& m : rep.rows[k].modes)
			if (m.ratio)
				CHECK(*m.ratio >= 1);
	}
	const std::string csv = bench_csv(rep);
	CHECK(count(csv, "\n") == 11);
	CHECK(csv.rfind(kBenchCsvHeader, 0) == 0);
	cfg.threads = 1;
	CHECK(bench_csv(run_bench(cfg)) == csv);

	cfg.brute_budget = 0;
	BenchReport blind = run_bench(cfg);
	CHECK(blind.ok());
	for (const BenchRow& r : blind.rows) {
		CHECK_FALSE(r.optimum);
		for (const ModeOutcome& m : r.modes)
			CHECK_FALSE(m.ratio);
	}
	CHECK(bench_json(blind)["rows"].size() == 10);
}
