#include "gspkit/base_dp.hpp"
#include "gspkit/bench.hpp"
#include "gspkit/gen.hpp"
#include "gspkit/io.hpp"
#include "gspkit/pipeline.hpp"
#include "gspkit/svg.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>

using namespace gspkit;

namespace {

/** \brief Process exit codes. */
enum Exit : int { kOk = 0, kVerifyFailed = 1, kInfeasible = 2, kBudget = 3 };

void emit(const std::string& path, const std::string& text)
{
	if (path.empty() || path == "-")
		std::cout << text;
	else
		write_text_file(path, text);
}

void emit_json(const std::string& path, const json& j) { emit(path, j.dump(2) + "\n"); }

Q arg_q(const std::string& s, const char* flag)
{
	try {
		Q q = parse_q(s);
		if (q <= 0)
			throw std::invalid_argument("must be positive");
		return q;
	} catch (const std::exception& e) {
		throw IoError(std::string(flag) + ": " + e.what());
	}
}

const std::map<std::string, BackEnd> kBackends{{"exact", BackEnd::Exact},
                                               {"approx-oracle", BackEnd::ApproxOracle},
                                               {"approx-exhaustive", BackEnd::ApproxExhaustive},
                                               {"tardiness", BackEnd::Tardiness}};

/** \brief Parses "completion=2,tardiness=1" into a kind mix. */
std::array<i64, 6> parse_mix(const std::string& s)
{
	std::array<i64, 6> m{};
	std::stringstream ss(s);
	std::string item;
	while (std::getline(ss, item, ',')) {
		auto eq = item.find('=');
		std::string name = item.substr(0, eq);
		auto k = kind_from_name(name);
		if (!k)
			throw IoError("--mix: unknown cost kind '" + name + "'");
		m[static_cast<std::size_t>(*k)] = eq == std::string::npos ? 1 : std::stol(item.substr(eq + 1));
	}
	return m;
}

struct GenArgs {
	int n = 4;
	i64 p_max = 3, r_max = 3, w_min = 0, w_max = 3, d_slack = 6;
	int steps = 2;
	std::string objective = "mixed";
	std::string mix;
	std::uint64_t seed = 1;

	void add(CLI::App* c)
	{
		c->add_option("--n", n, "number of jobs")->check(CLI::NonNegativeNumber);
		c->add_option("--p-max", p_max, "largest processing time")->check(CLI::PositiveNumber);
		c->add_option("--r-max", r_max, "largest release time")->check(CLI::NonNegativeNumber);
		c->add_option("--w-min", w_min, "smallest weight")->check(CLI::NonNegativeNumber);
		c->add_option("--w-max", w_max, "largest weight")->check(CLI::NonNegativeNumber);
		c->add_option("--d-slack", d_slack, "largest due-date slack after the release")->check(CLI::NonNegativeNumber);
		c->add_option("--steps", steps, "breakpoints per step cost function")->check(CLI::NonNegativeNumber);
		c->add_option("--objective", objective, "a single cost kind, or 'mixed'");
		c->add_option("--mix", mix, "per-kind weights, e.g. completion=2,tardiness=1");
		c->add_option("--seed", seed, "64-bit seed");
	}

	GenSpec spec() const
	{
		GenSpec g;
		g.n = n;
		g.p_max = p_max;
		g.r_max = r_max;
		g.w_min = w_min;
		g.w_max = std::max(w_min, w_max);
		g.d_slack = d_slack;
		g.steps = steps;
		g.seed = seed;
		if (!mix.empty()) {
			g.mix = parse_mix(mix);
		} else if (objective != "mixed") {
			auto k = kind_from_name(objective);
			if (!k)
				throw IoError("--objective: unknown cost kind '" + objective + "'");
			g.mix = only_kind(*k);
		}
		return g;
	}
};

GspInstance read_gsp(const std::string& path) { return gsp_from_json(read_json_file(path)); }
RcpInstance read_rcp(const std::string& path) { return rcp_from_json(read_json_file(path)); }

int cmd_solve(const std::string& in, const std::string& eps, std::string backend, const std::string& objective,
              std::size_t node_limit, std::size_t cap_guesses, int cap_depth, const std::string& out,
              const std::string& report)
{
	GspSolveOptions o;
	o.eps = arg_q(eps, "--epsilon");
	if (objective == "tardiness")
		backend = "tardiness";
	o.backend = kBackends.at(backend);
	o.node_limit = node_limit;
	o.cap_guesses = cap_guesses;
	o.cap_depth = cap_depth;
	GspSolveResult r = solve_gsp(read_gsp(in), o);
	if (!report.empty())
		write_json_file(report, gsp_result_to_json(r));
	for (const std::string& n : r.notes)
		std::cerr << "note: " << n << "\n";
	if (!r.feasible) {
		std::cerr << "infeasible\n";
		return kInfeasible;
	}
	emit_json(out, schedule_to_json(r.schedule, r.cost));
	std::cerr << "cost " << cost_str(r.cost) << " (with removed constant " << cost_str(r.raw_cost) << ")"
	          << (r.certificates_ok ? "" : " certificates FAILED") << "\n";
	return r.certificates_ok ? kOk : kVerifyFailed;
}

int cmd_reduce(const std::string& in, const std::string& eps_s, i64 S, const std::string& objective,
               const std::string& out, const std::string& map)
{
	GspInstance g = read_gsp(in);
	Diagnostics dg = validate_gsp(g);
	if (!dg.ok())
		throw IoError(in + ": " + dg.violations.front());
	const Q eps = arg_q(eps_s, "--epsilon");
	const bool grid = objective == "tardiness";
	if (grid && !is_dyadic_unit(eps))
		throw IoError("--epsilon: tardiness milestones need eps = 2^-k");
	if (S < 1 || S > offset_count(eps))
		throw IoError("--offset: must lie in 1.." + std::to_string(offset_count(eps)));
	const i64 T = horizon(g);
	auto ms = all_milestones(g, eps, T, grid);
	auto [rcp, vm] = build_rcp(g, ms, all_taus(g, ms, S, eps), eps, T);
	if (!map.empty())
		write_json_file(map, varmap_to_json(vm));
	emit_json(out, rcp_to_json(rcp));
	if (vm.infeasible) {
		std::cerr << "infeasible: " << vm.reason << "\n";
		return kInfeasible;
	}
	return kOk;
}

int cmd_lift(const std::string& in, const std::string& map, const std::string& sel_path, const std::string& out)
{
	GspInstance g = read_gsp(in);
	validate_gsp(g);
	VarMap vm = varmap_from_json(read_json_file(map));
	Selection sel = selection_from_json(read_json_file(sel_path));
	auto C = selection_to_completions(vm, sel);
	auto sch = edf_schedule(g, C);
	if (!sch) {
		std::cerr << "lifted completion times are not deadline feasible\n";
		return kInfeasible;
	}
	emit_json(out, schedule_to_json(*sch, total_cost(g, sch->completions)));
	return kOk;
}

struct RcpArgs {
	std::string input;
	std::string mode = "brute";
	std::string eps = "1/4";
	std::string delta;
	std::size_t budget = 5000000;
	std::optional<std::uint64_t> seed;
	std::string reference;
	std::size_t cap_guesses = 100000;
	int cap_depth = 6;
	i64 strip = 0;
	std::string guesses = "oracle";
	std::string out, report;
};

int cmd_rcp_solve(const RcpArgs& a)
{
	RcpInstance in;
	if (!a.input.empty()) {
		in = read_rcp(a.input);
	} else if (a.seed) {
		RcpGenSpec gs;
		gs.seed = *a.seed;
		in = gen_rcp(gs);
	} else {
		throw IoError("rcp solve: give an instance file or --seed");
	}
	RcpDiagnostics dg = validate_rcp(in);
	if (!dg.ok())
		throw IoError("instance: " + dg.violations.front());
	const Q eps = arg_q(a.eps, "--epsilon");
	json rep{{"mode", a.mode}, {"epsilon", q_str(eps)}};
	RcpResult r;
	auto reference = [&]() -> std::optional<Selection> {
		if (!a.reference.empty())
			return selection_from_json(read_json_file(a.reference));
		RcpResult e = solve_exact(in, std::nullopt, a.budget);
		return e.feasible ? std::optional<Selection>(e.sel) : std::nullopt;
	};
	bool certs = true;
	if (a.mode == "brute") {
		r = brute_force(in, a.budget);
	} else if (a.mode == "dp") {
		r = base_case_dp(Subproblem{a.strip, a.strip + 1, in});
	} else if (a.mode == "approx-oracle" || a.mode == "approx-exhaustive") {
		ApproxOptions o;
		o.params = params_for(in, eps);
		o.cap_guesses = a.cap_guesses;
		o.cap_depth = a.cap_depth;
		std::optional<Selection> ref;
		if (a.mode == "approx-oracle") {
			ref = reference();
			if (!ref) {
				std::cerr << "infeasible: no feasible reference selection\n";
				return kInfeasible;
			}
		} else {
			o.mode = ApproxMode::Exhaustive;
		}
		ApproxReport ar;
		r = solve_rcp_recursive(in, o, ref, &ar);
		rep["certificates"] = approx_report_to_json(ar);
		certs = ar.ok();
	} else {
		TardinessOptions o;
		o.eps = eps;
		o.mode = a.guesses == "exhaustive" ? ApproxMode::Exhaustive : ApproxMode::Oracle;
		o.cap_guesses = a.cap_guesses;
		o.cap_depth = a.cap_depth;
		const Q delta = a.delta.empty() ? eps / 32 : arg_q(a.delta, "--delta");
		auto ws = check_well_structured(in, delta);
		rep["well_structured"] = ws.empty();
		rep["delta"] = q_str(delta);
		if (!ws.empty())
			std::cerr << "warning: " << ws.front() << "\n";
		TardinessReport tr;
		if (!a.reference.empty()) {
			r = solve_tardiness(in, o, reference(), &tr);
		} else {
			r = solve_tardiness_preprocessed(
			    in, o,
			    [&](const RcpInstance& x) -> std::optional<Selection> {
				    RcpResult e = solve_exact(x, std::nullopt, a.budget);
				    return e.feasible ? std::optional<Selection>(e.sel) : std::nullopt;
			    },
			    &tr);
		}
		rep["certificates"] = tardiness_report_to_json(tr);
		certs = tr.ok();
	}
	rep["result"] = result_to_json(r);
	if (!a.report.empty())
		write_json_file(a.report, rep);
	if (!r.feasible) {
		std::cerr << "infeasible\n";
		return kInfeasible;
	}
	emit_json(a.out, json(r.sel));
	std::cerr << "cost " << q_str(r.cost) << (certs ? "" : " certificates FAILED") << "\n";
	return certs ? kOk : kVerifyFailed;
}

int cmd_verify(const std::string& inst_path, const std::string& sol_path)
{
	json ij = read_json_file(inst_path);
	json sj = read_json_file(sol_path);
	std::vector<std::string> errs;
	if (ij.is_object() && ij.contains("rows")) {
		RcpInstance in = rcp_from_json(ij);
		for (const std::string& v : validate_rcp(in).violations)
			errs.push_back("instance: " + v);
		Selection sel = selection_from_json(sj);
		std::string pv = prefix_violation(in, sel);
		if (!pv.empty())
			errs.push_back(pv);
		for (const Ray& l : in.rays) {
			i64 cov = coverage(in, sel, l);
			if (cov < l.d)
				errs.push_back("ray (s=" + std::to_string(l.s) + ", t=" + std::to_string(l.t) + ") covered " +
				               std::to_string(cov) + " of demand " + std::to_string(l.d));
		}
		if (errs.empty())
			std::cout << "ok: feasible selection of cost " << q_str(selection_cost(in, sel)) << "\n";
	} else {
		GspInstance g = gsp_from_json(ij);
		Diagnostics dg = validate_gsp(g);
		errs = dg.violations;
		Schedule s = schedule_from_json(sj);
		if (errs.empty())
			errs = validate_schedule(g, s);
		if (errs.empty()) {
			Cost c = total_cost(g, s.completions);
			if (c.inf)
				errs.push_back("schedule misses a hard deadline");
			else
				std::cout << "ok: valid schedule of cost " << cost_str(c) << "\n";
		}
	}
	for (const std::string& e : errs)
		std::cout << "violation: " << e << "\n";
	return errs.empty() ? kOk : kVerifyFailed;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"gspkit: preemptive single-machine scheduling via rectangle covering"};
	app.require_subcommand(1);

	GenArgs gen;
	std::string gen_out;
	auto* c_gen = app.add_subcommand("gen", "generate a random GSP instance");
	gen.add(c_gen);
	c_gen->add_option("-o,--out", gen_out, "output file (default stdout)");

	std::string s_in, s_eps = "1/2", s_backend = "exact", s_obj, s_out, s_report;
	std::size_t s_nodes = 0, s_caps = 100000;
	int s_depth = 6;
	auto* c_solve = app.add_subcommand("solve", "solve a GSP instance end to end");
	c_solve->add_option("instance", s_in, "GSP instance JSON")->required();
	c_solve->add_option("--epsilon", s_eps, "accuracy eps = 1/k (2^-k for tardiness)");
	c_solve->add_option("--backend", s_backend, "RCP back end")
	    ->check(CLI::IsMember({"exact", "approx-oracle", "approx-exhaustive", "tardiness"}));
	c_solve->add_option("--objective", s_obj, "'tardiness' selects the weighted-tardiness algorithm")
	    ->check(CLI::IsMember({"tardiness", "general"}));
	c_solve->add_option("--node-limit", s_nodes, "node limit of the exact RCP solver (0 = none)");
	c_solve->add_option("--cap-guesses", s_caps, "guess cap of the exhaustive modes");
	c_solve->add_option("--cap-depth", s_depth, "depth cap of the exhaustive modes");
	c_solve->add_option("-o,--out", s_out, "schedule output (default stdout)");
	c_solve->add_option("--report", s_report, "report JSON with per-run certificates");

	std::string r_in, r_eps = "1/2", r_obj, r_out, r_map;
	i64 r_offset = 1;
	auto* c_reduce = app.add_subcommand("reduce", "build the RCP instance of a GSP instance for one offset");
	c_reduce->add_option("instance", r_in, "GSP instance JSON")->required();
	c_reduce->add_option("--epsilon", r_eps, "accuracy eps = 1/k");
	c_reduce->add_option("--offset", r_offset, "block offset S in 1..(1/eps)^3");
	c_reduce->add_option("--objective", r_obj, "'tardiness' uses the grid-aligned milestones")
	    ->check(CLI::IsMember({"tardiness", "general"}));
	c_reduce->add_option("-o,--out", r_out, "RCP output (default stdout)");
	c_reduce->add_option("--map", r_map, "variable-map sidecar output");

	std::string l_in, l_map, l_sel, l_out;
	auto* c_lift = app.add_subcommand("lift", "map an RCP selection back to a schedule");
	c_lift->add_option("instance", l_in, "GSP instance JSON")->required();
	c_lift->add_option("map", l_map, "variable-map sidecar written by reduce")->required();
	c_lift->add_option("selection", l_sel, "selection JSON")->required();
	c_lift->add_option("-o,--out", l_out, "schedule output (default stdout)");

	RcpArgs ra;
	std::uint64_t ra_seed = 0;
	auto* c_rcp = app.add_subcommand("rcp", "rectangle covering tools");
	c_rcp->require_subcommand(1);
	auto* c_rsolve = c_rcp->add_subcommand("solve", "solve an RCP instance");
	c_rsolve->add_option("instance", ra.input, "RCP instance JSON");
	c_rsolve->add_option("--mode", ra.mode, "solver")
	    ->check(CLI::IsMember({"brute", "dp", "approx-oracle", "approx-exhaustive", "tardiness"}));
	c_rsolve->add_option("--epsilon", ra.eps, "accuracy parameter");
	c_rsolve->add_option("--delta", ra.delta, "grid parameter of the well-structured check (default eps/32)");
	c_rsolve->add_option("--budget", ra.budget, "brute-force and exact-reference budget");
	auto* seed_opt = c_rsolve->add_option("--seed", ra_seed, "generate a random instance instead of reading one");
	c_rsolve->add_option("--reference", ra.reference, "reference selection for the oracle modes");
	c_rsolve->add_option("--cap-guesses", ra.cap_guesses, "guess cap of exhaustive mode");
	c_rsolve->add_option("--cap-depth", ra.cap_depth, "depth cap of exhaustive mode");
	c_rsolve->add_option("--strip", ra.strip, "left end of the width-1 strip used by dp");
	c_rsolve->add_option("--guesses", ra.guesses, "guess realization of tardiness mode")
	    ->check(CLI::IsMember({"oracle", "exhaustive"}));
	c_rsolve->add_option("-o,--out", ra.out, "selection output (default stdout)");
	c_rsolve->add_option("--report", ra.report, "report JSON");

	std::string v_in, v_sol;
	auto* c_verify = app.add_subcommand("verify", "check a selection or a schedule");
	c_verify->add_option("instance", v_in, "RCP or GSP instance JSON")->required();
	c_verify->add_option("solution", v_sol, "selection or schedule JSON")->required();

	GenArgs bgen;
	BenchConfig bc;
	std::string b_eps = "1/2", b_json, b_csv, b_modes = "exact,approx-oracle,approx-exhaustive,tardiness";
	auto* c_bench = app.add_subcommand("bench", "benchmark all back ends on generated instances");
	bgen.add(c_bench);
	c_bench->add_option("--count", bc.count, "number of instances")->check(CLI::NonNegativeNumber);
	c_bench->add_option("--epsilon", b_eps, "accuracy eps = 1/k");
	c_bench->add_option("--modes", b_modes, "comma-separated back ends");
	c_bench->add_option("--brute-budget", bc.brute_budget, "largest search space of the exhaustive optimum");
	c_bench->add_option("--cap-guesses", bc.cap_guesses, "guess cap of the exhaustive modes");
	c_bench->add_option("--cap-depth", bc.cap_depth, "depth cap of the exhaustive modes");
	c_bench->add_option("--json", b_json, "JSON report output");
	c_bench->add_option("--csv", b_csv, "CSV report output (default stdout)");

	std::string d_in, d_sel, d_out;
	auto* c_render = app.add_subcommand("render", "draw an RCP instance as SVG");
	c_render->add_option("instance", d_in, "RCP instance JSON")->required();
	c_render->add_option("--selection", d_sel, "selection to shade");
	c_render->add_option("-o,--out", d_out, "SVG output (default stdout)");

	CLI11_PARSE(app, argc, argv);

	try {
		if (c_gen->parsed()) {
			emit_json(gen_out, gsp_to_json(gen_instance(gen.spec())));
			return kOk;
		}
		if (c_solve->parsed())
			return cmd_solve(s_in, s_eps, s_backend, s_obj, s_nodes, s_caps, s_depth, s_out, s_report);
		if (c_reduce->parsed())
			return cmd_reduce(r_in, r_eps, r_offset, r_obj, r_out, r_map);
		if (c_lift->parsed())
			return cmd_lift(l_in, l_map, l_sel, l_out);
		if (c_rsolve->parsed()) {
			if (seed_opt->count() > 0)
				ra.seed = ra_seed;
			return cmd_rcp_solve(ra);
		}
		if (c_verify->parsed())
			return cmd_verify(v_in, v_sol);
		if (c_bench->parsed()) {
			bc.gen = bgen.spec();
			bc.eps = arg_q(b_eps, "--epsilon");
			bc.threads = thread_count();
			bc.modes.clear();
			std::stringstream ss(b_modes);
			for (std::string m; std::getline(ss, m, ',');) {
				if (!kBackends.count(m))
					throw IoError("--modes: unknown back end '" + m + "'");
				bc.modes.push_back(kBackends.at(m));
			}
			BenchReport rep = run_bench(bc);
			if (!b_json.empty())
				write_json_file(b_json, bench_json(rep));
			emit(b_csv, bench_csv(rep));
			return rep.ok() ? kOk : kVerifyFailed;
		}
		if (c_render->parsed()) {
			RcpInstance in = read_rcp(d_in);
			std::optional<Selection> sel;
			if (!d_sel.empty())
				sel = selection_from_json(read_json_file(d_sel));
			emit(d_out, render_svg(in, sel));
			return kOk;
		}
	} catch (const CapsExhausted& e) {
		std::cerr << "caps exhausted: " << e.what() << "\n";
		return kBudget;
	} catch (const BudgetExceeded& e) {
		std::cerr << "budget exhausted: " << e.what() << "\n";
		return kBudget;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << "\n";
		return kVerifyFailed;
	}
	return kOk;
}
