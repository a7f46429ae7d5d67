#ifndef GSPKIT_PIPELINE_HPP
#define GSPKIT_PIPELINE_HPP

#include "gspkit/approx.hpp"
#include "gspkit/gsp.hpp"
#include "gspkit/milestones.hpp"
#include "gspkit/rcp.hpp"
#include "gspkit/reduction.hpp"
#include "gspkit/tardiness.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gspkit {

/** \brief RCP back end used by solve_gsp. */
enum class BackEnd { Exact, ApproxOracle, ApproxExhaustive, Tardiness };

inline const char* backend_name(BackEnd b)
{
	switch (b) {
	case BackEnd::Exact:
		return "exact";
	case BackEnd::ApproxOracle:
		return "approx-oracle";
	case BackEnd::ApproxExhaustive:
		return "approx-exhaustive";
	default:
		return "tardiness";
	}
}

struct GspSolveOptions {
	Q eps = Q(1, 2);
	BackEnd backend = BackEnd::Exact;
	std::size_t node_limit = 0;
	std::size_t cap_guesses = 100000;
	int cap_depth = 6;
};

/** \brief Summary of one RCP instance built and solved for one piece and offset. */
struct RcpRun {
	std::size_t piece = 0;
	i64 offset = 0;
	std::size_t rows = 0;
	std::size_t rects = 0;
	std::size_t rays = 0;
	bool feasible = false;
	Q rcp_cost = 0;
	Cost schedule_cost = Cost::infinity();
	bool certificates_ok = true;
	/** Node certificates of the approximation runs (all rounding guesses, in order). */
	ApproxReport approx;
	/** Node certificates and group ledgers of the tardiness runs. */
	TardinessReport tardiness;
};

struct GspSolveResult {
	bool feasible = false;
	std::vector<i64> completions;
	Schedule schedule;
	Cost cost = Cost::infinity();
	Cost raw_cost = Cost::infinity();
	std::vector<RcpRun> runs;
	bool certificates_ok = true;
	std::vector<std::string> notes;
};

/**
 * \brief Completion times of the preemptive list schedule that always runs the released
 * unfinished job of smallest key (ties by index).
 */
template <typename KeyFn>
inline std::vector<i64> priority_completions(const GspInstance& inst, KeyFn key)
{
	const std::size_t n = inst.jobs.size();
	std::vector<i64> left(n), C(n, 0);
	for (std::size_t j = 0; j < n; ++j)
		left[j] = inst.jobs[j].p;
	std::size_t done = 0;
	for (i64 t = 0; done < n; ++t) {
		std::size_t best = n;
		for (std::size_t j = 0; j < n; ++j)
			if (left[j] > 0 && inst.jobs[j].r <= t && (best == n || key(j) < key(best)))
				best = j;
		if (best == n)
			continue;
		if (--left[best] == 0) {
			C[best] = t + 1;
			++done;
		}
	}
	return C;
}

/** \brief A few list schedules used to seed the exact back end. */
inline std::vector<std::vector<i64>> heuristic_completions(const GspInstance& inst)
{
	auto due = [&](std::size_t j) {
		const CostFn& f = inst.jobs[j].fn;
		bool has_d = f.kind == CostKind::Tardiness || f.kind == CostKind::Tardy || f.kind == CostKind::Deadline;
		return has_d ? f.d : kNever;
	};
	std::vector<std::vector<i64>> out;
	out.push_back(priority_completions(inst, [&](std::size_t j) { return std::make_pair(due(j), j); }));
	out.push_back(priority_completions(inst, [&](std::size_t j) { return std::make_pair(inst.jobs[j].r, j); }));
	out.push_back(priority_completions(inst, [&](std::size_t j) { return std::make_pair(inst.jobs[j].p, j); }));
	out.push_back(priority_completions(inst, [&](std::size_t j) { return std::make_pair(-inst.jobs[j].fn.w, j); }));
	out.push_back(priority_completions(inst, [&](std::size_t j) {
		return std::make_pair(Q(inst.jobs[j].p) / (inst.jobs[j].fn.w + 1), j);
	}));
	return out;
}

namespace detail {

/** \brief Id of the costliest rectangle of a selection (ties by id), if any. */
inline std::optional<int> costliest(const RcpInstance& inst, const Selection& sel)
{
	std::set<int> s(sel.begin(), sel.end());
	std::optional<int> best;
	Q bc = -1;
	for (const Row& w : inst.rows)
		for (const Rect& r : w.rects)
			if (s.count(r.id) && (r.c > bc || (r.c == bc && best && r.id < *best))) {
				bc = r.c;
				best = r.id;
			}
	return best;
}

/**
 * \brief Cost rounding, strip compression and the recursive approximation, mapped back to the
 * original instance. `rmax` selects the rounding guess.
 */
inline RcpResult approx_via_rounding(const RcpInstance& in, const GspSolveOptions& opt, std::optional<int> rmax,
                                     const std::optional<Selection>& reference, bool& certs_ok, ApproxReport* out)
{
	RoundResult rr = round_costs(in, opt.eps, rmax);
	auto [cin, cm] = strip_compress(rr.inst);
	ApproxOptions ao;
	ao.params = params_for(cin, opt.eps);
	ao.mode = opt.backend == BackEnd::ApproxOracle ? ApproxMode::Oracle : ApproxMode::Exhaustive;
	ao.cap_guesses = opt.cap_guesses;
	ao.cap_depth = opt.cap_depth;
	std::optional<Selection> ref;
	if (reference)
		ref = restrict_to(Subproblem{0, 1, cin}, *reference);
	ApproxReport rep;
	RcpResult r;
	if (cin.rows.empty()) {
		r.feasible = is_feasible(cin, {});
	} else {
		r = solve_rcp_recursive(cin, ao, ref, &rep);
	}
	certs_ok = certs_ok && rep.ok();
	if (out) {
		out->nodes.insert(out->nodes.end(), rep.nodes.begin(), rep.nodes.end());
		out->candidates += rep.candidates;
	}
	if (!r.feasible)
		return r;
	Selection sel = r.sel;
	sel.insert(sel.end(), rr.forced.begin(), rr.forced.end());
	sel = prefix_closure(in, sel);
	if (!is_feasible(in, sel))
		return RcpResult{};
	return RcpResult{true, sel, selection_cost(in, sel)};
}

} // namespace detail

/**
 * \brief Solves one RCP instance of the reduction with the chosen back end; certificates of
 * the approximate back ends are appended to the optional reports.
 */
inline RcpResult solve_reduced_rcp(const RcpInstance& in, const std::optional<Selection>& incumbent,
                                   const GspSolveOptions& opt, bool& certs_ok, ApproxReport* arep = nullptr,
                                   TardinessReport* trep = nullptr)
{
	switch (opt.backend) {
	case BackEnd::Exact:
		return solve_exact(in, incumbent, opt.node_limit);
	case BackEnd::ApproxOracle: {
		RcpResult ref = solve_exact(in, incumbent, opt.node_limit);
		if (!ref.feasible)
			return ref;
		return detail::approx_via_rounding(in, opt, detail::costliest(in, ref.sel), ref.sel, certs_ok, arep);
	}
	case BackEnd::ApproxExhaustive: {
		RcpResult best = detail::approx_via_rounding(in, opt, std::nullopt, std::nullopt, certs_ok, arep);
		std::set<Q> seen;
		for (const Row& w : in.rows)
			for (const Rect& r : w.rects) {
				if (!seen.insert(r.c).second)
					continue;
				RcpResult c = detail::approx_via_rounding(in, opt, r.id, std::nullopt, certs_ok, arep);
				if (c.feasible && (!best.feasible || c.cost < best.cost))
					best = c;
			}
		return best;
	}
	default: {
		TardinessOptions to;
		to.eps = opt.eps;
		to.cap_guesses = opt.cap_guesses;
		to.cap_depth = opt.cap_depth;
		TardinessReport rep;
		RcpResult r = solve_tardiness_preprocessed(
		    in, to,
		    [&](const RcpInstance& x) -> std::optional<Selection> {
			    RcpResult e = solve_exact(x, std::nullopt, opt.node_limit);
			    return e.feasible ? std::optional<Selection>(e.sel) : std::nullopt;
		    },
		    &rep);
		certs_ok = certs_ok && rep.ok();
		if (trep) {
			trep->nodes.insert(trep->nodes.end(), rep.nodes.begin(), rep.nodes.end());
			trep->candidates += rep.candidates;
		}
		return r;
	}
	}
}

/**
 * \brief End-to-end GSP solver.
 *
 * The instance is normalized and split into independent pieces. For every piece and every
 * offset S in 1..(1/eps)^3 with a distinct block structure, the RCP instance is built, solved
 * with the chosen back end and lifted to completion times; the cheapest lift wins. The final
 * schedule is EDF on the combined completion times. Tardiness mode needs eps = 2^-k and only
 * weighted-tardiness jobs.
 */
inline GspSolveResult solve_gsp(GspInstance inst, const GspSolveOptions& opt)
{
	Diagnostics dg = validate_gsp(inst);
	if (!dg.ok())
		throw std::invalid_argument("invalid instance: " + dg.violations.front());
	const bool grid = opt.backend == BackEnd::Tardiness;
	if (grid) {
		if (!is_dyadic_unit(opt.eps))
			throw std::invalid_argument("tardiness mode needs eps = 2^-k");
		for (const Job& j : inst.jobs)
			if (j.fn.kind != CostKind::Tardiness)
				throw std::invalid_argument("tardiness mode needs weighted-tardiness jobs only");
	}
	GspSolveResult res;
	res.notes = dg.warnings;
	res.completions.assign(inst.jobs.size(), 0);
	const auto pieces = split_pieces(inst);
	for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
		GspInstance sub = sub_instance(inst, pieces[pi]);
		const i64 T = horizon(sub);
		auto ms = all_milestones(sub, opt.eps, T, grid);
		auto heur = heuristic_completions(sub);
		std::set<std::vector<std::vector<int>>> seen;
		std::optional<std::vector<i64>> best_c;
		Cost best_cost = Cost::infinity();
		for (i64 S = 1; S <= offset_count(opt.eps); ++S) {
			auto taus = all_taus(sub, ms, S, opt.eps);
			if (!seen.insert(taus).second)
				continue;
			auto [in, vm] = build_rcp(sub, ms, taus, opt.eps, T);
			RcpRun run;
			run.piece = pi;
			run.offset = S;
			run.rows = in.rows.size();
			run.rects = rect_count(in);
			run.rays = in.rays.size();
			if (vm.infeasible) {
				res.runs.push_back(run);
				continue;
			}
			std::optional<Selection> inc;
			for (const auto& C : heur) {
				if (!deadline_feasible(sub, C) || total_cost(sub, C).inf)
					continue;
				Selection s = completions_to_selection(vm, C);
				if (is_feasible(in, s) && (!inc || selection_cost(in, s) < selection_cost(in, *inc)))
					inc = s;
			}
			RcpResult r = solve_reduced_rcp(in, inc, opt, run.certificates_ok, &run.approx, &run.tardiness);
			res.certificates_ok = res.certificates_ok && run.certificates_ok;
			run.feasible = r.feasible;
			run.rcp_cost = r.cost;
			if (r.feasible) {
				auto C = selection_to_completions(vm, r.sel);
				if (deadline_feasible(sub, C)) {
					run.schedule_cost = total_cost(sub, C);
					if (!best_c || run.schedule_cost < best_cost) {
						best_c = C;
						best_cost = run.schedule_cost;
					}
				} else {
					res.notes.push_back("piece " + std::to_string(pi) + " offset " + std::to_string(S) +
					                    ": lifted completions violate the deadline condition");
					res.certificates_ok = false;
				}
			}
			res.runs.push_back(run);
		}
		if (!best_c || best_cost.inf)
			return res;
		for (std::size_t k = 0; k < pieces[pi].size(); ++k)
			res.completions[static_cast<std::size_t>(pieces[pi][k])] = (*best_c)[k];
	}
	auto sch = edf_schedule(inst, res.completions);
	if (!sch) {
		res.notes.push_back("combined completion times are not deadline feasible");
		return res;
	}
	res.schedule = *sch;
	res.completions = sch->completions;
	res.cost = total_cost(inst, res.completions);
	res.raw_cost = res.cost + Cost(inst.cost_offset);
	res.feasible = !res.cost.inf;
	return res;
}

} // namespace gspkit

#endif // GSPKIT_PIPELINE_HPP
