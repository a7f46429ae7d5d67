#ifndef GSPKIT_GSP_HPP
#define GSPKIT_GSP_HPP

#include "gspkit/rational.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gspkit {

/** \brief The supported families of completion-cost functions. */
enum class CostKind { Completion, Flow, Tardiness, Tardy, Deadline, Step };

inline const char* kind_name(CostKind k)
{
	switch (k) {
	case CostKind::Completion: return "completion";
	case CostKind::Flow: return "flow";
	case CostKind::Tardiness: return "tardiness";
	case CostKind::Tardy: return "tardy";
	case CostKind::Deadline: return "deadline";
	case CostKind::Step: return "step";
	}
	return "?";
}

inline std::optional<CostKind> kind_from_name(const std::string& s)
{
	if (s == "completion" || s == "weighted-completion")
		return CostKind::Completion;
	if (s == "flow" || s == "weighted-flow")
		return CostKind::Flow;
	if (s == "tardiness" || s == "weighted-tardiness")
		return CostKind::Tardiness;
	if (s == "tardy" || s == "weight-of-tardy")
		return CostKind::Tardy;
	if (s == "deadline" || s == "hard-deadline")
		return CostKind::Deadline;
	if (s == "step" || s == "piecewise-step")
		return CostKind::Step;
	return std::nullopt;
}

/**
 * \brief A nondecreasing completion-cost function.
 *
 * `w` is the weight, `d` the due date or deadline, `steps` the breakpoints of a
 * step function. `start` is the release time of the owning job (domain start)
 * and `offset` the constant subtracted so the cost at `start` is zero.
 */
struct CostFn {
	CostKind kind = CostKind::Completion;
	i64 w = 0;
	i64 d = 0;
	std::vector<std::pair<i64, Cost>> steps;
	i64 start = 0;
	Q offset = 0;
};

/** \brief Cost before the normalization offset is removed. */
inline Cost raw_cost(const CostFn& fn, i64 t)
{
	switch (fn.kind) {
	case CostKind::Completion: return Cost(Q(fn.w) * Q(t));
	case CostKind::Flow: return Cost(Q(fn.w) * Q(t - fn.start));
	case CostKind::Tardiness: return Cost(Q(fn.w) * Q(std::max<i64>(t - fn.d, 0)));
	case CostKind::Tardy: return Cost(t > fn.d ? Q(fn.w) : Q(0));
	case CostKind::Deadline: return t > fn.d ? Cost::infinity() : Cost(0);
	case CostKind::Step: {
		Cost c(0);
		for (const auto& [bt, bc] : fn.steps) {
			if (bt > t)
				break;
			c = bc;
		}
		return c;
	}
	}
	return Cost(0);
}

/** \brief Value oracle: exact cost of completing at time t (t >= domain start). */
inline Cost cost_at(const CostFn& fn, i64 t)
{
	if (t < fn.start)
		throw std::domain_error("cost_at: time " + std::to_string(t) + " before domain start " +
		                        std::to_string(fn.start));
	Cost c = raw_cost(fn, t);
	if (c.inf)
		return c;
	return Cost(Q(c.v - fn.offset));
}

/** \brief Inverse oracle: smallest t >= start with cost_at(t) >= q, or kNever. */
inline i64 time_for_cost(const CostFn& fn, const Cost& q)
{
	if (!q.inf && q.v <= 0)
		return fn.start;
	auto clamp = [&](i64 t) { return t == kNever ? kNever : std::max(t, fn.start); };
	if (q.inf) {
		if (fn.kind == CostKind::Deadline)
			return clamp(fn.d + 1);
		if (fn.kind == CostKind::Step)
			for (const auto& [bt, bc] : fn.steps)
				if (bc.inf)
					return clamp(bt);
		return kNever;
	}
	Q target = q.v + fn.offset;
	switch (fn.kind) {
	case CostKind::Completion:
		if (fn.w == 0)
			return kNever;
		return clamp(ceil_q(target / fn.w));
	case CostKind::Flow:
		if (fn.w == 0)
			return kNever;
		return clamp(fn.start + ceil_q(target / fn.w));
	case CostKind::Tardiness:
		if (fn.w == 0)
			return kNever;
		return clamp(fn.d + ceil_q(target / fn.w));
	case CostKind::Tardy:
		return target <= fn.w ? clamp(fn.d + 1) : kNever;
	case CostKind::Deadline:
		return clamp(fn.d + 1);
	case CostKind::Step:
		for (const auto& [bt, bc] : fn.steps)
			if (bc.inf || bc.v >= target)
				return clamp(bt);
		return kNever;
	}
	return kNever;
}

/** \brief A job with release time r, processing time p and a cost function. */
struct Job {
	int id = 0;
	i64 r = 0;
	i64 p = 1;
	CostFn fn;
};

/** \brief A GSP instance; cost_offset collects the constants removed by normalization. */
struct GspInstance {
	std::vector<Job> jobs;
	Q cost_offset = 0;
	bool normalized = false;
};

/** \brief One maximal run of a job on the machine, [start, end). */
struct Segment {
	int job = 0;
	i64 start = 0;
	i64 end = 0;
};

/** \brief A preemptive schedule given as segments plus completion times. */
struct Schedule {
	std::vector<Segment> segments;
	std::vector<i64> completions;
};

/** \brief Structured result of a validation pass. */
struct Diagnostics {
	std::vector<std::string> violations;
	std::vector<std::string> warnings;
	bool ok() const { return violations.empty(); }
};

/**
 * \brief Checks the instance invariants and normalizes cost functions in place.
 *
 * Every cost function is shifted so its value at the release time is zero and the
 * removed constant is added to cost_offset. A tardiness due date before the release
 * time is clamped to it (with a warning). Calling it twice is harmless.
 */
inline Diagnostics validate_gsp(GspInstance& inst)
{
	Diagnostics dg;
	const int n = static_cast<int>(inst.jobs.size());
	std::vector<char> seen(n, 0);
	for (const Job& j : inst.jobs) {
		std::string tag = "job " + std::to_string(j.id) + ": ";
		if (j.id < 0 || j.id >= n || seen[j.id])
			dg.violations.push_back(tag + "job ids must be unique and dense 0..n-1");
		else
			seen[j.id] = 1;
		if (j.p < 1)
			dg.violations.push_back(tag + "processing time must be positive");
		if (j.r < 0)
			dg.violations.push_back(tag + "release time must be nonnegative");
		if (j.fn.w < 0)
			dg.violations.push_back(tag + "weight must be nonnegative");
		if (j.fn.d < 0)
			dg.violations.push_back(tag + "due date must be nonnegative");
		if (j.fn.kind == CostKind::Step) {
			Cost prev(0);
			i64 prev_t = -1;
			for (const auto& [bt, bc] : j.fn.steps) {
				if (bt <= prev_t)
					dg.violations.push_back(tag + "step breakpoints must have increasing times");
				if (!bc.inf && bc.v < 0)
					dg.violations.push_back(tag + "step costs must be nonnegative");
				if (bc < prev)
					dg.violations.push_back(tag + "step costs must be nondecreasing");
				prev = bc;
				prev_t = bt;
			}
		}
	}
	if (!dg.ok() || inst.normalized)
		return dg;
	for (Job& j : inst.jobs) {
		CostFn& fn = j.fn;
		fn.start = j.r;
		fn.offset = 0;
		if (fn.kind == CostKind::Tardiness && fn.d < j.r) {
			dg.warnings.push_back("job " + std::to_string(j.id) + ": due date " + std::to_string(fn.d) +
			                      " before release " + std::to_string(j.r) + " clamped; offset " +
			                      std::to_string(fn.w * (j.r - fn.d)) + " recorded");
			inst.cost_offset += Q(fn.w * (j.r - fn.d));
			fn.d = j.r;
		}
		Cost base = raw_cost(fn, j.r);
		if (base.inf) {
			dg.violations.push_back("job " + std::to_string(j.id) +
			                        ": cost is infinite at the release time");
			continue;
		}
		fn.offset = base.v;
		inst.cost_offset += base.v;
	}
	inst.normalized = dg.ok();
	return dg;
}

/** \brief Checks sum_{s <= r_j < D_j <= t} p_j <= t - s over releases s and deadlines t. */
inline bool deadline_feasible(const GspInstance& inst, const std::vector<i64>& D)
{
	const auto& J = inst.jobs;
	for (std::size_t j = 0; j < J.size(); ++j)
		if (D[j] < J[j].r + J[j].p)
			return false;
	for (const Job& a : J) {
		i64 s = a.r;
		for (std::size_t b = 0; b < J.size(); ++b) {
			i64 t = D[b];
			if (t <= s)
				continue;
			i64 load = 0;
			for (std::size_t j = 0; j < J.size(); ++j)
				if (s <= J[j].r && D[j] <= t)
					load += J[j].p;
			if (load > t - s)
				return false;
		}
	}
	return true;
}

/**
 * \brief Earliest-deadline-first schedule for the given deadlines.
 *
 * Ties are broken by (deadline, job index). Returns nullopt when some job would
 * finish after its deadline.
 */
inline std::optional<Schedule> edf_schedule(const GspInstance& inst, const std::vector<i64>& D)
{
	const auto& J = inst.jobs;
	const std::size_t n = J.size();
	Schedule sch;
	sch.completions.assign(n, 0);
	if (n == 0)
		return sch;
	std::vector<std::size_t> order(n);
	std::iota(order.begin(), order.end(), 0);
	std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
		return J[a].r != J[b].r ? J[a].r < J[b].r : a < b;
	});
	std::vector<i64> left(n);
	for (std::size_t j = 0; j < n; ++j)
		left[j] = J[j].p;
	std::size_t next = 0, done = 0;
	i64 now = J[order[0]].r;
	while (done < n) {
		std::size_t best = n;
		for (std::size_t q = 0; q < next; ++q) {
			std::size_t j = order[q];
			if (left[j] == 0)
				continue;
			if (best == n || D[j] < D[best] || (D[j] == D[best] && j < best))
				best = j;
		}
		if (best == n) {
			now = std::max(now, J[order[next]].r);
			while (next < n && J[order[next]].r <= now)
				++next;
			continue;
		}
		i64 until = now + left[best];
		if (next < n)
			until = std::min(until, J[order[next]].r);
		i64 run = until - now;
		if (!sch.segments.empty() && sch.segments.back().job == static_cast<int>(best) &&
		    sch.segments.back().end == now)
			sch.segments.back().end = until;
		else
			sch.segments.push_back({static_cast<int>(best), now, until});
		left[best] -= run;
		now = until;
		if (left[best] == 0) {
			if (now > D[best])
				return std::nullopt;
			sch.completions[best] = now;
			++done;
		}
		while (next < n && J[order[next]].r <= now)
			++next;
	}
	return sch;
}

/** \brief Sum of normalized costs at the given completion times. */
inline Cost total_cost(const GspInstance& inst, const std::vector<i64>& C)
{
	Cost s(0);
	for (std::size_t j = 0; j < inst.jobs.size(); ++j)
		s += cost_at(inst.jobs[j].fn, C[j]);
	return s;
}

/** \brief Checks the schedule invariants; each message names the offending job or overlap. */
inline std::vector<std::string> validate_schedule(const GspInstance& inst, const Schedule& s)
{
	std::vector<std::string> err;
	const std::size_t n = inst.jobs.size();
	if (s.completions.size() != n) {
		err.push_back("completion vector has wrong length");
		return err;
	}
	std::vector<i64> work(n, 0), last(n, -1);
	for (std::size_t k = 0; k < s.segments.size(); ++k) {
		const Segment& g = s.segments[k];
		if (g.job < 0 || static_cast<std::size_t>(g.job) >= n) {
			err.push_back("segment " + std::to_string(k) + " names unknown job");
			continue;
		}
		if (g.end <= g.start)
			err.push_back("segment " + std::to_string(k) + " is empty or reversed");
		if (g.start < inst.jobs[g.job].r)
			err.push_back("job " + std::to_string(g.job) + " runs before its release");
		if (k > 0 && g.start < s.segments[k - 1].end)
			err.push_back("segments " + std::to_string(k - 1) + " and " + std::to_string(k) +
			              " overlap at time " + std::to_string(g.start));
		work[g.job] += g.end - g.start;
		last[g.job] = std::max(last[g.job], g.end);
	}
	for (std::size_t j = 0; j < n; ++j) {
		if (work[j] != inst.jobs[j].p)
			err.push_back("job " + std::to_string(j) + " receives " + std::to_string(work[j]) +
			              " units instead of " + std::to_string(inst.jobs[j].p));
		if (last[j] != s.completions[j])
			err.push_back("job " + std::to_string(j) + " completion does not match its last segment");
	}
	return err;
}

/** \brief T = 2^(k+1) where 2^k <= max r + sum p < 2^(k+1); 1 for an empty instance. */
inline i64 horizon(const GspInstance& inst)
{
	if (inst.jobs.empty())
		return 1;
	i64 mr = 0, sp = 0;
	for (const Job& j : inst.jobs) {
		mr = std::max(mr, j.r);
		sp += j.p;
	}
	i64 v = mr + sp;
	return i64(1) << (floor_log2(v) + 1);
}

/**
 * \brief Splits an instance where a gap between consecutive releases exceeds the total work.
 *
 * Each piece lists the original job indices; times are not shifted.
 */
inline std::vector<std::vector<int>> split_pieces(const GspInstance& inst)
{
	std::vector<int> order(inst.jobs.size());
	std::iota(order.begin(), order.end(), 0);
	std::sort(order.begin(), order.end(), [&](int a, int b) {
		return inst.jobs[a].r != inst.jobs[b].r ? inst.jobs[a].r < inst.jobs[b].r : a < b;
	});
	i64 sp = 0;
	for (const Job& j : inst.jobs)
		sp += j.p;
	std::vector<std::vector<int>> out;
	for (std::size_t k = 0; k < order.size(); ++k) {
		if (k == 0 || inst.jobs[order[k]].r - inst.jobs[order[k - 1]].r > sp)
			out.emplace_back();
		out.back().push_back(order[k]);
	}
	return out;
}

/** \brief Sub-instance on the listed jobs, renumbered 0..k-1 in list order. */
inline GspInstance sub_instance(const GspInstance& inst, const std::vector<int>& ids)
{
	GspInstance s;
	s.normalized = inst.normalized;
	for (std::size_t k = 0; k < ids.size(); ++k) {
		Job j = inst.jobs[ids[k]];
		j.id = static_cast<int>(k);
		s.jobs.push_back(j);
	}
	return s;
}

/** \brief Optimal completion vector and cost found by exhaustive search. */
struct GspOptimum {
	bool feasible = false;
	Cost cost = Cost::infinity();
	std::vector<i64> completions;
};

/**
 * \brief Exhaustive optimum over integral completion vectors.
 *
 * Completion times range over [r_j + p_j, max r + sum p]; partial vectors are pruned
 * by the deadline condition on the assigned jobs and by a cost lower bound.
 */
inline GspOptimum brute_force_gsp(const GspInstance& inst)
{
	const auto& J = inst.jobs;
	const std::size_t n = J.size();
	GspOptimum best;
	if (n == 0) {
		best.feasible = true;
		best.cost = Cost(0);
		return best;
	}
	i64 last = 0, sp = 0;
	for (const Job& j : J) {
		last = std::max(last, j.r);
		sp += j.p;
	}
	last += sp;
	std::vector<Cost> floor_cost(n + 1, Cost(0));
	for (std::size_t k = n; k-- > 0;)
		floor_cost[k] = floor_cost[k + 1] + cost_at(J[k].fn, J[k].r + J[k].p);
	GspInstance part;
	std::vector<i64> C(n, 0);
	std::function<void(std::size_t, Cost)> rec = [&](std::size_t k, Cost acc) {
		if (k == n) {
			if (!best.feasible || acc < best.cost) {
				best.feasible = true;
				best.cost = acc;
				best.completions = C;
			}
			return;
		}
		for (i64 c = J[k].r + J[k].p; c <= last; ++c) {
			Cost ck = cost_at(J[k].fn, c);
			Cost lb = acc + ck + floor_cost[k + 1];
			if (lb.inf || (best.feasible && lb >= best.cost))
				break;
			C[k] = c;
			part.jobs.assign(J.begin(), J.begin() + static_cast<long>(k) + 1);
			std::vector<i64> pref(C.begin(), C.begin() + static_cast<long>(k) + 1);
			if (!deadline_feasible(part, pref))
				continue;
			rec(k + 1, acc + ck);
		}
	};
	rec(0, Cost(0));
	return best;
}

} // namespace gspkit

#endif // GSPKIT_GSP_HPP
