#ifndef GSPKIT_TARDINESS_HPP
#define GSPKIT_TARDINESS_HPP

#include "gspkit/approx.hpp"
#include "gspkit/base_dp.hpp"
#include "gspkit/rcp.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace gspkit {

/** \brief Identity of a group of translated rows: rectangle count, cost and value buckets, x-coordinates. */
struct TGroupKey {
	int k = 0;
	std::vector<i64> cexp;
	i64 pexp = 0;
	std::vector<i64> t;
	bool operator<(const TGroupKey& o) const { return std::tie(k, cexp, pexp, t) < std::tie(o.k, o.cexp, o.pexp, o.t); }
	bool operator==(const TGroupKey& o) const { return std::tie(k, cexp, pexp, t) == std::tie(o.k, o.cexp, o.pexp, o.t); }
};

inline std::string tgroup_key_str(const TGroupKey& g)
{
	std::string s = "k=" + std::to_string(g.k) + " c=(";
	for (std::size_t i = 0; i < g.cexp.size(); ++i)
		s += (i ? "," : "") + std::to_string(g.cexp[i]);
	s += ") p=" + std::to_string(g.pexp) + " t=(";
	for (std::size_t i = 0; i < g.t.size(); ++i)
		s += (i ? "," : "") + std::to_string(g.t[i]);
	return s + ")";
}

/** \brief Group of cross rows; members are subproblem row indices, bottom to top. */
struct TGroup {
	TGroupKey key;
	std::vector<std::size_t> rows;
};

/**
 * \brief Rows meeting both halves of [L, R). At width 1 the halves are [L, L+1/2) and
 * [L+1/2, L+1), so every nonempty row crosses.
 */
inline bool is_cross_row(const Row& w, i64 L, i64 R)
{
	if (w.rects.empty())
		return false;
	if (R - L == 1)
		return true;
	const i64 mid = (L + R) / 2;
	bool l = false, r = false;
	for (const Rect& x : w.rects) {
		l = l || (x.a < mid && x.b > L);
		r = r || (x.a < R && x.b > mid);
	}
	return l && r;
}

inline TGroupKey tgroup_key(const Row& w, const Q& eps)
{
	TGroupKey key;
	key.k = static_cast<int>(w.rects.size());
	key.pexp = bucket_exp(Q(w.rects.front().p), 1 + eps);
	key.t.push_back(w.rects.front().a);
	for (const Rect& r : w.rects) {
		key.cexp.push_back(bucket_exp(r.c, 1 + eps));
		key.t.push_back(r.b);
	}
	return key;
}

inline std::vector<TGroup> group_cross_rows(const Subproblem& sp, const Q& eps)
{
	std::map<TGroupKey, std::vector<std::size_t>> m;
	for (std::size_t k = 0; k < sp.inst.rows.size(); ++k)
		if (is_cross_row(sp.inst.rows[k], sp.L, sp.R))
			m[tgroup_key(sp.inst.rows[k], eps)].push_back(k);
	std::vector<TGroup> out;
	for (auto& [k, v] : m)
		out.push_back(TGroup{k, v});
	return out;
}

/**
 * \brief Guessed counts for one group: n[i] rows take exactly the first i rectangles (i = 1..k);
 * for small counts (n[i] <= 1/eps) the member positions are given verbatim.
 */
struct GroupCounts {
	std::vector<i64> n;
	std::vector<std::vector<std::size_t>> verbatim;
};

/** \brief Counts read off a reference selection. */
inline GroupCounts counts_from_reference(const Subproblem& sp, const TGroup& g, const Selection& S, const Q& eps)
{
	std::set<int> s(S.begin(), S.end());
	GroupCounts gc;
	gc.n.assign(static_cast<std::size_t>(g.key.k) + 1, 0);
	gc.verbatim.assign(static_cast<std::size_t>(g.key.k) + 1, {});
	for (std::size_t q = 0; q < g.rows.size(); ++q) {
		int len = prefix_len(sp.inst.rows[g.rows[q]], s);
		if (len > 0) {
			++gc.n[static_cast<std::size_t>(len)];
			gc.verbatim[static_cast<std::size_t>(len)].push_back(q);
		}
	}
	for (std::size_t i = 1; i < gc.n.size(); ++i)
		if (Q(gc.n[i]) * eps > 1)
			gc.verbatim[i].clear();
	return gc;
}

/**
 * \brief Greedy selection inside a group: small counts keep their guessed rows, then for i
 * descending the bottom-most floor((1+2 eps) n_i) unused rows take their first i rectangles.
 * Returns the chosen prefix length per member, or nullopt for inconsistent counts.
 */
inline std::optional<std::vector<int>> greedy_group_select(const TGroup& g, const GroupCounts& gc, const Q& eps)
{
	const std::size_t m = g.rows.size();
	std::vector<int> len(m, 0);
	std::vector<char> used(m, 0);
	i64 total = 0;
	for (std::size_t i = 1; i < gc.n.size(); ++i)
		total += gc.n[i];
	if (total > static_cast<i64>(m))
		return std::nullopt;
	for (std::size_t i = 1; i < gc.n.size(); ++i) {
		if (Q(gc.n[i]) * eps > 1)
			continue;
		if (gc.verbatim[i].size() != static_cast<std::size_t>(gc.n[i]))
			return std::nullopt;
		for (std::size_t q : gc.verbatim[i]) {
			if (q >= m || used[q])
				return std::nullopt;
			used[q] = 1;
			len[q] = static_cast<int>(i);
		}
	}
	for (std::size_t i = gc.n.size(); i-- > 1;) {
		if (!(Q(gc.n[i]) * eps > 1))
			continue;
		i64 want = floor_q((1 + 2 * eps) * gc.n[i]);
		for (std::size_t q = 0; q < m && want > 0; ++q)
			if (!used[q]) {
				used[q] = 1;
				len[q] = static_cast<int>(i);
				--want;
			}
	}
	return len;
}

/** \brief Selection ids of the chosen prefixes of a group. */
inline Selection group_selection(const Subproblem& sp, const TGroup& g, const std::vector<int>& len)
{
	Selection out;
	for (std::size_t q = 0; q < g.rows.size(); ++q)
		for (int i = 0; i < len[q]; ++i)
			out.push_back(sp.inst.rows[g.rows[q]].rects[static_cast<std::size_t>(i)].id);
	std::sort(out.begin(), out.end());
	return out;
}

/** \brief Ids of the group rows' rectangles contained in a selection. */
inline Selection group_part(const Subproblem& sp, const TGroup& g, const Selection& S)
{
	std::set<int> s(S.begin(), S.end());
	Selection out;
	for (std::size_t k : g.rows)
		for (const Rect& r : sp.inst.rows[k].rects)
			if (s.count(r.id))
				out.push_back(r.id);
	std::sort(out.begin(), out.end());
	return out;
}

/**
 * \brief Per-ray dominance: for every integer t in [L, R) and every row height s, the group
 * selection covers at least as much as the reference part. Returns the first violation or "".
 */
inline std::string check_group_dominance(const Subproblem& sp, const Selection& apx, const Selection& ref)
{
	std::set<i64> ys;
	for (const Row& w : sp.inst.rows)
		ys.insert(w.y);
	for (i64 t = sp.L; t < sp.R; ++t)
		for (i64 s : ys) {
			Ray l{s, t, 0};
			i64 a = coverage(sp.inst, apx, l), b = coverage(sp.inst, ref, l);
			if (a < b)
				return "dominance violated at t=" + std::to_string(t) + " s=" + std::to_string(s);
		}
	return {};
}

/** \brief Ledger entry for one group at one node. */
struct TGroupLedger {
	TGroupKey key;
	std::vector<i64> counts;
	std::vector<i64> selected_y;
	Q cost = 0;
	Q ref_cost = 0;
	bool cost_ok = true;
	bool dominance_ok = true;
};

struct TNodeCertificate {
	int depth = 0;
	i64 L = 0;
	i64 R = 0;
	bool feasible = false;
	Q out_cost = 0;
	bool has_reference = false;
	Q ref_cost = 0;
	bool ratio_ok = true;
	bool child_refs_ok = true;
	std::size_t candidates = 0;
	std::vector<TGroupLedger> groups;
	std::string note;

	bool ok() const
	{
		if ((!feasible && has_reference) || !ratio_ok || !child_refs_ok)
			return false;
		for (const TGroupLedger& g : groups)
			if (!g.cost_ok || !g.dominance_ok)
				return false;
		return true;
	}
};

struct TardinessReport {
	std::vector<TNodeCertificate> nodes;
	std::size_t candidates = 0;

	bool ok() const
	{
		for (const TNodeCertificate& n : nodes)
			if (!n.ok())
				return false;
		return true;
	}

	std::vector<std::string> failures() const
	{
		std::vector<std::string> out;
		for (const TNodeCertificate& n : nodes)
			if (!n.ok())
				out.push_back("node [" + std::to_string(n.L) + "," + std::to_string(n.R) + ") depth " +
				              std::to_string(n.depth) + ": " + (n.note.empty() ? "certificate failed" : n.note));
		return out;
	}
};

struct TardinessOptions {
	Q eps = Q(1, 4);
	ApproxMode mode = ApproxMode::Oracle;
	std::size_t cap_guesses = 100000;
	int cap_depth = 8;
};

namespace detail {

/** \brief Child subproblems of a tardiness split given the union of all group selections. */
inline std::pair<Subproblem, Subproblem> split_tardiness(const Subproblem& sp, const std::vector<TGroup>& groups,
                                                         const Selection& apx)
{
	const i64 mid = (sp.L + sp.R) / 2;
	std::set<std::size_t> cross;
	for (const TGroup& g : groups)
		cross.insert(g.rows.begin(), g.rows.end());
	Subproblem l, r;
	l.L = sp.L;
	l.R = mid;
	r.L = mid;
	r.R = sp.R;
	for (std::size_t k = 0; k < sp.inst.rows.size(); ++k) {
		const Row& w = sp.inst.rows[k];
		if (cross.count(k) || w.rects.empty())
			continue;
		(w.rects.back().b <= mid ? l : r).inst.rows.push_back(w);
	}
	std::set<int> s(apx.begin(), apx.end());
	for (const Ray& ray : sp.inst.rays) {
		i64 d = std::max<i64>(0, ray.d - coverage_of(sp, s, ray));
		if (d > 0)
			(ray.t < mid ? l : r).inst.rays.push_back(Ray{ray.s, ray.t, d});
	}
	return {l, r};
}

class TardinessRecursion {
public:
	TardinessRecursion(const TardinessOptions& opt, TardinessReport* rep) : opt_(opt), rep_(rep) {}

	RcpResult solve(const Subproblem& sp, const std::optional<Selection>& ref, int depth)
	{
		auto groups = group_cross_rows(sp, opt_.eps);
		TNodeCertificate c;
		c.depth = depth;
		c.L = sp.L;
		c.R = sp.R;
		RcpResult out;
		if (opt_.mode == ApproxMode::Oracle) {
			const Selection& S = *ref;
			c.has_reference = true;
			c.ref_cost = selection_cost(sp.inst, S);
			c.candidates = 1;
			Selection apx;
			for (const TGroup& g : groups) {
				GroupCounts gc = counts_from_reference(sp, g, S, opt_.eps);
				auto len = greedy_group_select(g, gc, opt_.eps);
				TGroupLedger led;
				led.key = g.key;
				led.counts = gc.n;
				if (!len) {
					led.cost_ok = false;
					c.groups.push_back(led);
					continue;
				}
				Selection sel = group_selection(sp, g, *len);
				Selection part = group_part(sp, g, S);
				for (std::size_t q = 0; q < g.rows.size(); ++q)
					if ((*len)[q] > 0)
						led.selected_y.push_back(sp.inst.rows[g.rows[q]].y);
				led.cost = selection_cost(sp.inst, sel);
				led.ref_cost = selection_cost(sp.inst, part);
				led.cost_ok = led.cost <= (1 + 5 * opt_.eps) * led.ref_cost;
				std::string dom = check_group_dominance(sp, sel, part);
				led.dominance_ok = dom.empty();
				if (!dom.empty())
					c.note = tgroup_key_str(g.key) + ": " + dom;
				apx.insert(apx.end(), sel.begin(), sel.end());
				c.groups.push_back(led);
			}
			out = finish(sp, groups, apx, &S, depth, c);
			c.ratio_ok = out.feasible && out.cost <= (1 + 5 * opt_.eps) * c.ref_cost;
		} else {
			out = exhaustive(sp, groups, depth, c);
		}
		c.feasible = out.feasible;
		c.out_cost = out.cost;
		if (!out.feasible && c.note.empty())
			c.note = "infeasible output";
		if (rep_)
			rep_->nodes.push_back(c);
		return out;
	}

private:
	const TardinessOptions& opt_;
	TardinessReport* rep_;

	/** \brief Recurses on the halves (or checks residual demands at width 1) and unions the results. */
	RcpResult finish(const Subproblem& sp, const std::vector<TGroup>& groups, Selection apx, const Selection* ref,
	                 int depth, TNodeCertificate& c)
	{
		std::sort(apx.begin(), apx.end());
		if (sp.R - sp.L == 1) {
			std::set<int> s(apx.begin(), apx.end());
			for (const Ray& l : sp.inst.rays)
				if (l.d > coverage_of(sp, s, l))
					return RcpResult{};
			return RcpResult{true, apx, selection_cost(sp.inst, apx)};
		}
		auto [left, right] = split_tardiness(sp, groups, apx);
		std::optional<Selection> rl, rr;
		if (ref) {
			rl = restrict_to(left, *ref);
			rr = restrict_to(right, *ref);
			c.child_refs_ok = is_feasible(left.inst, *rl) && is_feasible(right.inst, *rr);
			if (!c.child_refs_ok)
				return RcpResult{};
		}
		RcpResult a = solve(left, rl, depth + 1);
		if (!a.feasible)
			return RcpResult{};
		RcpResult b = solve(right, rr, depth + 1);
		if (!b.feasible)
			return RcpResult{};
		Selection sel = apx;
		sel.insert(sel.end(), a.sel.begin(), a.sel.end());
		sel.insert(sel.end(), b.sel.begin(), b.sel.end());
		std::sort(sel.begin(), sel.end());
		if (!is_feasible(sp.inst, sel))
			return RcpResult{};
		return RcpResult{true, sel, selection_cost(sp.inst, sel)};
	}

	/** \brief All distinct group selections reachable from some reference part of the group. */
	std::vector<Selection> group_candidates(const Subproblem& sp, const TGroup& g)
	{
		std::set<Selection> seen;
		const std::size_t m = g.rows.size();
		std::vector<int> pv(m, 0);
		std::size_t visited = 0;
		std::function<void(std::size_t)> rec = [&](std::size_t q) {
			if (q == m) {
				if (++visited > opt_.cap_guesses)
					throw CapsExhausted("guess cap exceeded while enumerating tardiness group counts");
				Selection S;
				for (std::size_t r = 0; r < m; ++r)
					for (int i = 0; i < pv[r]; ++i)
						S.push_back(sp.inst.rows[g.rows[r]].rects[static_cast<std::size_t>(i)].id);
				auto len = greedy_group_select(g, counts_from_reference(sp, g, S, opt_.eps), opt_.eps);
				if (len)
					seen.insert(group_selection(sp, g, *len));
				return;
			}
			for (int len = 0; len <= g.key.k; ++len) {
				pv[q] = len;
				rec(q + 1);
			}
			pv[q] = 0;
		};
		rec(0);
		return {seen.begin(), seen.end()};
	}

	RcpResult exhaustive(const Subproblem& sp, const std::vector<TGroup>& groups, int depth, TNodeCertificate& c)
	{
		std::vector<std::vector<Selection>> opts;
		std::size_t prod = 1;
		for (const TGroup& g : groups) {
			opts.push_back(group_candidates(sp, g));
			prod *= opts.back().size();
			if (prod > opt_.cap_guesses)
				throw CapsExhausted("guess cap exceeded at tardiness node [" + std::to_string(sp.L) + "," +
				                    std::to_string(sp.R) + ")");
		}
		RcpResult best;
		std::vector<std::size_t> pick(groups.size(), 0);
		std::size_t count = 0;
		while (true) {
			++count;
			Selection apx;
			for (std::size_t gi = 0; gi < groups.size(); ++gi)
				apx.insert(apx.end(), opts[gi][pick[gi]].begin(), opts[gi][pick[gi]].end());
			Q base = selection_cost(sp.inst, apx);
			if (!best.feasible || base < best.cost) {
				RcpResult r = finish(sp, groups, apx, nullptr, depth, c);
				if (r.feasible && (!best.feasible || r.cost < best.cost))
					best = r;
			}
			std::size_t gi = 0;
			while (gi < groups.size() && ++pick[gi] == opts[gi].size())
				pick[gi++] = 0;
			if (gi == groups.size())
				break;
		}
		c.candidates = count;
		if (rep_)
			rep_->candidates += count;
		return best;
	}
};

} // namespace detail

/** \brief Root area [0, next_pow2(max right)); every rectangle lies inside it. */
inline i64 tardiness_root_width(const RcpInstance& inst)
{
	i64 m = 1;
	for (const Row& w : inst.rows)
		for (const Rect& r : w.rects)
			m = std::max(m, r.b);
	return next_pow2(m);
}

/**
 * \brief Recursive (1+5 eps)-approximation for well-structured instances.
 *
 * Oracle mode reads the group counts off a feasible reference; exhaustive mode tries every
 * distinct group selection under the caps. Rays outside the root area must have zero demand.
 */
inline RcpResult solve_tardiness(const RcpInstance& inst, const TardinessOptions& opt,
                                 const std::optional<Selection>& reference = std::nullopt,
                                 TardinessReport* report = nullptr)
{
	if (!is_dyadic_unit(opt.eps))
		throw std::invalid_argument("tardiness mode needs eps = 2^-k");
	Subproblem root;
	root.L = 0;
	root.R = tardiness_root_width(inst);
	root.inst = inst;
	normalize_layout(root.inst);
	for (const Ray& l : root.inst.rays)
		if (l.d > 0 && !root.interior(l))
			return RcpResult{};
	if (opt.mode == ApproxMode::Oracle) {
		if (!reference || !is_feasible(root.inst, *reference))
			throw std::invalid_argument("oracle mode needs a feasible reference selection");
	} else if (floor_log2(root.R) > opt.cap_depth) {
		throw CapsExhausted("depth cap exceeded: root width " + std::to_string(root.R));
	}
	detail::TardinessRecursion rec(opt, report);
	return rec.solve(root, reference, 0);
}

/** \brief One preprocessing candidate: reduced instance, forced rows and the cost ratio C. */
struct TardinessCandidate {
	RcpInstance inst;
	Selection forced;
	Q forced_cost = 0;
	std::optional<int> rmax;
	Q C = 1;
	bool c_ok = true;
};

/**
 * \brief Candidates per guess of the costliest optimal rectangle (one per distinct cost) plus
 * the empty guess. Costlier rectangles are discarded with everything to their right; rows
 * whose cheapest remaining rectangle costs at most eps c(R_max)/(n K) are forced entirely.
 */
inline std::vector<TardinessCandidate> tardiness_preprocess(const RcpInstance& inst, const Q& eps)
{
	std::vector<TardinessCandidate> out;
	const Q K = std::max(Q(1), rcp_K(inst));
	const Q n(static_cast<long>(inst.rows.size()));
	std::map<Q, int> costs;
	for (const Row& w : inst.rows)
		for (const Rect& r : w.rects)
			costs.emplace(r.c, r.id);
	TardinessCandidate none;
	none.inst.rays = inst.rays;
	out.push_back(none);
	for (const auto& [cmax, id] : costs) {
		TardinessCandidate tc;
		tc.rmax = id;
		tc.inst.rays = inst.rays;
		const Q thr = eps * cmax / (n * K);
		std::vector<std::pair<i64, Rect>> forced;
		Q lo = -1, hi = -1;
		for (const Row& w : inst.rows) {
			Row kept{w.y, {}};
			for (const Rect& r : w.rects) {
				if (r.c > cmax)
					break;
				kept.rects.push_back(r);
			}
			if (kept.rects.empty())
				continue;
			Q mn = kept.rects.front().c;
			for (const Rect& r : kept.rects)
				mn = std::min(mn, r.c);
			if (mn <= thr) {
				for (const Rect& r : kept.rects) {
					forced.push_back({w.y, r});
					tc.forced.push_back(r.id);
					tc.forced_cost += r.c;
				}
				continue;
			}
			for (const Rect& r : kept.rects) {
				lo = lo < 0 ? r.c : std::min(lo, r.c);
				hi = std::max(hi, r.c);
			}
			tc.inst.rows.push_back(std::move(kept));
		}
		reduce_by_forced(tc.inst, forced);
		std::sort(tc.forced.begin(), tc.forced.end());
		tc.C = lo > 0 ? hi / lo : Q(1);
		tc.c_ok = tc.C <= K * n / eps;
		out.push_back(std::move(tc));
	}
	return out;
}

/** \brief Best forced-plus-solved candidate; `reference_for` supplies oracle references per candidate. */
inline RcpResult solve_tardiness_preprocessed(const RcpInstance& inst, const TardinessOptions& opt,
                                              const std::function<std::optional<Selection>(const RcpInstance&)>& reference_for,
                                              TardinessReport* report = nullptr)
{
	RcpResult best;
	for (const TardinessCandidate& tc : tardiness_preprocess(inst, opt.eps)) {
		std::optional<Selection> ref;
		if (opt.mode == ApproxMode::Oracle) {
			ref = reference_for(tc.inst);
			if (!ref)
				continue;
		}
		RcpResult r = solve_tardiness(tc.inst, opt, ref, report);
		if (!r.feasible)
			continue;
		Selection sel = r.sel;
		sel.insert(sel.end(), tc.forced.begin(), tc.forced.end());
		sel = prefix_closure(inst, sel);
		if (!is_feasible(inst, sel))
			continue;
		Q cost = selection_cost(inst, sel);
		if (!best.feasible || cost < best.cost)
			best = RcpResult{true, sel, cost};
	}
	return best;
}

} // namespace gspkit

#endif // GSPKIT_TARDINESS_HPP
