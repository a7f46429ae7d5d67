#ifndef GSPKIT_RCP_HPP
#define GSPKIT_RCP_HPP

#include "gspkit/rational.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace gspkit {

/** \brief Rectangle [a,b) x [y,y+1) with cost c and value p; y is stored on the row. */
struct Rect {
	int id = 0;
	i64 a = 0;
	i64 b = 1;
	Q c = 1;
	i64 p = 1;
};

/** \brief A row: consecutive rectangles sorted by left coordinate. */
struct Row {
	i64 y = 0;
	std::vector<Rect> rects;
};

/** \brief Downward ray {t} x (-inf, s] with demand d. */
struct Ray {
	i64 s = 0;
	i64 t = 0;
	i64 d = 0;
};

/** \brief Rows sorted by y ascending plus rays. */
struct RcpInstance {
	std::vector<Row> rows;
	std::vector<Ray> rays;
};

/** \brief Sorted list of chosen rectangle ids. */
using Selection = std::vector<int>;

/** \brief Result of an exact or approximate solve. */
struct RcpResult {
	bool feasible = false;
	Selection sel;
	Q cost = 0;
};

/** \brief Raised when an enumeration would exceed its configured budget. */
struct BudgetExceeded : std::runtime_error {
	using std::runtime_error::runtime_error;
};

/** \brief Sorts rows by y and rectangles by left coordinate. */
inline void normalize_layout(RcpInstance& inst)
{
	std::sort(inst.rows.begin(), inst.rows.end(), [](const Row& a, const Row& b) { return a.y < b.y; });
	for (Row& w : inst.rows)
		std::sort(w.rects.begin(), w.rects.end(), [](const Rect& a, const Rect& b) { return a.a < b.a; });
}

/** \brief Assigns ids 0.. in row-major order (rows by y, then left coordinate). */
inline void renumber(RcpInstance& inst)
{
	normalize_layout(inst);
	int id = 0;
	for (Row& w : inst.rows)
		for (Rect& r : w.rects)
			r.id = id++;
}

inline std::size_t rect_count(const RcpInstance& inst)
{
	std::size_t n = 0;
	for (const Row& w : inst.rows)
		n += w.rects.size();
	return n;
}

/** \brief Position of every rectangle id as (row index, index in row). */
inline std::unordered_map<int, std::pair<int, int>> rect_index(const RcpInstance& inst)
{
	std::unordered_map<int, std::pair<int, int>> ix;
	for (std::size_t k = 0; k < inst.rows.size(); ++k)
		for (std::size_t q = 0; q < inst.rows[k].rects.size(); ++q)
			ix[inst.rows[k].rects[q].id] = {static_cast<int>(k), static_cast<int>(q)};
	return ix;
}

/** \brief Derived constants of an instance. */
struct RcpStats {
	Q K = 1;
	std::size_t M = 0;
	i64 p_max = 0;
	i64 x_min = 0;
	i64 x_max = 0;
};

/** \brief K = max over rows of (row cost sum / cheapest rectangle). */
inline Q rcp_K(const RcpInstance& inst)
{
	Q K = 1;
	for (const Row& w : inst.rows) {
		if (w.rects.empty())
			continue;
		Q sum = 0, mn = w.rects[0].c;
		for (const Rect& r : w.rects) {
			sum += r.c;
			mn = std::min(mn, r.c);
		}
		if (mn > 0)
			K = std::max(K, Q(sum / mn));
	}
	return K;
}

inline RcpStats rcp_stats(const RcpInstance& inst)
{
	RcpStats st;
	st.K = rcp_K(inst);
	std::set<Q> costs;
	bool first = true;
	for (const Row& w : inst.rows)
		for (const Rect& r : w.rects) {
			costs.insert(r.c);
			st.p_max = std::max(st.p_max, r.p);
			st.x_min = first ? r.a : std::min(st.x_min, r.a);
			st.x_max = first ? r.b : std::max(st.x_max, r.b);
			first = false;
		}
	st.M = costs.size();
	return st;
}

/** \brief Validation report for an RCP instance. */
struct RcpDiagnostics {
	std::vector<std::string> violations;
	RcpStats stats;
	bool ok() const { return violations.empty(); }
};

inline RcpDiagnostics validate_rcp(const RcpInstance& inst)
{
	RcpDiagnostics dg;
	std::set<int> ids;
	std::set<i64> ys;
	for (const Row& w : inst.rows) {
		std::string tag = "row " + std::to_string(w.y) + ": ";
		if (!ys.insert(w.y).second)
			dg.violations.push_back(tag + "duplicate row index");
		if (w.y < 0)
			dg.violations.push_back(tag + "row index must be nonnegative");
		for (std::size_t q = 0; q < w.rects.size(); ++q) {
			const Rect& r = w.rects[q];
			if (!ids.insert(r.id).second)
				dg.violations.push_back(tag + "duplicate rectangle id " + std::to_string(r.id));
			if (!(r.a < r.b))
				dg.violations.push_back(tag + "rectangle needs left < right");
			if (r.a < 0)
				dg.violations.push_back(tag + "coordinates must be nonnegative");
			if (!(r.c > 0))
				dg.violations.push_back(tag + "costs strictly positive");
			if (r.p <= 0)
				dg.violations.push_back(tag + "values strictly positive");
			if (q > 0) {
				if (r.p != w.rects[0].p)
					dg.violations.push_back(tag + "row values differ");
				if (w.rects[q - 1].b != r.a)
					dg.violations.push_back(tag + "row not consecutive");
			}
		}
	}
	for (const Ray& l : inst.rays)
		if (l.d < 0 || l.s < 0 || l.t < 0)
			dg.violations.push_back("ray (" + std::to_string(l.s) + "," + std::to_string(l.t) +
			                        ") has a negative field");
	dg.stats = rcp_stats(inst);
	return dg;
}

/** \brief Per-row prefix lengths for a selection, or nullopt if some row is not a prefix. */
inline std::optional<std::vector<int>> to_prefix(const RcpInstance& inst, const Selection& sel)
{
	std::set<int> s(sel.begin(), sel.end());
	std::vector<int> pv(inst.rows.size(), 0);
	std::size_t matched = 0;
	for (std::size_t k = 0; k < inst.rows.size(); ++k) {
		const auto& R = inst.rows[k].rects;
		int len = 0;
		while (len < static_cast<int>(R.size()) && s.count(R[len].id))
			++len;
		for (std::size_t q = len; q < R.size(); ++q)
			if (s.count(R[q].id))
				return std::nullopt;
		pv[k] = len;
		matched += len;
	}
	if (matched != s.size())
		return std::nullopt;
	return pv;
}

inline Selection from_prefix(const RcpInstance& inst, const std::vector<int>& pv)
{
	Selection sel;
	for (std::size_t k = 0; k < inst.rows.size(); ++k)
		for (int q = 0; q < pv[k]; ++q)
			sel.push_back(inst.rows[k].rects[q].id);
	std::sort(sel.begin(), sel.end());
	return sel;
}

/** \brief Name of the first row whose selection is not a prefix, or empty. */
inline std::string prefix_violation(const RcpInstance& inst, const Selection& sel)
{
	std::set<int> s(sel.begin(), sel.end());
	std::set<int> known;
	for (const Row& w : inst.rows) {
		bool gap = false;
		for (const Rect& r : w.rects) {
			known.insert(r.id);
			if (!s.count(r.id))
				gap = true;
			else if (gap)
				return "row " + std::to_string(w.y) + " selection is not a prefix";
		}
	}
	for (int id : s)
		if (!known.count(id))
			return "unknown rectangle id " + std::to_string(id);
	return {};
}

/** \brief Total value of selected rectangles intersecting the ray. */
inline i64 coverage(const RcpInstance& inst, const Selection& sel, const Ray& ray)
{
	std::set<int> s(sel.begin(), sel.end());
	i64 c = 0;
	for (const Row& w : inst.rows) {
		if (w.y > ray.s)
			continue;
		for (const Rect& r : w.rects)
			if (r.a <= ray.t && ray.t < r.b && s.count(r.id))
				c += r.p;
	}
	return c;
}

/** \brief Prefix property plus every ray demand met. */
inline bool is_feasible(const RcpInstance& inst, const Selection& sel)
{
	if (!prefix_violation(inst, sel).empty())
		return false;
	for (const Ray& l : inst.rays)
		if (l.d > 0 && coverage(inst, sel, l) < l.d)
			return false;
	return true;
}

inline Q selection_cost(const RcpInstance& inst, const Selection& sel)
{
	std::set<int> s(sel.begin(), sel.end());
	Q c = 0;
	for (const Row& w : inst.rows)
		for (const Rect& r : w.rects)
			if (s.count(r.id))
				c += r.c;
	return c;
}

/** \brief Smallest prefix-valid superset: in each row, closes everything left of a chosen rectangle. */
inline Selection prefix_closure(const RcpInstance& inst, const std::vector<int>& chosen)
{
	std::set<int> s(chosen.begin(), chosen.end());
	Selection out;
	for (const Row& w : inst.rows) {
		i64 reach = std::numeric_limits<i64>::min();
		for (const Rect& r : w.rects)
			if (s.count(r.id))
				reach = std::max(reach, r.b);
		for (const Rect& r : w.rects)
			if (r.a < reach)
				out.push_back(r.id);
	}
	std::sort(out.begin(), out.end());
	return out;
}

namespace detail {

/** \brief Precomputed per-ray hit lists: (row index, position of the rectangle containing t). */
struct RayHits {
	std::vector<std::vector<std::pair<int, int>>> hits;
	std::vector<i64> demand;
};

inline RayHits ray_hits(const RcpInstance& inst)
{
	RayHits h;
	for (const Ray& l : inst.rays) {
		if (l.d <= 0)
			continue;
		std::vector<std::pair<int, int>> v;
		for (std::size_t k = 0; k < inst.rows.size(); ++k) {
			const Row& w = inst.rows[k];
			if (w.y > l.s)
				continue;
			for (std::size_t q = 0; q < w.rects.size(); ++q)
				if (w.rects[q].a <= l.t && l.t < w.rects[q].b) {
					v.push_back({static_cast<int>(k), static_cast<int>(q)});
					break;
				}
		}
		h.hits.push_back(std::move(v));
		h.demand.push_back(l.d);
	}
	return h;
}

} // namespace detail

/** \brief Product of (|W|+1) over rows, saturating at limit+1. */
inline std::size_t prefix_space(const RcpInstance& inst, std::size_t limit)
{
	std::size_t prod = 1;
	for (const Row& w : inst.rows) {
		std::size_t f = w.rects.size() + 1;
		if (prod > (limit + 1) / f)
			return limit + 1;
		prod *= f;
	}
	return prod;
}

/**
 * \brief Exhaustive optimum over per-row prefix vectors (lexicographic tie-break).
 *
 * Throws BudgetExceeded when the product of (|W|+1) exceeds the budget.
 */
inline RcpResult brute_force(const RcpInstance& inst, std::size_t budget = 5000000)
{
	if (prefix_space(inst, budget) > budget)
		throw BudgetExceeded("prefix space exceeds budget " + std::to_string(budget));
	const auto H = detail::ray_hits(inst);
	const std::size_t n = inst.rows.size();
	std::vector<std::vector<Q>> pc(n);
	for (std::size_t k = 0; k < n; ++k) {
		pc[k].push_back(0);
		for (const Rect& r : inst.rows[k].rects)
			pc[k].push_back(pc[k].back() + r.c);
	}
	RcpResult best;
	std::vector<int> pv(n, 0), bestv;
	for (;;) {
		bool ok = true;
		for (std::size_t i = 0; i < H.hits.size() && ok; ++i) {
			i64 c = 0;
			for (auto [k, q] : H.hits[i])
				if (pv[k] > q)
					c += inst.rows[k].rects[q].p;
			ok = c >= H.demand[i];
		}
		if (ok) {
			Q cost = 0;
			for (std::size_t k = 0; k < n; ++k)
				cost += pc[k][pv[k]];
			if (!best.feasible || cost < best.cost) {
				best.feasible = true;
				best.cost = cost;
				bestv = pv;
			}
		}
		std::size_t k = n;
		while (k > 0) {
			--k;
			if (pv[k] < static_cast<int>(inst.rows[k].rects.size())) {
				++pv[k];
				break;
			}
			pv[k] = 0;
			if (k == 0) {
				k = n + 1;
				break;
			}
		}
		if (n == 0 || k == n + 1)
			break;
	}
	if (best.feasible)
		best.sel = from_prefix(inst, bestv);
	return best;
}

namespace detail {

inline i64 frac_cost(i64 c, i64 r, i64 p)
{
	__int128 num = static_cast<__int128>(c) * r;
	return static_cast<i64>((num + p - 1) / p);
}
inline Q frac_cost(const Q& c, i64 r, i64 p) { return c * r / p; }

/** \brief Branch and bound over per-row prefixes with a numeric cost type N. */
template <typename N>
struct PrefixBnB {
	const RcpInstance& inst;
	std::vector<std::vector<N>> pc;
	std::vector<std::vector<std::pair<int, int>>> hits;
	std::vector<i64> demand;
	std::vector<std::vector<std::pair<int, int>>> row_rays;
	std::vector<int> last_row;
	std::vector<std::vector<int>> item_order;
	std::vector<i64> cov, pot;
	std::vector<int> pv, bestv;
	N cost{}, best{};
	bool have = false;
	std::size_t nodes = 0, node_limit = 0;

	PrefixBnB(const RcpInstance& in, std::vector<std::vector<N>> prefix_costs, const RayHits& h)
	    : inst(in), pc(std::move(prefix_costs)), hits(h.hits), demand(h.demand)
	{
		const std::size_t n = inst.rows.size();
		row_rays.assign(n, {});
		last_row.assign(hits.size(), -1);
		item_order.assign(hits.size(), {});
		cov.assign(hits.size(), 0);
		pot.assign(hits.size(), 0);
		for (std::size_t i = 0; i < hits.size(); ++i) {
			for (std::size_t e = 0; e < hits[i].size(); ++e) {
				auto [k, q] = hits[i][e];
				row_rays[k].push_back({static_cast<int>(i), q});
				last_row[i] = std::max(last_row[i], k);
				pot[i] += inst.rows[k].rects[q].p;
				item_order[i].push_back(static_cast<int>(e));
			}
			std::sort(item_order[i].begin(), item_order[i].end(), [&](int x, int y) {
				auto [kx, qx] = hits[i][x];
				auto [ky, qy] = hits[i][y];
				N lhs = pc[kx][qx + 1] * inst.rows[ky].rects[qy].p;
				N rhs = pc[ky][qy + 1] * inst.rows[kx].rects[qx].p;
				return lhs < rhs;
			});
		}
		pv.assign(n, 0);
	}

	N lower_bound(std::size_t from) const
	{
		N lb{};
		for (std::size_t i = 0; i < hits.size(); ++i) {
			i64 need = demand[i] - cov[i];
			if (need <= 0)
				continue;
			N acc{};
			for (int e : item_order[i]) {
				auto [k, q] = hits[i][e];
				if (static_cast<std::size_t>(k) < from)
					continue;
				i64 p = inst.rows[k].rects[q].p;
				if (p >= need) {
					acc += frac_cost(pc[k][q + 1], need, p);
					need = 0;
					break;
				}
				acc += pc[k][q + 1];
				need -= p;
			}
			if (lb < acc)
				lb = acc;
		}
		return lb;
	}

	void dfs(std::size_t k)
	{
		if (node_limit && ++nodes > node_limit)
			throw BudgetExceeded("branch and bound node limit reached");
		if (k == inst.rows.size()) {
			if (!have || cost < best) {
				have = true;
				best = cost;
				bestv = pv;
			}
			return;
		}
		if (have && !(cost + lower_bound(k) < best))
			return;
		const int W = static_cast<int>(inst.rows[k].rects.size());
		for (int len = 0; len <= W; ++len) {
			N add = pc[k][len];
			if (have && !(cost + add < best))
				break;
			bool ok = true;
			for (auto [i, q] : row_rays[k]) {
				pot[i] -= inst.rows[k].rects[q].p;
				if (len > q)
					cov[i] += inst.rows[k].rects[q].p;
			}
			for (auto [i, q] : row_rays[k]) {
				(void)q;
				if (cov[i] + pot[i] < demand[i])
					ok = false;
			}
			if (ok) {
				pv[k] = len;
				cost += add;
				dfs(k + 1);
				cost -= add;
				pv[k] = 0;
			}
			for (auto [i, q] : row_rays[k]) {
				pot[i] += inst.rows[k].rects[q].p;
				if (len > q)
					cov[i] -= inst.rows[k].rects[q].p;
			}
		}
	}
};

} // namespace detail

/**
 * \brief Exact optimum by branch and bound over rows (bottom-up).
 *
 * Prunes on remaining coverage potential and a fractional-knapsack bound per ray.
 * An optional incumbent selection seeds the upper bound.
 */
inline RcpResult solve_exact(const RcpInstance& inst, const std::optional<Selection>& incumbent = std::nullopt,
                             std::size_t node_limit = 0)
{
	const auto H = detail::ray_hits(inst);
	for (std::size_t i = 0; i < H.hits.size(); ++i) {
		i64 pot = 0;
		for (auto [k, q] : H.hits[i])
			pot += inst.rows[k].rects[q].p;
		if (pot < H.demand[i])
			return RcpResult{};
	}
	const std::size_t n = inst.rows.size();
	mpz_class lcm = 1;
	for (const Row& w : inst.rows)
		for (const Rect& r : w.rects)
			mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), r.c.get_den_mpz_t());
	mpz_class total = 0;
	std::vector<std::vector<mpz_class>> zc(n);
	for (std::size_t k = 0; k < n; ++k) {
		zc[k].push_back(0);
		for (const Rect& r : inst.rows[k].rects) {
			Q scaled = r.c * lcm;
			zc[k].push_back(zc[k].back() + scaled.get_num());
		}
		total += zc[k].back();
	}
	std::optional<std::vector<int>> inc;
	if (incumbent && is_feasible(inst, *incumbent))
		inc = to_prefix(inst, *incumbent);
	auto finish = [&](const std::vector<int>& pv) {
		RcpResult res;
		res.feasible = true;
		res.sel = from_prefix(inst, pv);
		res.cost = selection_cost(inst, res.sel);
		return res;
	};
	const mpz_class cap = mpz_class(1) << 60;
	if (total * (mpz_class(1) << 8) < cap) {
		std::vector<std::vector<i64>> pc(n);
		for (std::size_t k = 0; k < n; ++k)
			for (const auto& z : zc[k])
				pc[k].push_back(z.get_si());
		detail::PrefixBnB<i64> bb(inst, pc, H);
		bb.node_limit = node_limit;
		if (inc) {
			bb.have = true;
			bb.bestv = *inc;
			bb.best = 0;
			for (std::size_t k = 0; k < n; ++k)
				bb.best += pc[k][(*inc)[k]];
		}
		bb.dfs(0);
		return bb.have ? finish(bb.bestv) : RcpResult{};
	}
	std::vector<std::vector<Q>> pc(n);
	for (std::size_t k = 0; k < n; ++k) {
		pc[k].push_back(0);
		for (const Rect& r : inst.rows[k].rects)
			pc[k].push_back(pc[k].back() + r.c);
	}
	detail::PrefixBnB<Q> bb(inst, pc, H);
	bb.node_limit = node_limit;
	if (inc) {
		bb.have = true;
		bb.bestv = *inc;
		bb.best = 0;
		for (std::size_t k = 0; k < n; ++k)
			bb.best += pc[k][(*inc)[k]];
	}
	bb.dfs(0);
	return bb.have ? finish(bb.bestv) : RcpResult{};
}

/** \brief Old-to-new x-coordinate map produced by strip_compress. */
struct CoordMap {
	std::vector<std::pair<i64, i64>> points;
	i64 map(i64 x) const
	{
		auto it = std::lower_bound(points.begin(), points.end(), std::make_pair(x, std::numeric_limits<i64>::min()));
		if (it == points.end() || it->first != x)
			throw std::out_of_range("coordinate not in map");
		return it->second;
	}
};

/**
 * \brief Removes empty vertical strips.
 *
 * Every rectangle endpoint and every ray position t (with t+1) is kept; all other
 * columns carry no information, so each gap between kept points shrinks to width 1
 * and the leftmost point moves to 0. Rectangle ids are unchanged.
 */
inline std::pair<RcpInstance, CoordMap> strip_compress(const RcpInstance& inst)
{
	std::set<i64> P;
	for (const Row& w : inst.rows)
		for (const Rect& r : w.rects) {
			P.insert(r.a);
			P.insert(r.b);
		}
	for (const Ray& l : inst.rays) {
		P.insert(l.t);
		P.insert(l.t + 1);
	}
	CoordMap cm;
	i64 k = 0;
	for (i64 x : P)
		cm.points.push_back({x, k++});
	RcpInstance out = inst;
	for (Row& w : out.rows)
		for (Rect& r : w.rects) {
			r.a = cm.map(r.a);
			r.b = cm.map(r.b);
		}
	for (Ray& l : out.rays)
		l.t = cm.map(l.t);
	return {out, cm};
}

/** \brief Output of round_costs for one guess of the costliest optimal rectangle. */
struct RoundResult {
	RcpInstance inst;
	Selection forced;
	Q forced_cost = 0;
	std::vector<std::pair<int, Q>> new_costs;
	Q cheap_threshold = 0;
	std::optional<int> rmax;
};

/** \brief Removes the rectangles in `drop` and reduces ray demands by the coverage of `forced`. */
inline void reduce_by_forced(RcpInstance& inst, const std::vector<std::pair<i64, Rect>>& forced)
{
	for (Ray& l : inst.rays)
		for (const auto& [y, r] : forced)
			if (y <= l.s && r.a <= l.t && l.t < r.b)
				l.d = std::max<i64>(0, l.d - r.p);
}

/**
 * \brief Cost rounding for a guessed costliest rectangle of an optimum.
 *
 * Discards rectangles costlier than c(R_max) together with everything to their right,
 * forces rows whose remaining costs are all at most eps c(R_max)/|R|, rounds the rest up
 * to powers of (1+eps) and rescales to integers. With no guess everything is discarded.
 */
inline RoundResult round_costs(const RcpInstance& inst, const Q& eps, std::optional<int> rmax)
{
	RoundResult rr;
	rr.rmax = rmax;
	rr.inst.rays = inst.rays;
	if (!rmax)
		return rr;
	Q cmax = -1;
	for (const Row& w : inst.rows)
		for (const Rect& r : w.rects)
			if (r.id == *rmax)
				cmax = r.c;
	if (cmax < 0)
		throw std::invalid_argument("R_max id not found");
	const Q nR = Q(static_cast<long>(rect_count(inst)));
	const Q K = rcp_K(inst);
	rr.cheap_threshold = eps * cmax / nR;
	const Q scale = nR * K / (eps * eps * cmax);
	std::vector<std::pair<i64, Rect>> forced;
	for (const Row& w : inst.rows) {
		Row kept{w.y, {}};
		for (const Rect& r : w.rects) {
			if (r.c > cmax)
				break;
			kept.rects.push_back(r);
		}
		if (kept.rects.empty())
			continue;
		bool cheap = std::all_of(kept.rects.begin(), kept.rects.end(),
		                         [&](const Rect& r) { return r.c <= rr.cheap_threshold; });
		if (cheap) {
			for (const Rect& r : kept.rects) {
				forced.push_back({w.y, r});
				rr.forced.push_back(r.id);
				rr.forced_cost += r.c;
			}
			continue;
		}
		for (Rect& r : kept.rects) {
			Q tilde = pow_q(1 + eps, bucket_exp(r.c, 1 + eps));
			if (tilde < r.c)
				tilde *= (1 + eps);
			r.c = Q(ceil_q(scale * tilde));
			rr.new_costs.push_back({r.id, r.c});
		}
		rr.inst.rows.push_back(std::move(kept));
	}
	reduce_by_forced(rr.inst, forced);
	std::sort(rr.forced.begin(), rr.forced.end());
	return rr;
}

/** \brief Well-structuredness check: with 2^h <= b-a < 2^(h+1), a and b lie on delta 2^h Z. */
inline std::vector<std::string> check_well_structured(const RcpInstance& inst, const Q& delta)
{
	std::vector<std::string> bad;
	for (const Row& w : inst.rows)
		for (const Rect& r : w.rects) {
			Q unit = delta * pow_q(Q(2), floor_log2(r.b - r.a));
			for (i64 x : {r.a, r.b}) {
				Q q = Q(x) / unit;
				q.canonicalize();
				if (q.get_den() != 1)
					bad.push_back("rectangle " + std::to_string(r.id) + " [" + std::to_string(r.a) + "," +
					              std::to_string(r.b) + ") endpoint " + std::to_string(x) + " off grid " +
					              q_str(unit));
			}
		}
	return bad;
}

} // namespace gspkit

#endif // GSPKIT_RCP_HPP
