#ifndef GSPKIT_BASE_DP_HPP
#define GSPKIT_BASE_DP_HPP

#include "gspkit/rcp.hpp"

#include <map>
#include <optional>
#include <vector>

namespace gspkit {

/** \brief An RCP restricted to the strip [L, R); rays outside it are out-rays. */
struct Subproblem {
	i64 L = 0;
	i64 R = 1;
	RcpInstance inst;
	bool interior(const Ray& l) const { return L <= l.t && l.t < R; }
};

/**
 * \brief Exact solver for a width-1 strip [x, x+1).
 *
 * Rows are processed top to bottom. The state is the row, the demand still owed at
 * column x by the rows from here down, and the clamped residual demand of every
 * out-ray. Memoized over states; ties keep the smaller prefix in the upper row.
 */
inline RcpResult base_case_dp(const Subproblem& sp)
{
	if (sp.R - sp.L != 1)
		throw std::invalid_argument("base_case_dp needs a width-1 strip");
	const i64 x = sp.L;
	std::vector<const Row*> rows;
	for (auto it = sp.inst.rows.rbegin(); it != sp.inst.rows.rend(); ++it)
		rows.push_back(&*it);
	const std::size_t n = rows.size();
	std::vector<i64> need(n + 1, 0);
	std::vector<Ray> outs;
	for (const Ray& l : sp.inst.rays) {
		if (l.d <= 0)
			continue;
		if (!sp.interior(l)) {
			outs.push_back(l);
			continue;
		}
		std::size_t k = 0;
		while (k < n && rows[k]->y > l.s)
			++k;
		if (k == n)
			return RcpResult{};
		need[k] = std::max(need[k], l.d);
	}
	std::vector<int> at_x(n, -1);
	std::vector<std::vector<std::pair<int, int>>> out_hits(n);
	for (std::size_t k = 0; k < n; ++k) {
		const auto& R = rows[k]->rects;
		for (std::size_t q = 0; q < R.size(); ++q) {
			if (R[q].a <= x && x < R[q].b)
				at_x[k] = static_cast<int>(q);
			for (std::size_t i = 0; i < outs.size(); ++i)
				if (rows[k]->y <= outs[i].s && R[q].a <= outs[i].t && outs[i].t < R[q].b)
					out_hits[k].push_back({static_cast<int>(i), static_cast<int>(q)});
		}
	}
	struct Memo {
		bool ok;
		Q cost;
		int choice;
	};
	std::map<std::vector<i64>, Memo> memo;
	std::function<Memo(std::size_t, i64, std::vector<i64>&)> go = [&](std::size_t k, i64 r,
	                                                                   std::vector<i64>& res) -> Memo {
		if (k == n) {
			bool ok = r <= 0;
			for (i64 v : res)
				ok = ok && v <= 0;
			return {ok, 0, 0};
		}
		std::vector<i64> key;
		key.reserve(res.size() + 2);
		key.push_back(static_cast<i64>(k));
		key.push_back(r);
		key.insert(key.end(), res.begin(), res.end());
		if (auto it = memo.find(key); it != memo.end())
			return it->second;
		const auto& R = rows[k]->rects;
		const i64 p = R.empty() ? 0 : R[0].p;
		const i64 cur = std::max(r, need[k]);
		Memo best{false, 0, 0};
		Q pref = 0;
		for (int len = 0; len <= static_cast<int>(R.size()); ++len) {
			if (len > 0)
				pref += R[len - 1].c;
			if (best.ok && !(pref < best.cost))
				break;
			i64 nr = cur - ((at_x[k] >= 0 && len > at_x[k]) ? p : 0);
			nr = std::max<i64>(nr, 0);
			std::vector<i64> nres = res;
			for (auto [i, q] : out_hits[k])
				if (len > q)
					nres[i] = std::max<i64>(0, nres[i] - p);
			Memo sub = go(k + 1, nr, nres);
			if (sub.ok && (!best.ok || pref + sub.cost < best.cost))
				best = {true, pref + sub.cost, len};
		}
		memo[key] = best;
		return best;
	};
	std::vector<i64> res0;
	for (const Ray& l : outs)
		res0.push_back(l.d);
	Memo top = go(0, 0, res0);
	if (!top.ok)
		return RcpResult{};
	Selection sel;
	i64 r = 0;
	std::vector<i64> res = res0;
	for (std::size_t k = 0; k < n; ++k) {
		Memo m = go(k, r, res);
		const auto& R = rows[k]->rects;
		const i64 p = R.empty() ? 0 : R[0].p;
		for (int q = 0; q < m.choice; ++q)
			sel.push_back(R[q].id);
		i64 cur = std::max(r, need[k]);
		r = std::max<i64>(0, cur - ((at_x[k] >= 0 && m.choice > at_x[k]) ? p : 0));
		for (auto [i, q] : out_hits[k])
			if (m.choice > q)
				res[i] = std::max<i64>(0, res[i] - p);
	}
	std::sort(sel.begin(), sel.end());
	return RcpResult{true, sel, top.cost};
}

} // namespace gspkit

#endif // GSPKIT_BASE_DP_HPP
