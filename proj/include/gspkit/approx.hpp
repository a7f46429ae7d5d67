#ifndef GSPKIT_APPROX_HPP
#define GSPKIT_APPROX_HPP

#include "gspkit/base_dp.hpp"
#include "gspkit/rcp.hpp"

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gspkit {

/** \brief Position of a row relative to an area A = [L, R). */
enum class RowClass { Centered, RightSticking, LeftSticking, Spanning, Outside };

inline const char* row_class_name(RowClass c)
{
	switch (c) {
	case RowClass::Centered:
		return "centered";
	case RowClass::RightSticking:
		return "right-sticking-in";
	case RowClass::LeftSticking:
		return "left-sticking-in";
	case RowClass::Spanning:
		return "spanning";
	default:
		return "outside";
	}
}

/** \brief Four-way classification; rows with no rectangle meeting [L, R) are Outside. */
inline RowClass classify_row(const Row& w, i64 L, i64 R)
{
	bool meets = false, all_inside = true, all_right_of_L = true, all_left_of_R = true;
	bool some_at_L = false, some_at_R = false;
	for (const Rect& r : w.rects) {
		meets = meets || (r.a < R && r.b > L);
		all_inside = all_inside && L < r.a && r.b < R;
		all_right_of_L = all_right_of_L && r.a > L;
		all_left_of_R = all_left_of_R && r.b < R;
		some_at_L = some_at_L || r.a <= L;
		some_at_R = some_at_R || r.b >= R;
	}
	if (!meets)
		return RowClass::Outside;
	if (all_inside)
		return RowClass::Centered;
	if (some_at_L && some_at_R)
		return RowClass::Spanning;
	if (all_right_of_L && some_at_R)
		return RowClass::RightSticking;
	(void)all_left_of_R;
	return RowClass::LeftSticking;
}

inline std::vector<RowClass> classify_rows(const Subproblem& sp)
{
	std::vector<RowClass> out;
	for (const Row& w : sp.inst.rows)
		out.push_back(classify_row(w, sp.L, sp.R));
	return out;
}

/**
 * \brief Auxiliary cost: centered rectangles and left-sticking rectangles starting right of L
 * count twice, everything else once.
 */
inline Q c_apx(const Subproblem& sp, const Selection& sel)
{
	std::set<int> s(sel.begin(), sel.end());
	Q total = 0;
	for (const Row& w : sp.inst.rows) {
		RowClass cls = classify_row(w, sp.L, sp.R);
		for (const Rect& r : w.rects) {
			if (!s.count(r.id))
				continue;
			bool twice = cls == RowClass::Centered || (cls == RowClass::LeftSticking && r.a > sp.L);
			total += twice ? 2 * r.c : r.c;
		}
	}
	return total;
}

/** \brief Global parameters of one recursive run: accuracy, root K and log2 of the root width. */
struct ApproxParams {
	Q eps = Q(1, 4);
	Q K = 1;
	i64 logT = 1;
};

enum class Side { Left = 0, Right = 1, Span = 2 };

inline const char* side_name(Side s) { return s == Side::Left ? "left" : (s == Side::Right ? "right" : "span"); }

/** \brief Group identity: side, exact cost of the row's leftmost rectangle, value bucket. */
struct GroupKey {
	Side side = Side::Left;
	Q c = 0;
	i64 pexp = 0;
	bool operator<(const GroupKey& o) const
	{
		if (side != o.side)
			return side < o.side;
		if (c != o.c)
			return c < o.c;
		return pexp < o.pexp;
	}
};

/** \brief A group of mid-straddling rows; members are row indices of the subproblem, bottom to top. */
struct Group {
	GroupKey key;
	std::vector<std::size_t> rows;
};

inline i64 area_mid(const Subproblem& sp) { return (sp.L + sp.R) / 2; }

/** \brief Index of the rectangle containing x in a row, or -1. */
inline int piece_at(const Row& w, i64 x)
{
	for (std::size_t q = 0; q < w.rects.size(); ++q)
		if (w.rects[q].a <= x && x < w.rects[q].b)
			return static_cast<int>(q);
	return -1;
}

/**
 * \brief Groups the rows crossing the middle.
 *
 * Right-sticking and spanning rows qualify through a rectangle with left < mid <= right,
 * left-sticking rows through one with left <= mid < right.
 */
inline std::vector<Group> group_rows(const Subproblem& sp, const Q& eps)
{
	const i64 mid = area_mid(sp);
	std::map<GroupKey, std::vector<std::size_t>> m;
	for (std::size_t k = 0; k < sp.inst.rows.size(); ++k) {
		const Row& w = sp.inst.rows[k];
		if (w.rects.empty())
			continue;
		RowClass cls = classify_row(w, sp.L, sp.R);
		Side side;
		bool in = false;
		if (cls == RowClass::RightSticking || cls == RowClass::Spanning) {
			side = cls == RowClass::Spanning ? Side::Span : Side::Right;
			for (const Rect& r : w.rects)
				in = in || (r.a < mid && mid <= r.b);
		} else if (cls == RowClass::LeftSticking) {
			side = Side::Left;
			for (const Rect& r : w.rects)
				in = in || (r.a <= mid && mid < r.b);
		} else {
			continue;
		}
		if (!in)
			continue;
		GroupKey key{side, w.rects.front().c, bucket_exp(Q(w.rects.front().p), 1 + eps)};
		m[key].push_back(k);
	}
	std::vector<Group> out;
	for (auto& [k, v] : m)
		out.push_back(Group{k, v});
	return out;
}

/** \brief Large-group threshold test: n >= 2 K logT / eps. */
inline bool is_large(i64 n, const ApproxParams& prm) { return Q(n) * prm.eps >= 2 * prm.K * prm.logT; }

/** \brief Number of rows added to a large group: floor(eps n / (2 K logT)). */
inline i64 added_rows(i64 n, const ApproxParams& prm) { return floor_q(Q(n) * prm.eps / (2 * prm.K * prm.logT)); }

/** \brief True iff the first `len` rectangles of the row meet [L, R). */
inline bool prefix_meets(const Row& w, int len, i64 L, i64 R)
{
	for (int q = 0; q < len; ++q)
		if (w.rects[q].a < R && w.rects[q].b > L)
			return true;
	return false;
}

/** \brief Number of leading rectangles of the row contained in the selection. */
inline int prefix_len(const Row& w, const std::set<int>& s)
{
	int len = 0;
	while (len < static_cast<int>(w.rects.size()) && s.count(w.rects[len].id))
		++len;
	return len;
}

/** \brief Length of the prefix that ends with the anchor rectangle (the one at L for left groups, at mid otherwise). */
inline int anchor_len(const Subproblem& sp, const Row& w, Side side)
{
	int q = piece_at(w, side == Side::Left ? sp.L : area_mid(sp));
	if (q < 0)
		throw std::logic_error("group row has no anchor rectangle");
	return q + 1;
}

/** \brief Filled test: a selected rectangle meets A (left groups) or the rectangle at mid is selected. */
inline bool row_filled(const Subproblem& sp, const Row& w, Side side, const std::set<int>& s)
{
	if (side == Side::Left) {
		for (const Rect& r : w.rects)
			if (s.count(r.id) && r.a < sp.R && r.b > sp.L)
				return true;
		return false;
	}
	int q = piece_at(w, area_mid(sp));
	return q >= 0 && s.count(w.rects[q].id);
}

/** \brief Per-group outcome of augment_reference. */
struct GroupStat {
	GroupKey key;
	std::size_t size = 0;
	i64 n = 0;
	bool large = false;
	i64 add = 0;
	std::vector<i64> added_y;
	int filled = 0;
};

/** \brief S plus the augmentation statistics. */
struct Augmented {
	Selection splus;
	std::vector<GroupStat> stats;
};

/**
 * \brief Builds S+ from a feasible reference S.
 *
 * For each large group the bottom-most floor(eps n/(2 K logT)) rows that are not filled by S
 * are added in full. The filled count is the number of consecutive filled rows from the
 * bottom; all rows at or above the first unfilled row are the group's top rows (when every
 * row is filled the boundary is a virtual row above the group).
 */
inline Augmented augment_reference(const Subproblem& sp, const std::vector<Group>& groups, const Selection& S,
                                   const ApproxParams& prm)
{
	std::set<int> s(S.begin(), S.end());
	std::set<int> plus = s;
	Augmented out;
	for (const Group& g : groups) {
		GroupStat st;
		st.key = g.key;
		st.size = g.rows.size();
		for (std::size_t k : g.rows)
			if (prefix_meets(sp.inst.rows[k], prefix_len(sp.inst.rows[k], s), sp.L, sp.R))
				++st.n;
		st.large = is_large(st.n, prm);
		if (st.large) {
			st.add = added_rows(st.n, prm);
			i64 left = st.add;
			for (std::size_t k : g.rows) {
				if (left == 0)
					break;
				const Row& w = sp.inst.rows[k];
				if (row_filled(sp, w, g.key.side, s))
					continue;
				for (const Rect& r : w.rects)
					plus.insert(r.id);
				st.added_y.push_back(w.y);
				--left;
			}
			while (st.filled < static_cast<int>(g.rows.size()) &&
			       row_filled(sp, sp.inst.rows[g.rows[st.filled]], g.key.side, plus))
				++st.filled;
		}
		out.stats.push_back(st);
	}
	out.splus.assign(plus.begin(), plus.end());
	return out;
}

/** \brief Checks c(S+) <= (1 + eps/logT) c(S). */
inline bool check_splus_budget(const Subproblem& sp, const Selection& S, const Selection& splus, const ApproxParams& prm)
{
	return selection_cost(sp.inst, splus) <= (1 + prm.eps / prm.logT) * selection_cost(sp.inst, S);
}

/**
 * \brief Checks the coverage surplus: every ray on the group's side of mid that meets a top row
 * gains at least (1+eps)^p' floor(eps n/(2 K logT)) from the group's rows.
 * Returns a description of the first violation, or an empty string.
 */
inline std::string check_surplus(const Subproblem& sp, const std::vector<Group>& groups, const Selection& S,
                                 const Augmented& aug, const ApproxParams& prm)
{
	std::set<int> s(S.begin(), S.end());
	std::set<int> plus(aug.splus.begin(), aug.splus.end());
	const i64 mid = area_mid(sp);
	for (std::size_t gi = 0; gi < groups.size(); ++gi) {
		const Group& g = groups[gi];
		const GroupStat& st = aug.stats[gi];
		if (!st.large || st.filled >= static_cast<int>(g.rows.size()))
			continue;
		const Q gain = pow_q(1 + prm.eps, g.key.pexp) * st.add;
		const i64 t0 = g.key.side == Side::Left ? sp.L : mid;
		const i64 t1 = g.key.side == Side::Left ? mid : sp.R;
		for (i64 t = t0; t < t1; ++t)
			for (std::size_t k : g.rows) {
				const i64 sy = sp.inst.rows[k].y;
				bool hits_top = false;
				for (std::size_t q = st.filled; q < g.rows.size(); ++q) {
					const Row& w = sp.inst.rows[g.rows[q]];
					hits_top = hits_top || (w.y <= sy && piece_at(w, t) >= 0);
				}
				if (!hits_top)
					continue;
				i64 before = 0, after = 0;
				for (std::size_t q : g.rows) {
					const Row& w = sp.inst.rows[q];
					if (w.y > sy)
						continue;
					int at = piece_at(w, t);
					if (at < 0)
						continue;
					if (s.count(w.rects[at].id))
						before += w.rects[at].p;
					if (plus.count(w.rects[at].id))
						after += w.rects[at].p;
				}
				if (Q(after) < Q(before) + gain)
					return "surplus violated at t=" + std::to_string(t) + " s=" + std::to_string(sy);
			}
	}
	return {};
}

/** \brief One row fed to the step-function construction: value, group and right end of its selected prefix. */
struct StepRow {
	i64 y = 0;
	i64 p = 0;
	int group = 0;
	i64 reach = std::numeric_limits<i64>::min();
};

/** \brief An axis-parallel step [xl, xr) x [yb, yt) with constant value f. */
struct Step {
	i64 xl, xr, yb, yt, f;
};

inline constexpr i64 kBandBottom = std::numeric_limits<i64>::min();
inline constexpr i64 kBandTop = std::numeric_limits<i64>::max();

/** \brief Piecewise-constant function on [xa, xb) x R, stored as horizontal bands with their own cuts. */
struct StepFunction {
	i64 xa = 0;
	i64 xb = 0;
	std::vector<i64> band_y{kBandBottom};
	std::vector<std::vector<i64>> cuts;
	std::vector<std::vector<i64>> vals;

	i64 value(i64 t, i64 s) const
	{
		if (t < xa || t >= xb)
			return 0;
		auto it = std::upper_bound(band_y.begin(), band_y.end(), s);
		std::size_t k = static_cast<std::size_t>(it - band_y.begin()) - 1;
		const auto& c = cuts[k];
		auto jt = std::upper_bound(c.begin(), c.end(), t);
		return vals[k][static_cast<std::size_t>(jt - c.begin()) - 1];
	}

	std::vector<Step> steps() const
	{
		std::vector<Step> out;
		for (std::size_t k = 0; k < band_y.size(); ++k) {
			i64 yt = k + 1 < band_y.size() ? band_y[k + 1] : kBandTop;
			for (std::size_t j = 0; j + 1 < cuts[k].size(); ++j)
				out.push_back(Step{cuts[k][j], cuts[k][j + 1], band_y[k], yt, vals[k][j]});
		}
		return out;
	}

	/** \brief Artificial ray per positive step at its bottom-right integer point. */
	std::vector<Ray> rays() const
	{
		std::vector<Ray> out;
		for (const Step& q : steps())
			if (q.f > 0)
				out.push_back(Ray{q.yb, q.xr - 1, q.f});
		return out;
	}
};

/** \brief Coverage g(t, s) of the selected prefixes of step rows. */
inline i64 step_coverage(const std::vector<StepRow>& rows, i64 t, i64 s)
{
	i64 g = 0;
	for (const StepRow& r : rows)
		if (r.y <= s && t < r.reach)
			g += r.p;
	return g;
}

/** \brief X = 8 K logT / eps. */
inline Q step_X(const ApproxParams& prm) { return 8 * prm.K * prm.logT / prm.eps; }

/** \brief Step-count bound per side: ((X+1)|G|+1)(X|G|+1). */
inline Q step_bound(const ApproxParams& prm, std::size_t ngroups)
{
	Q X = step_X(prm);
	Q G(static_cast<long>(ngroups));
	return ((X + 1) * G + 1) * (X * G + 1);
}

/**
 * \brief Step function under-approximating the coverage of rows spanning [xa, xb).
 *
 * Horizontal cuts: per group all rows when the group has at most X rows, otherwise a greedy
 * bottom-up choice leaving at most floor(nbar/X) active rows strictly between consecutive cuts.
 * Per band, vertical cuts are placed greedily so that each step contains at most
 * floor(nbar_g/X) prefix ends of every group (unit steps when xb - xa <= X). The value of a
 * step is the coverage at its bottom-right integer point.
 */
inline StepFunction build_step_function(i64 xa, i64 xb, const std::vector<StepRow>& rows, std::size_t ngroups,
                                        const ApproxParams& prm)
{
	StepFunction f;
	f.xa = xa;
	f.xb = xb;
	const Q X = step_X(prm);
	std::vector<std::vector<const StepRow*>> by_group(ngroups);
	for (const StepRow& r : rows)
		by_group.at(static_cast<std::size_t>(r.group)).push_back(&r);
	std::vector<i64> allow(ngroups, 0);
	std::set<i64> bands;
	for (std::size_t g = 0; g < ngroups; ++g) {
		auto& v = by_group[g];
		std::sort(v.begin(), v.end(), [](const StepRow* a, const StepRow* b) { return a->y < b->y; });
		i64 nbar = 0;
		for (const StepRow* r : v)
			nbar += r->reach > xa ? 1 : 0;
		allow[g] = floor_q(Q(nbar) / X);
		if (v.empty())
			continue;
		if (Q(static_cast<long>(v.size())) <= X) {
			for (const StepRow* r : v)
				bands.insert(r->y);
			continue;
		}
		std::size_t cur = 0;
		bands.insert(v[0]->y);
		while (true) {
			i64 above = 0;
			for (std::size_t j = cur + 1; j < v.size(); ++j)
				above += v[j]->reach > xa ? 1 : 0;
			if (above <= allow[g])
				break;
			std::size_t best = cur + 1;
			i64 between = 0;
			for (std::size_t j = cur + 1; j < v.size(); ++j) {
				if (between > allow[g])
					break;
				best = j;
				between += v[j]->reach > xa ? 1 : 0;
			}
			cur = best;
			bands.insert(v[cur]->y);
		}
	}
	for (i64 y : bands)
		f.band_y.push_back(y);
	const bool unit = Q(xb - xa) <= X;
	for (std::size_t k = 0; k < f.band_y.size(); ++k) {
		const i64 sb = f.band_y[k];
		std::vector<i64> c{xa};
		if (k == 0) {
			c.push_back(xb);
		} else if (unit) {
			for (i64 x = xa + 1; x <= xb; ++x)
				c.push_back(x);
		} else {
			std::vector<std::vector<i64>> ends(ngroups);
			for (const StepRow& r : rows)
				if (r.y <= sb && r.reach > xa)
					ends[static_cast<std::size_t>(r.group)].push_back(r.reach);
			for (auto& e : ends)
				std::sort(e.begin(), e.end());
			i64 x = xa;
			while (x < xb) {
				i64 nx = xb;
				for (std::size_t g = 0; g < ngroups; ++g) {
					auto it = std::upper_bound(ends[g].begin(), ends[g].end(), x);
					auto left = static_cast<i64>(ends[g].end() - it);
					if (left > allow[g])
						nx = std::min(nx, *(it + allow[g]));
				}
				c.push_back(nx);
				x = nx;
			}
		}
		std::vector<i64> v;
		for (std::size_t j = 0; j + 1 < c.size(); ++j)
			v.push_back(k == 0 ? 0 : step_coverage(rows, c[j + 1] - 1, sb));
		f.cuts.push_back(std::move(c));
		f.vals.push_back(std::move(v));
	}
	return f;
}

/**
 * \brief Checks f <= g <= f + sum over groups with a row at or below s of (1+eps)^p' floor(eps nbar/(2 K logT))
 * at every integer t in [xa, xb) and every relevant s. Returns the first violation or an empty string.
 */
inline std::string check_sandwich(const StepFunction& f, const std::vector<StepRow>& rows,
                                  const std::vector<i64>& group_pexp, const ApproxParams& prm)
{
	std::vector<i64> nbar(group_pexp.size(), 0);
	std::set<i64> ys;
	for (const StepRow& r : rows) {
		nbar[static_cast<std::size_t>(r.group)] += r.reach > f.xa ? 1 : 0;
		ys.insert(r.y);
	}
	std::vector<i64> probe;
	if (!ys.empty())
		probe.push_back(*ys.begin() - 1);
	for (i64 y : ys) {
		probe.push_back(y);
		probe.push_back(y + 1);
	}
	for (i64 s : probe) {
		Q slack = 0;
		std::vector<char> hit(group_pexp.size(), 0);
		for (const StepRow& r : rows)
			if (r.y <= s)
				hit[static_cast<std::size_t>(r.group)] = 1;
		for (std::size_t g = 0; g < group_pexp.size(); ++g)
			if (hit[g])
				slack += pow_q(1 + prm.eps, group_pexp[g]) * added_rows(nbar[g], prm);
		for (i64 t = f.xa; t < f.xb; ++t) {
			i64 fv = f.value(t, s);
			i64 gv = step_coverage(rows, t, s);
			if (fv > gv || Q(gv) > Q(fv) + slack)
				return "sandwich violated at t=" + std::to_string(t) + " s=" + std::to_string(s) + " f=" +
				       std::to_string(fv) + " g=" + std::to_string(gv);
		}
	}
	return {};
}

/** \brief Guessed quantities for one split: per-group size class, prefixes, filled counts and out-ray splits. */
struct NodeGuess {
	std::vector<char> large;
	std::vector<std::vector<int>> prefix;
	std::vector<int> filled;
	std::vector<i64> out_left;
};

/** \brief One recorded cost change made while splitting a centered row. */
struct CostAdjust {
	int id = 0;
	bool right_child = true;
	Q before = 0;
	Q after = 0;
};

/** \brief Output of split_subproblem. */
struct SplitResult {
	bool ok = true;
	std::string why;
	Selection apx_mid;
	Q apx_mid_cost = 0;
	Subproblem left, right;
	std::vector<CostAdjust> ledger;
	StepFunction f_left, f_right;
	std::vector<StepRow> rows_left, rows_right;
	std::vector<i64> pexp_left, pexp_right;
};

/** \brief Coverage of a fixed set of (row, rectangle) pieces on a ray. */
inline i64 coverage_of(const Subproblem& sp, const std::set<int>& ids, const Ray& l)
{
	i64 c = 0;
	for (const Row& w : sp.inst.rows) {
		if (w.y > l.s)
			continue;
		for (const Rect& r : w.rects)
			if (ids.count(r.id) && r.a <= l.t && l.t < r.b)
				c += r.p;
	}
	return c;
}

namespace detail {

/** \brief Splits the row part `rem` of a centered treatment between the two children. */
inline void treat_centered(i64 y, const std::vector<Rect>& rem, i64 mid, std::map<i64, Row>& left,
                           std::map<i64, Row>& right, std::vector<CostAdjust>& ledger)
{
	std::vector<Rect> wl, wr;
	int straddle = -1;
	for (std::size_t q = 0; q < rem.size(); ++q) {
		if (rem[q].b <= mid)
			wl.push_back(rem[q]);
		else if (rem[q].a >= mid)
			wr.push_back(rem[q]);
		else
			straddle = static_cast<int>(q);
	}
	Q sum_left = 0;
	for (const Rect& r : wl)
		sum_left += r.c;
	if (straddle >= 0) {
		Rect m = rem[static_cast<std::size_t>(straddle)];
		Rect lh = m, rh = m;
		lh.b = mid;
		rh.a = mid;
		rh.c = sum_left + m.c;
		wl.push_back(lh);
		wr.insert(wr.begin(), rh);
		if (sum_left != 0)
			ledger.push_back(CostAdjust{m.id, true, m.c, rh.c});
	} else if (!wl.empty() && !wr.empty()) {
		Q before = wr.front().c;
		wr.front().c += sum_left;
		ledger.push_back(CostAdjust{wr.front().id, true, before, wr.front().c});
	}
	if (!wl.empty())
		left[y] = Row{y, wl};
	if (!wr.empty())
		right[y] = Row{y, wr};
}

inline RcpInstance rows_to_inst(const std::map<i64, Row>& m)
{
	RcpInstance in;
	for (const auto& [y, w] : m)
		in.rows.push_back(w);
	return in;
}

} // namespace detail

/**
 * \brief Splits a subproblem of width >= 2 into its two halves under the given guesses.
 *
 * APX_mid takes the guessed prefixes of small groups and, in large groups, the prefix through
 * the anchor rectangle of every row below the filled boundary. Rows above the boundary feed the
 * step functions; their artificial rays go to the opposite child. Centered rows (and interior
 * remainders of left-sticking rows) are split at mid with cost reassignment.
 */
inline SplitResult split_subproblem(const Subproblem& sp, const std::vector<Group>& groups, const NodeGuess& guess,
                                    const ApproxParams& prm)
{
	SplitResult res;
	const i64 mid = area_mid(sp);
	const auto& rows = sp.inst.rows;
	std::vector<int> apxlen(rows.size(), 0);
	std::set<int> apx;
	std::size_t nleft_groups = 0, nright_groups = 0;
	std::vector<int> gindex(groups.size(), -1);
	for (std::size_t gi = 0; gi < groups.size(); ++gi) {
		const Group& g = groups[gi];
		bool left_side = g.key.side == Side::Left;
		if (guess.prefix[gi].size() != g.rows.size()) {
			res.ok = false;
			res.why = "prefix guess size mismatch";
			return res;
		}
		if (!guess.large[gi]) {
			for (std::size_t k = 0; k < g.rows.size(); ++k)
				apxlen[g.rows[k]] = guess.prefix[gi][k];
			continue;
		}
		int F = guess.filled[gi];
		if (F < 0 || F > static_cast<int>(g.rows.size())) {
			res.ok = false;
			res.why = "filled count outside group";
			return res;
		}
		for (int k = 0; k < F; ++k)
			apxlen[g.rows[k]] = anchor_len(sp, rows[g.rows[k]], g.key.side);
		if (F == static_cast<int>(g.rows.size()))
			continue;
		int local = static_cast<int>(left_side ? nleft_groups++ : nright_groups++);
		gindex[gi] = local;
		(left_side ? res.pexp_left : res.pexp_right).push_back(g.key.pexp);
		for (std::size_t k = static_cast<std::size_t>(F); k < g.rows.size(); ++k) {
			const Row& w = rows[g.rows[k]];
			int len = guess.prefix[gi][k];
			StepRow sr{w.y, w.rects.front().p, local,
			           len > 0 ? w.rects[static_cast<std::size_t>(len - 1)].b : std::numeric_limits<i64>::min()};
			(left_side ? res.rows_left : res.rows_right).push_back(sr);
		}
	}
	for (std::size_t k = 0; k < rows.size(); ++k)
		for (int q = 0; q < apxlen[k]; ++q) {
			apx.insert(rows[k].rects[static_cast<std::size_t>(q)].id);
			res.apx_mid_cost += rows[k].rects[static_cast<std::size_t>(q)].c;
		}
	res.apx_mid.assign(apx.begin(), apx.end());

	std::map<i64, Row> lrows, rrows;
	for (std::size_t k = 0; k < rows.size(); ++k) {
		const Row& w = rows[k];
		std::vector<Rect> rem(w.rects.begin() + apxlen[k], w.rects.end());
		if (rem.empty())
			continue;
		RowClass cls = classify_row(w, sp.L, sp.R);
		switch (cls) {
		case RowClass::Centered:
			detail::treat_centered(w.y, rem, mid, lrows, rrows, res.ledger);
			break;
		case RowClass::RightSticking:
		case RowClass::Spanning: {
			bool meets_left = false;
			for (const Rect& r : rem)
				meets_left = meets_left || (r.a < mid && r.b > sp.L);
			(meets_left ? lrows : rrows)[w.y] = Row{w.y, rem};
			break;
		}
		case RowClass::LeftSticking: {
			bool interior = true, all_left = true;
			for (const Rect& r : rem) {
				interior = interior && r.a > sp.L && r.b < sp.R;
				all_left = all_left && r.b <= mid;
			}
			if (interior)
				detail::treat_centered(w.y, rem, mid, lrows, rrows, res.ledger);
			else
				(all_left ? lrows : rrows)[w.y] = Row{w.y, rem};
			break;
		}
		default:
			(rem.front().a < mid ? lrows : rrows)[w.y] = Row{w.y, rem};
		}
	}
	res.left.L = sp.L;
	res.left.R = mid;
	res.right.L = mid;
	res.right.R = sp.R;
	res.left.inst = detail::rows_to_inst(lrows);
	res.right.inst = detail::rows_to_inst(rrows);

	res.f_left = build_step_function(sp.L, mid, res.rows_left, nleft_groups, prm);
	res.f_right = build_step_function(mid, sp.R, res.rows_right, nright_groups, prm);

	const auto& rays = sp.inst.rays;
	for (std::size_t k = 0; k < rays.size(); ++k) {
		const Ray& l = rays[k];
		if (l.d <= 0)
			continue;
		i64 cm = coverage_of(sp, apx, l);
		if (sp.interior(l)) {
			bool in_left = l.t < mid;
			i64 fv = (in_left ? res.f_left : res.f_right).value(l.t, l.s);
			i64 d = std::max<i64>(0, l.d - fv - cm);
			if (d > 0)
				(in_left ? res.left : res.right).inst.rays.push_back(Ray{l.s, l.t, d});
			continue;
		}
		i64 x = k < guess.out_left.size() ? std::clamp<i64>(guess.out_left[k], 0, l.d) : 0;
		if (x > 0)
			res.left.inst.rays.push_back(Ray{l.s, l.t, x});
		i64 rest = std::max<i64>(0, l.d - x - cm);
		if (rest > 0)
			res.right.inst.rays.push_back(Ray{l.s, l.t, rest});
	}
	for (const Ray& l : res.f_left.rays())
		res.right.inst.rays.push_back(l);
	for (const Ray& l : res.f_right.rays())
		res.left.inst.rays.push_back(l);
	return res;
}

/** \brief Union of APX_mid and the child selections, closed to prefixes over the parent rectangles. */
inline Selection combine_children(const Subproblem& sp, const Selection& apx_mid, const Selection& left,
                                  const Selection& right)
{
	std::vector<int> all = apx_mid;
	all.insert(all.end(), left.begin(), left.end());
	all.insert(all.end(), right.begin(), right.end());
	return prefix_closure(sp.inst, all);
}

/** \brief Guesses read off S+: prefixes, size classes and filled counts; out-ray splits from S+ on the left child. */
inline NodeGuess guess_from_reference(const Subproblem& sp, const std::vector<Group>& groups, const Augmented& aug)
{
	std::set<int> plus(aug.splus.begin(), aug.splus.end());
	NodeGuess g;
	for (std::size_t gi = 0; gi < groups.size(); ++gi) {
		g.large.push_back(aug.stats[gi].large ? 1 : 0);
		g.filled.push_back(aug.stats[gi].filled);
		std::vector<int> pv;
		for (std::size_t k : groups[gi].rows)
			pv.push_back(prefix_len(sp.inst.rows[k], plus));
		g.prefix.push_back(pv);
	}
	return g;
}

/** \brief Restriction of a selection to the rectangle ids present in a subproblem. */
inline Selection restrict_to(const Subproblem& sp, const Selection& sel)
{
	std::set<int> s(sel.begin(), sel.end());
	Selection out;
	for (const Row& w : sp.inst.rows)
		for (const Rect& r : w.rects)
			if (s.count(r.id))
				out.push_back(r.id);
	std::sort(out.begin(), out.end());
	return out;
}

/** \brief Raised when exhaustive mode would exceed its guess or depth caps. */
struct CapsExhausted : std::runtime_error {
	using std::runtime_error::runtime_error;
};

enum class ApproxMode { Oracle, Exhaustive };

struct ApproxOptions {
	ApproxParams params;
	ApproxMode mode = ApproxMode::Oracle;
	std::size_t cap_guesses = 100000;
	int cap_depth = 6;
};

/** \brief Per-node record of costs and inequality checks. */
struct NodeCertificate {
	int depth = 0;
	i64 L = 0;
	i64 R = 0;
	bool feasible = false;
	Q out_cost = 0;
	bool has_reference = false;
	Q ref_cost = 0;
	Q ref_capx = 0;
	Q level_bound = 0;
	bool level_ok = true;
	bool splus_budget_ok = true;
	bool surplus_ok = true;
	bool sandwich_ok = true;
	bool step_bound_ok = true;
	bool decomposition_ok = true;
	bool child_refs_ok = true;
	bool cost_combo_ok = true;
	std::size_t steps = 0;
	Q steps_bound = 0;
	std::size_t candidates = 0;
	std::string note;

	bool ok() const
	{
		return (feasible || !has_reference) && level_ok && splus_budget_ok && surplus_ok && sandwich_ok && step_bound_ok &&
		       decomposition_ok && child_refs_ok && cost_combo_ok;
	}
};

struct ApproxReport {
	std::vector<NodeCertificate> nodes;
	std::size_t candidates = 0;

	bool ok() const
	{
		for (const NodeCertificate& n : nodes)
			if (!n.ok())
				return false;
		return true;
	}

	std::vector<std::string> failures() const
	{
		std::vector<std::string> out;
		for (const NodeCertificate& n : nodes)
			if (!n.ok())
				out.push_back("node [" + std::to_string(n.L) + "," + std::to_string(n.R) + ") depth " +
				              std::to_string(n.depth) + ": " + (n.note.empty() ? "certificate failed" : n.note));
		return out;
	}
};

namespace detail {

/** \brief Achievable left-child coverage values of an out-ray, clamped to its demand. */
inline std::vector<i64> achievable_splits(const Subproblem& child, const Ray& l)
{
	std::set<i64> sums{0};
	for (const Row& w : child.inst.rows) {
		if (w.y > l.s || piece_at(w, l.t) < 0)
			continue;
		std::set<i64> next = sums;
		for (i64 v : sums)
			next.insert(std::min(l.d, v + w.rects.front().p));
		sums = std::move(next);
	}
	return {sums.begin(), sums.end()};
}

/** \brief Per-group guess options for exhaustive mode. */
struct GroupOption {
	bool large = false;
	int filled = 0;
	std::vector<int> prefix;
};

inline std::vector<GroupOption> group_options(const Subproblem& sp, const Group& g, const ApproxParams& prm,
                                              std::size_t cap)
{
	std::vector<GroupOption> out;
	const auto& rows = sp.inst.rows;
	const std::size_t m = g.rows.size();
	auto enumerate = [&](std::size_t from, auto&& accept, bool large, int filled) {
		std::vector<int> pv(m, 0);
		std::function<void(std::size_t)> rec = [&](std::size_t k) {
			if (out.size() > cap)
				throw CapsExhausted("guess cap exceeded while enumerating group prefixes");
			if (k == m) {
				if (accept(pv))
					out.push_back(GroupOption{large, filled, pv});
				return;
			}
			if (k < from) {
				rec(k + 1);
				return;
			}
			for (int len = 0; len <= static_cast<int>(rows[g.rows[k]].rects.size()); ++len) {
				pv[k] = len;
				rec(k + 1);
			}
			pv[k] = 0;
		};
		rec(0);
	};
	enumerate(
	    0,
	    [&](const std::vector<int>& pv) {
		    i64 n = 0;
		    for (std::size_t k = 0; k < m; ++k)
			    n += prefix_meets(rows[g.rows[k]], pv[k], sp.L, sp.R) ? 1 : 0;
		    return !is_large(n, prm);
	    },
	    false, 0);
	if (is_large(static_cast<i64>(m), prm))
		for (int F = 0; F <= static_cast<int>(m); ++F)
			enumerate(static_cast<std::size_t>(F), [](const std::vector<int>&) { return true; }, true, F);
	return out;
}

class Recursion {
public:
	Recursion(const ApproxOptions& opt, ApproxReport* rep) : opt_(opt), rep_(rep) {}

	RcpResult solve(const Subproblem& sp, const std::optional<Selection>& ref, int depth)
	{
		if (sp.R - sp.L == 1) {
			RcpResult r = base_case_dp(sp);
			NodeCertificate c = base_cert(sp, depth, r, ref);
			record(c);
			return r;
		}
		if (opt_.mode == ApproxMode::Oracle)
			return solve_oracle(sp, *ref, depth);
		return solve_exhaustive(sp, depth);
	}

private:
	const ApproxOptions& opt_;
	ApproxReport* rep_;

	void record(const NodeCertificate& c)
	{
		if (rep_)
			rep_->nodes.push_back(c);
	}

	Q level_factor(const Subproblem& sp) const
	{
		return 1 + opt_.params.eps * floor_log2(sp.R - sp.L) / opt_.params.logT;
	}

	NodeCertificate base_cert(const Subproblem& sp, int depth, const RcpResult& r, const std::optional<Selection>& ref)
	{
		NodeCertificate c;
		c.depth = depth;
		c.L = sp.L;
		c.R = sp.R;
		c.feasible = r.feasible && is_feasible(sp.inst, r.sel);
		c.out_cost = r.cost;
		if (ref) {
			c.has_reference = true;
			c.ref_cost = selection_cost(sp.inst, *ref);
			c.ref_capx = c_apx(sp, *ref);
			c.level_bound = level_factor(sp) * c.ref_capx;
			c.level_ok = r.feasible && r.cost <= c.level_bound;
		}
		if (!c.feasible)
			c.note = "infeasible output";
		return c;
	}

	RcpResult solve_oracle(const Subproblem& sp, const Selection& S, int depth)
	{
		const ApproxParams& prm = opt_.params;
		NodeCertificate c;
		c.depth = depth;
		c.L = sp.L;
		c.R = sp.R;
		c.has_reference = true;
		c.ref_cost = selection_cost(sp.inst, S);
		c.ref_capx = c_apx(sp, S);
		c.level_bound = level_factor(sp) * c.ref_capx;
		c.candidates = 1;
		auto groups = group_rows(sp, prm.eps);
		Augmented aug = augment_reference(sp, groups, S, prm);
		c.splus_budget_ok = check_splus_budget(sp, S, aug.splus, prm);
		std::string sur = check_surplus(sp, groups, S, aug, prm);
		c.surplus_ok = sur.empty();
		NodeGuess guess = guess_from_reference(sp, groups, aug);
		SplitResult pre = split_subproblem(sp, groups, guess, prm);
		std::set<int> plus(aug.splus.begin(), aug.splus.end());
		Selection pl = restrict_to(pre.left, aug.splus);
		guess.out_left.assign(sp.inst.rays.size(), 0);
		for (std::size_t k = 0; k < sp.inst.rays.size(); ++k)
			if (!sp.interior(sp.inst.rays[k]))
				guess.out_left[k] = coverage(pre.left.inst, pl, sp.inst.rays[k]);
		SplitResult sr = split_subproblem(sp, groups, guess, prm);
		std::string sw = check_sandwich(sr.f_left, sr.rows_left, sr.pexp_left, prm);
		if (sw.empty())
			sw = check_sandwich(sr.f_right, sr.rows_right, sr.pexp_right, prm);
		c.sandwich_ok = sw.empty();
		c.steps = sr.f_left.steps().size() + sr.f_right.steps().size();
		c.steps_bound = step_bound(prm, sr.pexp_left.size()) + step_bound(prm, sr.pexp_right.size());
		c.step_bound_ok = Q(static_cast<long>(c.steps)) <= c.steps_bound;
		Selection sl = restrict_to(sr.left, aug.splus);
		Selection srr = restrict_to(sr.right, aug.splus);
		c.child_refs_ok = is_feasible(sr.left.inst, sl) && is_feasible(sr.right.inst, srr);
		c.decomposition_ok = c_apx(sp, aug.splus) >= c_apx(sr.left, sl) + c_apx(sr.right, srr) + sr.apx_mid_cost;
		RcpResult left, right;
		if (c.child_refs_ok) {
			left = solve(sr.left, sl, depth + 1);
			right = solve(sr.right, srr, depth + 1);
		}
		RcpResult out;
		if (left.feasible && right.feasible) {
			out.sel = combine_children(sp, sr.apx_mid, left.sel, right.sel);
			out.cost = selection_cost(sp.inst, out.sel);
			out.feasible = is_feasible(sp.inst, out.sel);
			c.cost_combo_ok = out.cost <= left.cost + right.cost + sr.apx_mid_cost;
		}
		c.feasible = out.feasible;
		c.out_cost = out.cost;
		c.level_ok = out.feasible && out.cost <= c.level_bound;
		if (!sur.empty())
			c.note = sur;
		else if (!sw.empty())
			c.note = sw;
		else if (!c.child_refs_ok)
			c.note = "restricted reference infeasible for a child";
		else if (!c.feasible)
			c.note = "infeasible output";
		record(c);
		return out;
	}

	RcpResult solve_exhaustive(const Subproblem& sp, int depth)
	{
		const ApproxParams& prm = opt_.params;
		auto groups = group_rows(sp, prm.eps);
		std::vector<std::vector<GroupOption>> opts;
		std::size_t prod = 1;
		for (const Group& g : groups) {
			opts.push_back(group_options(sp, g, prm, opt_.cap_guesses));
			prod *= opts.back().size();
			if (prod > opt_.cap_guesses)
				throw CapsExhausted("guess cap exceeded at node [" + std::to_string(sp.L) + "," +
				                    std::to_string(sp.R) + ")");
		}
		NodeCertificate c;
		c.depth = depth;
		c.L = sp.L;
		c.R = sp.R;
		RcpResult best;
		std::size_t count = 0;
		std::vector<std::size_t> pick(groups.size(), 0);
		while (true) {
			NodeGuess guess;
			for (std::size_t gi = 0; gi < groups.size(); ++gi) {
				const GroupOption& o = opts[gi][pick[gi]];
				guess.large.push_back(o.large ? 1 : 0);
				guess.filled.push_back(o.filled);
				guess.prefix.push_back(o.prefix);
			}
			guess.out_left.assign(sp.inst.rays.size(), 0);
			SplitResult pre = split_subproblem(sp, groups, guess, prm);
			std::vector<std::size_t> outs;
			std::vector<std::vector<i64>> choices;
			for (std::size_t k = 0; k < sp.inst.rays.size(); ++k)
				if (!sp.interior(sp.inst.rays[k]) && sp.inst.rays[k].d > 0) {
					outs.push_back(k);
					choices.push_back(achievable_splits(pre.left, sp.inst.rays[k]));
				}
			std::vector<std::size_t> oc(outs.size(), 0);
			while (true) {
				if (++count > opt_.cap_guesses)
					throw CapsExhausted("guess cap exceeded at node [" + std::to_string(sp.L) + "," +
					                    std::to_string(sp.R) + ")");
				for (std::size_t i = 0; i < outs.size(); ++i)
					guess.out_left[outs[i]] = choices[i][oc[i]];
				SplitResult sr = outs.empty() ? pre : split_subproblem(sp, groups, guess, prm);
				if (sr.ok) {
					RcpResult left = solve(sr.left, std::nullopt, depth + 1);
					RcpResult right = left.feasible ? solve(sr.right, std::nullopt, depth + 1) : RcpResult{};
					if (left.feasible && right.feasible) {
						Selection sel = combine_children(sp, sr.apx_mid, left.sel, right.sel);
						Q cost = selection_cost(sp.inst, sel);
						if (is_feasible(sp.inst, sel) && (!best.feasible || cost < best.cost))
							best = RcpResult{true, sel, cost};
					}
				}
				std::size_t i = 0;
				while (i < outs.size() && ++oc[i] == choices[i].size())
					oc[i++] = 0;
				if (i == outs.size())
					break;
			}
			std::size_t gi = 0;
			while (gi < groups.size() && ++pick[gi] == opts[gi].size())
				pick[gi++] = 0;
			if (gi == groups.size())
				break;
		}
		c.candidates = count;
		c.feasible = best.feasible;
		c.out_cost = best.cost;
		if (!best.feasible)
			c.note = "no feasible candidate";
		record(c);
		if (rep_)
			rep_->candidates += count;
		return best;
	}
};

} // namespace detail

/** \brief Root width: next power of two covering every rectangle and ray position. */
inline i64 root_width(const RcpInstance& inst)
{
	i64 m = 1;
	for (const Row& w : inst.rows)
		for (const Rect& r : w.rects)
			m = std::max(m, r.b);
	for (const Ray& l : inst.rays)
		m = std::max(m, l.t + 1);
	return next_pow2(m);
}

/** \brief Parameters for a root instance: K of the instance and log2 of the padded width (at least 1). */
inline ApproxParams params_for(const RcpInstance& inst, const Q& eps)
{
	ApproxParams p;
	p.eps = eps;
	p.K = std::max(Q(1), rcp_K(inst));
	p.logT = std::max(1, floor_log2(root_width(inst)));
	return p;
}

/**
 * \brief Recursive approximation on the root area [0, T).
 *
 * Oracle mode needs a feasible reference selection; exhaustive mode enumerates guesses under
 * the caps and throws CapsExhausted when they are too small. The returned selection is feasible
 * whenever `feasible` is set.
 */
inline RcpResult solve_rcp_recursive(const RcpInstance& inst, const ApproxOptions& opt,
                                     const std::optional<Selection>& reference = std::nullopt,
                                     ApproxReport* report = nullptr)
{
	Subproblem root;
	root.L = 0;
	root.R = root_width(inst);
	root.inst = inst;
	normalize_layout(root.inst);
	if (opt.mode == ApproxMode::Oracle) {
		if (!reference || !is_feasible(root.inst, *reference))
			throw std::invalid_argument("oracle mode needs a feasible reference selection");
	} else if (floor_log2(root.R) > opt.cap_depth) {
		throw CapsExhausted("depth cap exceeded: root width " + std::to_string(root.R));
	}
	detail::Recursion rec(opt, report);
	return rec.solve(root, reference, 0);
}

} // namespace gspkit

#endif // GSPKIT_APPROX_HPP
