#ifndef GSPKIT_REDUCTION_HPP
#define GSPKIT_REDUCTION_HPP

#include "gspkit/milestones.hpp"
#include "gspkit/rcp.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace gspkit {

/** \brief Milestone index range [i_first, i_last] of one job that a rectangle stands for. */
struct RectOrigin {
	int job = 0;
	int i_first = 0;
	int i_last = 0;
	Q base_cost = 0;
};

/** \brief Where a ray came from: release time s, position t and the first job it reaches. */
struct RayOrigin {
	i64 s = 0;
	i64 t = 0;
	int first_job = 0;
	i64 forced_reduction = 0;
};

/**
 * \brief Bookkeeping between a GSP instance and the RCP built from it.
 *
 * `status[j][i]` describes what became of the pair (j, i): "rect:<id>", "merged:<id>",
 * "forced", "removed-zero-cost", "truncated-inf" or "empty". `forced_upto[j]` is the
 * largest milestone index that is selected unconditionally.
 */
struct VarMap {
	Q eps = 1;
	i64 T = 1;
	std::vector<Milestones> ms;
	std::vector<std::vector<int>> tau;
	std::vector<std::vector<std::string>> status;
	std::vector<int> forced_upto;
	Q forced_cost = 0;
	std::map<int, RectOrigin> rect_origin;
	std::vector<RayOrigin> ray_origin;
	bool infeasible = false;
	std::string reason;
	bool k_bound_ok = true;
};

namespace detail {

struct Piece {
	int i_first, i_last;
	i64 a, b;
	Q c;
};

} // namespace detail

/**
 * \brief Builds the RCP instance of one offset choice.
 *
 * One row per non-empty block of a job; jobs released later sit lower, so the ray of
 * (s, t) starts at the top row of the first job released at or after s. Rectangle costs
 * are the block-head coefficient cost(m_{i+1}) or the increment cost(m_{i+1}) - cost(m_i),
 * padded by eps/|W| times the head coefficient. The first rectangle of every job (and the
 * second when m_1 equals the release) is always selected and kept out of the instance.
 */
inline std::pair<RcpInstance, VarMap> build_rcp(const GspInstance& inst, const std::vector<Milestones>& ms,
                                                const std::vector<std::vector<int>>& taus, const Q& eps, i64 T)
{
	const int n = static_cast<int>(inst.jobs.size());
	VarMap vm;
	vm.eps = eps;
	vm.T = T;
	vm.ms = ms;
	vm.tau = taus;
	vm.status.assign(n, {});
	vm.forced_upto.assign(n, 0);
	std::vector<int> order(n);
	std::iota(order.begin(), order.end(), 0);
	std::sort(order.begin(), order.end(), [&](int a, int b) {
		return inst.jobs[a].r != inst.jobs[b].r ? inst.jobs[a].r < inst.jobs[b].r : a < b;
	});
	struct Forced {
		int job;
		i64 a, b;
	};
	std::vector<Forced> forced;
	std::vector<std::vector<std::vector<detail::Piece>>> job_rows(n);
	auto force = [&](int j, int i, const Cost& c, const char* tag) {
		const auto& m = ms[j].m;
		vm.status[j][i] = tag;
		vm.forced_upto[j] = std::max(vm.forced_upto[j], i);
		if (c.inf) {
			vm.infeasible = true;
			vm.reason = "job " + std::to_string(j) + " has infinite unavoidable cost";
		} else {
			vm.forced_cost += c.v;
		}
		if (m[i] < m[i + 1])
			forced.push_back({j, m[i], m[i + 1]});
	};
	for (int j = 0; j < n; ++j) {
		const Job& job = inst.jobs[j];
		const auto& m = ms[j].m;
		const int f = ms[j].f();
		vm.status[j].assign(std::max(f, 0), "");
		if (f < 1)
			continue;
		std::vector<Cost> cm(f + 1);
		for (int i = 0; i <= f; ++i)
			cm[i] = cost_at(job.fn, m[i]);
		if (m[0] == m[1])
			vm.status[j][0] = "empty";
		else
			force(j, 0, cm[1], "forced");
		std::set<int> heads(taus[j].begin(), taus[j].end());
		auto coef = [&](int i) -> Cost {
			if (heads.count(i))
				return cm[i + 1];
			if (cm[i].inf || cm[i + 1].inf)
				return Cost::infinity();
			return cm[i + 1] - cm[i];
		};
		const std::vector<int>& tj = taus[j];
		for (std::size_t k = 0; k < tj.size(); ++k) {
			int lo = tj[k];
			int hi = (k + 1 < tj.size() ? tj[k + 1] : f) - 1;
			hi = std::min(hi, f - 1);
			if (lo > hi)
				continue;
			const Cost head_cost = coef(lo);
			std::vector<detail::Piece> row;
			bool truncated = false;
			for (int i = lo; i <= hi; ++i) {
				if (truncated) {
					vm.status[j][i] = "truncated-inf";
					continue;
				}
				Cost c = coef(i);
				if (row.empty() && (m[i] <= job.r || c.is_zero())) {
					force(j, i, c, m[i] <= job.r ? "forced" : "removed-zero-cost");
					continue;
				}
				if (c.inf) {
					truncated = true;
					vm.status[j][i] = "truncated-inf";
					continue;
				}
				if (c.is_zero() && !row.empty()) {
					row.back().i_last = i;
					row.back().b = m[i + 1];
					vm.status[j][i] = "merged";
					continue;
				}
				row.push_back({i, i, m[i], m[i + 1], c.v});
				vm.status[j][i] = "rect";
			}
			if (row.empty())
				continue;
			const Q W = Q(static_cast<long>(row.size()));
			const Q pad = head_cost.inf ? Q(0) : Q(eps / W * head_cost.v);
			Q sum = 0, mn = -1;
			for (auto& pc : row) {
				pc.c += pad;
				sum += pc.c;
				if (mn < 0 || pc.c < mn)
					mn = pc.c;
			}
			const Q bound = W * (pow_q(1 / eps, static_cast<i64>(row.size())) + eps / W) / (eps / W);
			if (mn > 0 && sum / mn > bound)
				vm.k_bound_ok = false;
			job_rows[j].push_back(std::move(row));
		}
	}
	RcpInstance out;
	std::vector<i64> top_row(n, -1);
	i64 y = 0;
	int tmp_id = 0;
	for (int pos = n - 1; pos >= 0; --pos) {
		int j = order[pos];
		for (const auto& row : job_rows[j]) {
			Row w{y, {}};
			for (const auto& pc : row) {
				w.rects.push_back(Rect{tmp_id++, pc.a, pc.b, pc.c, inst.jobs[j].p});
			}
			out.rows.push_back(std::move(w));
			top_row[j] = y;
			++y;
		}
	}
	renumber(out);
	{
		std::map<std::pair<i64, i64>, int> by_pos;
		for (const Row& w : out.rows)
			for (const Rect& r : w.rects)
				by_pos[{w.y, r.a}] = r.id;
		i64 yy = 0;
		for (int pos = n - 1; pos >= 0; --pos) {
			int j = order[pos];
			for (const auto& row : job_rows[j]) {
				for (const auto& pc : row) {
					int id = by_pos[{yy, pc.a}];
					vm.rect_origin[id] = RectOrigin{j, pc.i_first, pc.i_last, pc.c};
					for (int i = pc.i_first; i <= pc.i_last; ++i)
						vm.status[j][i] = (i == pc.i_first ? "rect:" : "merged:") + std::to_string(id);
				}
				++yy;
			}
		}
	}
	for (auto& [id, o] : vm.rect_origin) {
		const auto& m = ms[o.job].m;
		Cost hi = cost_at(inst.jobs[o.job].fn, m[o.i_last + 1]);
		Cost lo = cost_at(inst.jobs[o.job].fn, m[o.i_first]);
		bool head = false;
		for (int h : taus[o.job])
			head = head || h == o.i_first;
		o.base_cost = head ? hi.v : Q(hi.v - lo.v);
	}
	std::set<i64> releases;
	std::set<i64> ts;
	for (const Job& jb : inst.jobs) {
		releases.insert(jb.r);
		ts.insert(jb.r);
		ts.insert(jb.r + 1);
	}
	for (const auto& s : ms)
		for (i64 x : s.m)
			ts.insert(x);
	std::map<std::pair<i64, i64>, std::size_t> seen;
	for (i64 s : releases) {
		int first = 0;
		while (first < n && inst.jobs[order[first]].r < s)
			++first;
		i64 srow = -1;
		for (int pos = first; pos < n && srow < 0; ++pos)
			srow = top_row[order[pos]];
		for (i64 t : ts) {
			if (!(s < t && t < T))
				continue;
			i64 dem = -(t - s), red = 0;
			for (int pos = first; pos < n; ++pos) {
				const Job& jb = inst.jobs[order[pos]];
				if (jb.r < t)
					dem += jb.p;
			}
			for (const Forced& fz : forced) {
				const Job& jb = inst.jobs[fz.job];
				if (s <= jb.r && jb.r < t && fz.a <= t && t < fz.b)
					red += jb.p;
			}
			dem -= red;
			if (dem <= 0)
				continue;
			if (srow < 0) {
				vm.infeasible = true;
				vm.reason = "ray (" + std::to_string(s) + "," + std::to_string(t) + ") cannot be covered";
				continue;
			}
			auto key = std::make_pair(srow, t);
			auto it = seen.find(key);
			if (it != seen.end()) {
				if (out.rays[it->second].d < dem) {
					out.rays[it->second].d = dem;
					vm.ray_origin[it->second] = {s, t, order[first], red};
				}
				continue;
			}
			seen[key] = out.rays.size();
			out.rays.push_back(Ray{srow, t, dem});
			vm.ray_origin.push_back({s, t, order[first], red});
		}
	}
	return {out, vm};
}

/** \brief Completion times C_j = m_{l+1} with l the largest selected (or forced) index of job j. */
inline std::vector<i64> selection_to_completions(const VarMap& vm, const Selection& sel)
{
	std::vector<int> ell = vm.forced_upto;
	for (int id : sel) {
		auto it = vm.rect_origin.find(id);
		if (it == vm.rect_origin.end())
			throw std::invalid_argument("unknown rectangle id " + std::to_string(id));
		ell[it->second.job] = std::max(ell[it->second.job], it->second.i_last);
	}
	std::vector<i64> C(ell.size());
	for (std::size_t j = 0; j < ell.size(); ++j) {
		const auto& m = vm.ms[j].m;
		C[j] = m[std::min<std::size_t>(ell[j] + 1, m.size() - 1)];
	}
	return C;
}

/** \brief Selects a rectangle iff its first milestone lies strictly before the completion time. */
inline Selection completions_to_selection(const VarMap& vm, const std::vector<i64>& C)
{
	Selection sel;
	for (const auto& [id, o] : vm.rect_origin)
		if (vm.ms[o.job].m[o.i_first] < C[o.job])
			sel.push_back(id);
	std::sort(sel.begin(), sel.end());
	return sel;
}

/** \brief Selection cost without the padding, plus the forced part. */
inline Q unpadded_cost(const VarMap& vm, const Selection& sel)
{
	Q c = vm.forced_cost;
	for (int id : sel)
		c += vm.rect_origin.at(id).base_cost;
	return c;
}

/** \brief Milestones for every job: the grid variant for tardiness jobs when requested. */
inline std::vector<Milestones> all_milestones(const GspInstance& inst, const Q& eps, i64 T, bool tardiness_grid)
{
	std::vector<Milestones> ms;
	for (const Job& j : inst.jobs)
		ms.push_back(tardiness_grid && j.fn.kind == CostKind::Tardiness ? build_milestones_tardiness(j, eps, T)
		                                                                 : build_milestones(j, eps, T));
	return ms;
}

/** \brief Block starts of every job for offset S. */
inline std::vector<std::vector<int>> all_taus(const GspInstance& inst, const std::vector<Milestones>& ms, i64 S,
                                              const Q& eps)
{
	std::vector<std::vector<int>> t;
	for (std::size_t j = 0; j < inst.jobs.size(); ++j)
		t.push_back(build_tau(inst.jobs[j], ms[j], S, eps));
	return t;
}

/** \brief Number of offsets S, (1/eps)^3. */
inline i64 offset_count(const Q& eps)
{
	if (!is_unit_fraction(eps))
		throw std::invalid_argument("eps must be 1/k");
	i64 k = to_i64(eps.get_den());
	return k * k * k;
}

} // namespace gspkit

#endif // GSPKIT_REDUCTION_HPP
