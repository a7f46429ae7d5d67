#ifndef GSPKIT_MILESTONES_HPP
#define GSPKIT_MILESTONES_HPP

#include "gspkit/gsp.hpp"

#include <set>
#include <string>
#include <vector>

namespace gspkit {

/** \brief Milestone times m_0 < m_1 < ... < m_f of one job (m_0 = m_1 allowed when r = d). */
struct Milestones {
	int job = 0;
	std::vector<i64> m;
	int f() const { return static_cast<int>(m.size()) - 1; }
};

/** \brief Largest t in [lo, hi] with cost_at(t) <= bound, given cost_at(lo) <= bound. */
inline i64 last_time_within(const CostFn& fn, i64 lo, i64 hi, const Cost& bound)
{
	while (lo < hi) {
		i64 mid = lo + (hi - lo + 1) / 2;
		if (cost_at(fn, mid) <= bound)
			lo = mid;
		else
			hi = mid - 1;
	}
	return lo;
}

/**
 * \brief General milestone sequence: m_0 = r, then the latest t <= T whose cost stays
 * within (1+eps) times the cost one step after the previous milestone.
 */
inline Milestones build_milestones(const Job& job, const Q& eps, i64 T)
{
	Milestones ms;
	ms.job = job.id;
	ms.m.push_back(job.r);
	while (ms.m.back() < T) {
		i64 m = ms.m.back();
		Cost base = cost_at(job.fn, m + 1);
		i64 next = T;
		if (!base.inf)
			next = last_time_within(job.fn, m + 1, T, Q(1 + eps) * base);
		ms.m.push_back(next);
	}
	return ms;
}

/**
 * \brief Milestones for weighted tardiness on the absolute grid (eps/2) 2^h' Z.
 *
 * m_0 = r, m_1 = min(d, T), m_2 = d + 1, and each later milestone is the ceiling of the
 * second grid point beyond the previous one, h' = floor(log2(m_i - d)). A zero weight
 * falls back to the general construction.
 */
inline Milestones build_milestones_tardiness(const Job& job, const Q& eps, i64 T)
{
	if (job.fn.kind != CostKind::Tardiness)
		throw std::invalid_argument("tardiness milestones need a tardiness cost");
	if (!is_dyadic_unit(eps))
		throw std::invalid_argument("tardiness milestones need eps = 2^-k");
	const i64 d = job.fn.d;
	if (d < job.r)
		throw std::invalid_argument("due date before release; normalize first");
	if (job.fn.w == 0)
		return build_milestones(job, eps, T);
	Milestones ms;
	ms.job = job.id;
	ms.m.push_back(job.r);
	ms.m.push_back(std::min(d, T));
	if (ms.m.back() >= T) {
		if (ms.m[0] == T)
			ms.m.pop_back();
		return ms;
	}
	ms.m.push_back(d + 1);
	while (ms.m.back() < T) {
		i64 m = ms.m.back();
		Q g = eps / 2 * pow_q(Q(2), floor_log2(m - d));
		Q k = Q(floor_q(Q(m) / g) + 2);
		i64 next = std::max(m + 1, ceil_q(k * g));
		ms.m.push_back(std::min(next, T));
	}
	return ms;
}

/** \brief Milestone property check; each violation is reported as text. */
inline std::vector<std::string> check_milestones(const Job& job, const Milestones& ms, const Q& eps,
                                                 i64 T, bool tardiness_variant)
{
	std::vector<std::string> bad;
	const auto& m = ms.m;
	const int f = ms.f();
	auto cost = [&](i64 t) { return cost_at(job.fn, t); };
	auto tag = [&](const std::string& s) { return "job " + std::to_string(job.id) + ": " + s; };
	if (m.empty() || m.front() != job.r)
		bad.push_back(tag("first milestone differs from the release time"));
	if (m.empty() || m.back() != T)
		bad.push_back(tag("last milestone differs from T"));
	if (f < 1)
		return bad;
	const bool dup = tardiness_variant && m[0] == m[1];
	for (int i = 0; i < f; ++i)
		if (!(m[i] < m[i + 1]) && !(dup && i == 0))
			bad.push_back(tag("milestones not increasing at " + std::to_string(i)));
	const Q up = 1 + eps, low = 1 + eps / 4;
	for (int i = 0; i < f; ++i)
		if (!(cost(m[i + 1]) <= up * cost(m[i] + 1)))
			bad.push_back(tag("growth bound fails at " + std::to_string(i)));
	for (int i = dup ? 1 : 0; i < f - 1; ++i)
		if (!(cost(m[i + 1] + 1) > low * cost(m[i] + 1)))
			bad.push_back(tag("minimum growth fails at " + std::to_string(i)));
	if (tardiness_variant && job.fn.w > 0) {
		if (m[1] != std::min(job.fn.d, T))
			bad.push_back(tag("second milestone differs from the due date"));
		const Q delta = eps / 32;
		for (int i = 1; i < f; ++i) {
			i64 w = m[i + 1] - m[i];
			Q unit = delta * pow_q(Q(2), floor_log2(w));
			for (i64 x : {m[i], m[i + 1]}) {
				Q ratio = Q(x) / unit;
				ratio.canonicalize();
				if (ratio.get_den() != 1)
					bad.push_back(tag("endpoint " + std::to_string(x) + " off the grid at " +
					                  std::to_string(i)));
			}
		}
	}
	return bad;
}

/** \brief Block start indices for offset S: 1, S + k (1/eps)^3, plus every large jump. */
inline std::vector<int> build_tau(const Job& job, const Milestones& ms, i64 S, const Q& eps)
{
	if (!is_unit_fraction(eps))
		throw std::invalid_argument("eps must be 1/k");
	const i64 inv = to_i64(eps.get_den());
	const i64 block = inv * inv * inv;
	const int f = ms.f();
	std::set<int> tau;
	if (f >= 2)
		tau.insert(1);
	for (i64 k = 2;; ++k) {
		i64 v = S + (k - 1) * block;
		if (v > f - 1)
			break;
		tau.insert(static_cast<int>(v));
	}
	const Q inv_eps = 1 / eps;
	for (int i = 1; i < f; ++i) {
		Cost a = cost_at(job.fn, ms.m[i]);
		Cost b = cost_at(job.fn, ms.m[i + 1]);
		if (b > inv_eps * a)
			tau.insert(i);
	}
	return std::vector<int>(tau.begin(), tau.end());
}

} // namespace gspkit

#endif // GSPKIT_MILESTONES_HPP
