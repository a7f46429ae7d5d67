#ifndef GSPKIT_GEN_HPP
#define GSPKIT_GEN_HPP

#include "gspkit/gsp.hpp"
#include "gspkit/rcp.hpp"

#include <array>
#include <cstdint>
#include <random>

namespace gspkit {

/**
 * \brief Seeded random source with draws defined only through the mt19937_64 output
 * sequence, so generated instances are identical across standard libraries.
 */
class Rng {
public:
	explicit Rng(std::uint64_t seed) : eng_(seed) {}

	/** \brief Uniform integer in [lo, hi] (hi >= lo). */
	i64 range(i64 lo, i64 hi)
	{
		if (hi <= lo)
			return lo;
		return lo + static_cast<i64>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
	}

	/** \brief Index drawn with probability proportional to the given nonnegative weights. */
	template <std::size_t N>
	std::size_t weighted(const std::array<i64, N>& w)
	{
		i64 tot = 0;
		for (i64 x : w)
			tot += x;
		if (tot <= 0)
			return 0;
		i64 v = range(0, tot - 1);
		for (std::size_t k = 0; k < N; ++k) {
			if (v < w[k])
				return k;
			v -= w[k];
		}
		return N - 1;
	}

	bool coin() { return (eng_() & 1U) != 0; }

private:
	std::mt19937_64 eng_;
};

/** \brief Parameters of the random GSP generator. */
struct GenSpec {
	int n = 4;
	i64 p_max = 3;
	i64 r_max = 3;
	/** Relative frequency per cost kind, indexed like CostKind. */
	std::array<i64, 6> mix{1, 1, 1, 1, 1, 1};
	i64 w_min = 0;
	i64 w_max = 3;
	/** Due dates are drawn from [r, r + d_slack] (deadlines from [r + p, r + p + d_slack]). */
	i64 d_slack = 6;
	/** Number of breakpoints of a step cost function. */
	int steps = 2;
	std::uint64_t seed = 1;
};

/** \brief Mix that yields a single cost kind. */
inline std::array<i64, 6> only_kind(CostKind k)
{
	std::array<i64, 6> m{};
	m[static_cast<std::size_t>(k)] = 1;
	return m;
}

/** \brief Deterministic random instance; every job satisfies the GSP invariants. */
inline GspInstance gen_instance(const GenSpec& spec)
{
	Rng rng(spec.seed);
	GspInstance g;
	for (int j = 0; j < spec.n; ++j) {
		Job job;
		job.id = j;
		job.r = rng.range(0, spec.r_max);
		job.p = rng.range(1, std::max<i64>(1, spec.p_max));
		job.fn.kind = static_cast<CostKind>(rng.weighted(spec.mix));
		job.fn.w = rng.range(spec.w_min, spec.w_max);
		switch (job.fn.kind) {
		case CostKind::Tardiness:
		case CostKind::Tardy:
			job.fn.d = job.r + rng.range(0, spec.d_slack);
			break;
		case CostKind::Deadline:
			job.fn.w = 0;
			job.fn.d = job.r + job.p + rng.range(0, spec.d_slack);
			break;
		case CostKind::Step: {
			job.fn.w = 0;
			i64 t = job.r;
			i64 c = 0;
			for (int k = 0; k < spec.steps; ++k) {
				t += rng.range(1, std::max<i64>(1, spec.d_slack));
				c += rng.range(1, std::max<i64>(1, spec.w_max));
				job.fn.steps.push_back({t, Cost(c)});
			}
			break;
		}
		default:
			break;
		}
		g.jobs.push_back(job);
	}
	return g;
}

/** \brief Parameters of the random RCP generator. */
struct RcpGenSpec {
	int rows_min = 1;
	int rows_max = 4;
	int rects_max = 3;
	i64 x_max = 3;
	i64 width_max = 3;
	i64 cost_max = 4;
	i64 p_max = 3;
	int rays = 2;
	i64 demand_max = 6;
	std::uint64_t seed = 1;
};

namespace detail {

/**
 * \brief Adds rays whose demand never exceeds the value available to them, so selecting
 * every rectangle is feasible; then assigns row-major ids.
 */
inline void add_rays(RcpInstance& in, Rng& rng, const RcpGenSpec& spec, i64 right)
{
	const i64 nrows = static_cast<i64>(in.rows.size());
	for (int q = 0; q < spec.rays && nrows > 0; ++q) {
		Ray l{rng.range(0, nrows - 1), rng.range(0, right - 1), 0};
		i64 avail = 0;
		for (const Row& w : in.rows)
			if (w.y <= l.s)
				for (const Rect& r : w.rects)
					if (r.a <= l.t && l.t < r.b)
						avail += r.p;
		l.d = rng.range(0, std::min(avail, spec.demand_max));
		in.rays.push_back(l);
	}
	renumber(in);
}

} // namespace detail

/** \brief Feasible random RCP instance with consecutive rectangles and one value per row. */
inline RcpInstance gen_rcp(const RcpGenSpec& spec)
{
	Rng rng(spec.seed);
	RcpInstance in;
	const int nrows = static_cast<int>(rng.range(spec.rows_min, spec.rows_max));
	i64 right = 1;
	for (int k = 0; k < nrows; ++k) {
		Row w{k, {}};
		i64 x = rng.range(0, spec.x_max);
		const i64 p = rng.range(1, spec.p_max);
		const int cnt = static_cast<int>(rng.range(1, spec.rects_max));
		for (int q = 0; q < cnt; ++q) {
			i64 wd = rng.range(1, spec.width_max);
			w.rects.push_back(Rect{0, x, x + wd, Q(rng.range(1, spec.cost_max)), p});
			x += wd;
		}
		right = std::max(right, x);
		in.rows.push_back(w);
	}
	detail::add_rays(in, rng, spec, right);
	return in;
}

/**
 * \brief Random instance whose rectangles have power-of-two widths starting at multiples of
 * their width, so it is well structured for every delta = 2^-k <= 1. Always feasible.
 */
inline RcpInstance gen_rcp_aligned(const RcpGenSpec& spec)
{
	Rng rng(spec.seed);
	RcpInstance in;
	const int nrows = static_cast<int>(rng.range(spec.rows_min, spec.rows_max));
	i64 right = 1;
	i64 wmax = 1;
	while (2 * wmax <= spec.width_max)
		wmax *= 2;
	for (int k = 0; k < nrows; ++k) {
		Row w{k, {}};
		i64 wd = i64(1) << rng.range(0, floor_log2(wmax));
		i64 x = wd * rng.range(0, spec.x_max / wd);
		const i64 p = rng.range(1, spec.p_max);
		const int cnt = static_cast<int>(rng.range(1, spec.rects_max));
		for (int q = 0; q < cnt; ++q) {
			w.rects.push_back(Rect{0, x, x + wd, Q(rng.range(1, spec.cost_max)), p});
			x += wd;
			i64 cap = 1;
			while (cap < wmax && x % (2 * cap) == 0)
				cap *= 2;
			wd = i64(1) << rng.range(0, floor_log2(cap));
		}
		right = std::max(right, x);
		in.rows.push_back(w);
	}
	detail::add_rays(in, rng, spec, right);
	return in;
}

} // namespace gspkit

#endif // GSPKIT_GEN_HPP
