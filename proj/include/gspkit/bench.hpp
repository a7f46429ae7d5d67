#ifndef GSPKIT_BENCH_HPP
#define GSPKIT_BENCH_HPP

#include "gspkit/gen.hpp"
#include "gspkit/milestones.hpp"
#include "gspkit/pipeline.hpp"

#include "json.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace gspkit {

/** \brief Worker count: hardware concurrency, capped by the GSPKIT_THREADS environment variable. */
inline unsigned thread_count()
{
	unsigned n = std::max(1U, std::thread::hardware_concurrency());
	if (const char* env = std::getenv("GSPKIT_THREADS")) {
		char* end = nullptr;
		long v = std::strtol(env, &end, 10);
		if (end != env && v >= 1)
			n = std::min<unsigned>(n, static_cast<unsigned>(v));
	}
	return n;
}

/** \brief Runs body(0..count-1) on up to `threads` workers; results must be stored by index. */
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body)
{
	threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
	std::atomic<std::size_t> next{0};
	std::vector<std::thread> pool;
	std::exception_ptr err;
	std::mutex mu;
	for (unsigned t = 0; t < threads; ++t)
		pool.emplace_back([&] {
			for (std::size_t k; (k = next.fetch_add(1)) < count;) {
				try {
					body(k);
				} catch (...) {
					std::lock_guard<std::mutex> lk(mu);
					if (!err)
						err = std::current_exception();
				}
			}
		});
	for (auto& th : pool)
		th.join();
	if (err)
		std::rethrow_exception(err);
}

/** \brief Back ends in report column order. */
inline constexpr std::array<BackEnd, 4> kBenchModes{BackEnd::Exact, BackEnd::ApproxOracle, BackEnd::ApproxExhaustive,
                                                    BackEnd::Tardiness};

struct BenchConfig {
	GenSpec gen;
	int count = 10;
	Q eps = Q(1, 2);
	/** Exhaustive optimum only when the product of completion-time choices is at most this. */
	double brute_budget = 2e6;
	std::vector<BackEnd> modes{kBenchModes.begin(), kBenchModes.end()};
	std::size_t cap_guesses = 100000;
	int cap_depth = 6;
	unsigned threads = 1;
};

/** \brief Outcome of one back end on one instance. */
struct ModeOutcome {
	bool ran = false;
	std::string status; // ok, infeasible, caps, budget, n/a, or error text
	Cost cost = Cost::infinity();
	std::optional<Q> ratio;
	bool bound_ok = true;
	bool certificates_ok = true;
	bool schedule_ok = true;
	double wall_ms = 0;
};

struct BenchRow {
	int instance = 0;
	std::uint64_t seed = 0;
	int n = 0;
	std::optional<Cost> optimum;
	bool milestones_ok = true;
	std::array<ModeOutcome, 4> modes;
	double wall_ms = 0;

	/** \brief Names of failed certificates, empty when all pass. */
	std::vector<std::string> failed() const
	{
		std::vector<std::string> f;
		if (!milestones_ok)
			f.push_back("milestones");
		for (std::size_t k = 0; k < modes.size(); ++k) {
			const ModeOutcome& m = modes[k];
			if (!m.ran)
				continue;
			std::string b = backend_name(kBenchModes[k]);
			if (!m.schedule_ok)
				f.push_back(b + ":schedule");
			if (!m.certificates_ok)
				f.push_back(b + ":certificates");
			if (!m.bound_ok)
				f.push_back(b + ":ratio");
			if (m.status != "ok" && m.status != "infeasible")
				f.push_back(b + ":" + m.status);
		}
		return f;
	}
};

struct BenchReport {
	Q eps = 0;
	std::vector<BenchRow> rows;

	bool ok() const
	{
		for (const BenchRow& r : rows)
			if (!r.failed().empty())
				return false;
		return true;
	}
};

/** \brief Guaranteed ratio of the exact back end: (1+eps)(1+6eps)(1+eps)^2. */
inline Q reduction_factor(const Q& eps) { return (1 + eps) * (1 + 6 * eps) * (1 + eps) * (1 + eps); }

/** \brief Guaranteed ratio of a back end relative to the schedule optimum. */
inline Q mode_factor(BackEnd b, const Q& eps)
{
	Q f = reduction_factor(eps);
	switch (b) {
	case BackEnd::Exact:
		return f;
	case BackEnd::Tardiness:
		return (1 + 5 * eps) * f;
	default:
		return (2 + 2 * eps) * (1 + 3 * eps) * f;
	}
}

/** \brief Number of completion vectors the exhaustive schedule search may visit. */
inline double brute_space(const GspInstance& g)
{
	i64 last = 0, sp = 0;
	for (const Job& j : g.jobs) {
		last = std::max(last, j.r);
		sp += j.p;
	}
	last += sp;
	double s = 1;
	for (const Job& j : g.jobs)
		s *= static_cast<double>(last - j.r - j.p + 2);
	return s;
}

/** \brief Ratio cost/opt, with 0/0 = 1; empty when opt is 0 and cost is not. */
inline std::optional<Q> cost_ratio(const Cost& cost, const Cost& opt)
{
	if (cost.inf || opt.inf)
		return std::nullopt;
	if (opt.v == 0)
		return cost.v == 0 ? std::optional<Q>(Q(1)) : std::nullopt;
	return Q(cost.v / opt.v);
}

/** \brief Benchmarks one generated instance against every configured back end. */
inline BenchRow bench_instance(const BenchConfig& cfg, int k)
{
	using clock = std::chrono::steady_clock;
	const auto t0 = clock::now();
	BenchRow row;
	row.instance = k;
	GenSpec gs = cfg.gen;
	gs.seed = cfg.gen.seed + static_cast<std::uint64_t>(k);
	row.seed = gs.seed;
	GspInstance raw = gen_instance(gs);
	row.n = static_cast<int>(raw.jobs.size());
	GspInstance g = raw;
	validate_gsp(g);
	if (brute_space(g) <= cfg.brute_budget) {
		GspOptimum o = brute_force_gsp(g);
		row.optimum = o.feasible ? o.cost : Cost::infinity();
	}
	const i64 T = horizon(g);
	for (const Job& j : g.jobs) {
		if (!check_milestones(j, build_milestones(j, cfg.eps, T), cfg.eps, T, false).empty())
			row.milestones_ok = false;
		if (j.fn.kind == CostKind::Tardiness && is_dyadic_unit(cfg.eps) &&
		    !check_milestones(j, build_milestones_tardiness(j, cfg.eps, T), cfg.eps, T, true).empty())
			row.milestones_ok = false;
	}
	bool all_tard = true;
	for (const Job& j : g.jobs)
		all_tard = all_tard && j.fn.kind == CostKind::Tardiness;
	for (std::size_t m = 0; m < kBenchModes.size(); ++m) {
		const BackEnd b = kBenchModes[m];
		ModeOutcome& out = row.modes[m];
		if (std::find(cfg.modes.begin(), cfg.modes.end(), b) == cfg.modes.end())
			continue;
		if (b == BackEnd::Tardiness && (!all_tard || !is_dyadic_unit(cfg.eps))) {
			out.status = "n/a";
			continue;
		}
		out.ran = true;
		GspSolveOptions so;
		so.eps = cfg.eps;
		so.backend = b;
		so.cap_guesses = cfg.cap_guesses;
		so.cap_depth = cfg.cap_depth;
		const auto m0 = clock::now();
		try {
			GspSolveResult r = solve_gsp(raw, so);
			out.certificates_ok = r.certificates_ok;
			out.cost = r.cost;
			out.status = r.feasible ? "ok" : "infeasible";
			if (r.feasible)
				out.schedule_ok = validate_schedule(g, r.schedule).empty();
			if (row.optimum) {
				if (!row.optimum->inf && !r.feasible)
					out.bound_ok = false;
				out.ratio = cost_ratio(r.cost, *row.optimum);
				if (r.feasible && !row.optimum->inf)
					out.bound_ok = r.cost.v <= mode_factor(b, cfg.eps) * row.optimum->v;
			}
		} catch (const CapsExhausted&) {
			out.status = "caps";
		} catch (const BudgetExceeded&) {
			out.status = "budget";
		} catch (const std::exception& e) {
			out.status = std::string("error ") + e.what();
		}
		out.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - m0).count();
	}
	row.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
	return row;
}

/** \brief Runs the benchmark concurrently; rows are ordered by instance id. */
inline BenchReport run_bench(const BenchConfig& cfg)
{
	BenchReport rep;
	rep.eps = cfg.eps;
	rep.rows.resize(static_cast<std::size_t>(std::max(cfg.count, 0)));
	parallel_for(rep.rows.size(), cfg.threads,
	             [&](std::size_t k) { rep.rows[k] = bench_instance(cfg, static_cast<int>(k)); });
	return rep;
}

/** \brief Fixed CSV header; wall times are left out so reruns are byte-identical. */
inline constexpr const char* kBenchCsvHeader =
    "instance,seed,n,optimum,exact_cost,exact_ratio,oracle_cost,oracle_ratio,exhaustive_cost,exhaustive_ratio,"
    "tardiness_cost,tardiness_ratio,certificates";

inline std::string bench_csv(const BenchReport& rep)
{
	std::ostringstream os;
	os << kBenchCsvHeader << "\n";
	for (const BenchRow& r : rep.rows) {
		os << r.instance << "," << r.seed << "," << r.n << "," << (r.optimum ? cost_str(*r.optimum) : "");
		for (const ModeOutcome& m : r.modes) {
			os << ",";
			if (m.ran)
				os << (m.status == "ok" ? cost_str(m.cost) : m.status);
			else if (!m.status.empty())
				os << m.status;
			os << "," << (m.ratio ? q_str(*m.ratio) : "");
		}
		auto f = r.failed();
		os << ",";
		if (f.empty()) {
			os << "pass";
		} else {
			os << "fail:";
			for (std::size_t k = 0; k < f.size(); ++k)
				os << (k ? ";" : "") << f[k];
		}
		os << "\n";
	}
	return os.str();
}

inline nlohmann::json bench_json(const BenchReport& rep)
{
	nlohmann::json rows = nlohmann::json::array();
	for (const BenchRow& r : rep.rows) {
		nlohmann::json modes = nlohmann::json::object();
		for (std::size_t k = 0; k < r.modes.size(); ++k) {
			const ModeOutcome& m = r.modes[k];
			if (!m.ran && m.status.empty())
				continue;
			nlohmann::json o{{"status", m.status}};
			if (m.ran) {
				o["cost"] = cost_str(m.cost);
				o["ratio"] = m.ratio ? nlohmann::json(q_str(*m.ratio)) : nlohmann::json(nullptr);
				o["certificates"] = {{"reduction", m.certificates_ok}, {"schedule", m.schedule_ok}, {"ratio_bound", m.bound_ok}};
				o["wall_ms"] = m.wall_ms;
			}
			modes[backend_name(kBenchModes[k])] = o;
		}
		rows.push_back({{"instance", r.instance},
		                {"seed", r.seed},
		                {"n", r.n},
		                {"optimum", r.optimum ? nlohmann::json(cost_str(*r.optimum)) : nlohmann::json(nullptr)},
		                {"milestones_ok", r.milestones_ok},
		                {"modes", modes},
		                {"failed", r.failed()},
		                {"wall_ms", r.wall_ms}});
	}
	return nlohmann::json{{"eps", q_str(rep.eps)}, {"ok", rep.ok()}, {"rows", rows}};
}

} // namespace gspkit

#endif // GSPKIT_BENCH_HPP
