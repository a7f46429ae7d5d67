#ifndef GSPKIT_IO_HPP
#define GSPKIT_IO_HPP

#include "gspkit/approx.hpp"
#include "gspkit/gsp.hpp"
#include "gspkit/pipeline.hpp"
#include "gspkit/rcp.hpp"
#include "gspkit/reduction.hpp"
#include "gspkit/tardiness.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gspkit {

using json = nlohmann::json;

/** \brief Malformed input; the message names the file position or the JSON path. */
struct IoError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

/** \brief Parses JSON text; syntax errors report line and column. */
inline json parse_json_text(const std::string& text, const std::string& source = "input")
{
	try {
		return json::parse(text);
	} catch (const json::parse_error& e) {
		std::size_t line = 1, col = 1;
		for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
			if (text[k] == '\n') {
				++line;
				col = 1;
			} else {
				++col;
			}
		}
		throw IoError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON parse error: " +
		              e.what());
	}
}

inline json read_json_file(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
		throw IoError(path + ": cannot open");
	std::stringstream ss;
	ss << in.rdbuf();
	return parse_json_text(ss.str(), path);
}

inline void write_text_file(const std::string& path, const std::string& text)
{
	std::ofstream out(path);
	if (!out)
		throw IoError(path + ": cannot write");
	out << text;
}

inline void write_json_file(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& path)
{
	if (!j.is_object() || !j.contains(key))
		throw IoError(path + ": missing field '" + key + "'");
	return j.at(key);
}

inline i64 get_int(const json& j, const std::string& path)
{
	if (!j.is_number_integer())
		throw IoError(path + ": expected an integer");
	return j.get<i64>();
}

inline i64 int_field(const json& j, const char* key, const std::string& path, std::optional<i64> dflt = std::nullopt)
{
	if (dflt && (!j.is_object() || !j.contains(key)))
		return *dflt;
	return get_int(field(j, key, path), path + "." + key);
}

inline Q get_q(const json& j, const std::string& path)
{
	try {
		if (j.is_number_integer())
			return Q(j.get<long>());
		if (j.is_string())
			return parse_q(j.get<std::string>());
	} catch (const std::exception& e) {
		throw IoError(path + ": " + e.what());
	}
	throw IoError(path + ": expected an integer or a \"num/den\" string");
}

inline Cost get_cost(const json& j, const std::string& path)
{
	if (j.is_string() && j.get<std::string>() == "inf")
		return Cost::infinity();
	return Cost(get_q(j, path));
}

inline json q_json(const Q& q) { return q_str(q); }

} // namespace detail

/** \brief Reads {"jobs":[{"id","r","p","cost":{"kind","w","d","steps"}}]}. */
inline GspInstance gsp_from_json(const json& j)
{
	GspInstance g;
	const json& jobs = detail::field(j, "jobs", "$");
	if (!jobs.is_array())
		throw IoError("$.jobs: expected an array");
	for (std::size_t k = 0; k < jobs.size(); ++k) {
		const std::string path = "$.jobs[" + std::to_string(k) + "]";
		const json& jj = jobs[k];
		Job job;
		job.id = static_cast<int>(detail::int_field(jj, "id", path, static_cast<i64>(k)));
		job.r = detail::int_field(jj, "r", path);
		job.p = detail::int_field(jj, "p", path);
		const json& c = detail::field(jj, "cost", path);
		const json& kind = detail::field(c, "kind", path + ".cost");
		if (!kind.is_string())
			throw IoError(path + ".cost.kind: expected a string");
		auto kk = kind_from_name(kind.get<std::string>());
		if (!kk)
			throw IoError(path + ".cost.kind: unknown kind '" + kind.get<std::string>() + "'");
		job.fn.kind = *kk;
		job.fn.w = detail::int_field(c, "w", path + ".cost", 0);
		job.fn.d = detail::int_field(c, "d", path + ".cost", 0);
		if (c.contains("steps")) {
			const json& st = c.at("steps");
			for (std::size_t q = 0; q < st.size(); ++q) {
				const std::string sp = path + ".cost.steps[" + std::to_string(q) + "]";
				job.fn.steps.push_back({detail::int_field(st[q], "t", sp), detail::get_cost(detail::field(st[q], "c", sp), sp + ".c")});
			}
		}
		g.jobs.push_back(job);
	}
	for (std::size_t k = 0; k < g.jobs.size(); ++k)
		if (g.jobs[k].id != static_cast<int>(k))
			throw IoError("$.jobs[" + std::to_string(k) + "].id: ids must be 0..n-1 in order");
	return g;
}

inline json gsp_to_json(const GspInstance& g)
{
	json jobs = json::array();
	for (const Job& job : g.jobs) {
		json c{{"kind", kind_name(job.fn.kind)}};
		if (job.fn.kind != CostKind::Step && job.fn.kind != CostKind::Deadline)
			c["w"] = job.fn.w;
		if (job.fn.kind == CostKind::Tardiness || job.fn.kind == CostKind::Tardy || job.fn.kind == CostKind::Deadline)
			c["d"] = job.fn.d;
		if (job.fn.kind == CostKind::Step) {
			json st = json::array();
			for (const auto& [t, v] : job.fn.steps)
				st.push_back({{"t", t}, {"c", cost_str(v)}});
			c["steps"] = st;
		}
		jobs.push_back({{"id", job.id}, {"r", job.r}, {"p", job.p}, {"cost", c}});
	}
	return json{{"jobs", jobs}};
}

/** \brief Reads {"rows":[{"j","rects":[{"a","b","c","p"}]}],"rays":[{"s","t","d"}]}; ids are row-major. */
inline RcpInstance rcp_from_json(const json& j)
{
	RcpInstance in;
	const json& rows = detail::field(j, "rows", "$");
	if (!rows.is_array())
		throw IoError("$.rows: expected an array");
	for (std::size_t k = 0; k < rows.size(); ++k) {
		const std::string path = "$.rows[" + std::to_string(k) + "]";
		Row w;
		w.y = detail::int_field(rows[k], "j", path);
		const json& rects = detail::field(rows[k], "rects", path);
		for (std::size_t q = 0; q < rects.size(); ++q) {
			const std::string rp = path + ".rects[" + std::to_string(q) + "]";
			Rect r;
			r.a = detail::int_field(rects[q], "a", rp);
			r.b = detail::int_field(rects[q], "b", rp);
			r.c = detail::get_q(detail::field(rects[q], "c", rp), rp + ".c");
			r.p = detail::int_field(rects[q], "p", rp);
			w.rects.push_back(r);
		}
		in.rows.push_back(w);
	}
	if (j.contains("rays")) {
		const json& rays = j.at("rays");
		for (std::size_t k = 0; k < rays.size(); ++k) {
			const std::string path = "$.rays[" + std::to_string(k) + "]";
			in.rays.push_back(Ray{detail::int_field(rays[k], "s", path), detail::int_field(rays[k], "t", path),
			                      detail::int_field(rays[k], "d", path)});
		}
	}
	renumber(in);
	return in;
}

/** \brief Writes an instance whose ids are already row-major (each rectangle also carries its id). */
inline json rcp_to_json(const RcpInstance& in)
{
	json rows = json::array();
	for (const Row& w : in.rows) {
		json rects = json::array();
		for (const Rect& r : w.rects)
			rects.push_back({{"id", r.id}, {"a", r.a}, {"b", r.b}, {"c", q_str(r.c)}, {"p", r.p}});
		rows.push_back({{"j", w.y}, {"rects", rects}});
	}
	json rays = json::array();
	for (const Ray& l : in.rays)
		rays.push_back({{"s", l.s}, {"t", l.t}, {"d", l.d}});
	return json{{"rows", rows}, {"rays", rays}};
}

/** \brief Accepts a plain id array or {"selection":[...]}. */
inline Selection selection_from_json(const json& j)
{
	const json& a = j.is_object() ? detail::field(j, "selection", "$") : j;
	if (!a.is_array())
		throw IoError("$.selection: expected an array of rectangle ids");
	Selection s;
	for (std::size_t k = 0; k < a.size(); ++k)
		s.push_back(static_cast<int>(detail::get_int(a[k], "$.selection[" + std::to_string(k) + "]")));
	std::sort(s.begin(), s.end());
	return s;
}

inline json result_to_json(const RcpResult& r)
{
	return json{{"feasible", r.feasible}, {"selection", r.sel}, {"cost", q_str(r.cost)}};
}

inline json schedule_to_json(const Schedule& s, const std::optional<Cost>& cost = std::nullopt)
{
	json segs = json::array();
	for (const Segment& g : s.segments)
		segs.push_back({{"job", g.job}, {"start", g.start}, {"end", g.end}});
	json out{{"completions", s.completions}, {"segments", segs}};
	if (cost)
		out["cost"] = cost_str(*cost);
	return out;
}

inline Schedule schedule_from_json(const json& j)
{
	Schedule s;
	const json& segs = detail::field(j, "segments", "$");
	for (std::size_t k = 0; k < segs.size(); ++k) {
		const std::string path = "$.segments[" + std::to_string(k) + "]";
		s.segments.push_back(Segment{static_cast<int>(detail::int_field(segs[k], "job", path)),
		                             detail::int_field(segs[k], "start", path), detail::int_field(segs[k], "end", path)});
	}
	if (j.contains("completions"))
		for (std::size_t k = 0; k < j.at("completions").size(); ++k)
			s.completions.push_back(detail::get_int(j.at("completions")[k], "$.completions[" + std::to_string(k) + "]"));
	return s;
}

/** \brief Sidecar mapping written next to a reduced RCP instance. */
inline json varmap_to_json(const VarMap& vm)
{
	json ms = json::array();
	for (const Milestones& m : vm.ms)
		ms.push_back(m.m);
	json rects = json::array();
	for (const auto& [id, o] : vm.rect_origin)
		rects.push_back({{"id", id}, {"job", o.job}, {"i_first", o.i_first}, {"i_last", o.i_last},
		                 {"base_cost", q_str(o.base_cost)}});
	json rays = json::array();
	for (const RayOrigin& o : vm.ray_origin)
		rays.push_back({{"s", o.s}, {"t", o.t}, {"first_job", o.first_job}, {"forced_reduction", o.forced_reduction}});
	return json{{"eps", q_str(vm.eps)},         {"T", vm.T},
	            {"milestones", ms},             {"tau", vm.tau},
	            {"status", vm.status},          {"forced_upto", vm.forced_upto},
	            {"forced_cost", q_str(vm.forced_cost)}, {"rect_origin", rects},
	            {"ray_origin", rays},           {"infeasible", vm.infeasible},
	            {"reason", vm.reason},          {"k_bound_ok", vm.k_bound_ok}};
}

inline VarMap varmap_from_json(const json& j)
{
	VarMap vm;
	vm.eps = detail::get_q(detail::field(j, "eps", "$"), "$.eps");
	vm.T = detail::int_field(j, "T", "$");
	for (const json& m : detail::field(j, "milestones", "$")) {
		Milestones x;
		x.m = m.get<std::vector<i64>>();
		vm.ms.push_back(x);
	}
	vm.tau = j.at("tau").get<std::vector<std::vector<int>>>();
	vm.status = j.at("status").get<std::vector<std::vector<std::string>>>();
	vm.forced_upto = j.at("forced_upto").get<std::vector<int>>();
	vm.forced_cost = detail::get_q(j.at("forced_cost"), "$.forced_cost");
	for (const json& r : j.at("rect_origin"))
		vm.rect_origin[r.at("id").get<int>()] =
		    RectOrigin{r.at("job").get<int>(), r.at("i_first").get<int>(), r.at("i_last").get<int>(),
		               detail::get_q(r.at("base_cost"), "$.rect_origin.base_cost")};
	for (const json& r : j.at("ray_origin"))
		vm.ray_origin.push_back(RayOrigin{r.at("s").get<i64>(), r.at("t").get<i64>(), r.at("first_job").get<int>(),
		                                  r.at("forced_reduction").get<i64>()});
	vm.infeasible = j.value("infeasible", false);
	vm.reason = j.value("reason", std::string());
	vm.k_bound_ok = j.value("k_bound_ok", true);
	return vm;
}

/** \brief Per-node ledger of the recursive approximation. */
inline json approx_report_to_json(const ApproxReport& rep)
{
	json nodes = json::array();
	for (const NodeCertificate& n : rep.nodes) {
		json o{{"depth", n.depth},
		       {"L", n.L},
		       {"R", n.R},
		       {"feasible", n.feasible},
		       {"cost", q_str(n.out_cost)},
		       {"candidates", n.candidates},
		       {"ok", n.ok()}};
		if (n.has_reference) {
			o["reference_cost"] = q_str(n.ref_cost);
			o["reference_c_apx"] = q_str(n.ref_capx);
			o["level_bound"] = q_str(n.level_bound);
			o["certificates"] = {{"level", n.level_ok},           {"splus_budget", n.splus_budget_ok},
			                     {"surplus", n.surplus_ok},       {"sandwich", n.sandwich_ok},
			                     {"step_bound", n.step_bound_ok}, {"decomposition", n.decomposition_ok},
			                     {"child_references", n.child_refs_ok}, {"cost_combination", n.cost_combo_ok}};
			o["steps"] = n.steps;
			o["steps_bound"] = q_str(n.steps_bound);
		}
		if (!n.note.empty())
			o["note"] = n.note;
		nodes.push_back(o);
	}
	return json{{"ok", rep.ok()}, {"candidates", rep.candidates}, {"nodes", nodes}};
}

inline json tardiness_report_to_json(const TardinessReport& rep)
{
	json nodes = json::array();
	for (const TNodeCertificate& n : rep.nodes) {
		json groups = json::array();
		for (const TGroupLedger& g : n.groups)
			groups.push_back({{"key", tgroup_key_str(g.key)},
			                  {"counts", g.counts},
			                  {"selected_rows", g.selected_y},
			                  {"cost", q_str(g.cost)},
			                  {"reference_cost", q_str(g.ref_cost)},
			                  {"cost_ok", g.cost_ok},
			                  {"dominance_ok", g.dominance_ok}});
		json o{{"depth", n.depth}, {"L", n.L},         {"R", n.R},           {"feasible", n.feasible},
		       {"cost", q_str(n.out_cost)}, {"ok", n.ok()}, {"groups", groups}, {"candidates", n.candidates}};
		if (n.has_reference) {
			o["reference_cost"] = q_str(n.ref_cost);
			o["ratio_ok"] = n.ratio_ok;
			o["child_references_ok"] = n.child_refs_ok;
		}
		if (!n.note.empty())
			o["note"] = n.note;
		nodes.push_back(o);
	}
	return json{{"ok", rep.ok()}, {"candidates", rep.candidates}, {"nodes", nodes}};
}

inline json gsp_result_to_json(const GspSolveResult& r)
{
	json runs = json::array();
	for (const RcpRun& x : r.runs) {
		json o{{"piece", x.piece},
		       {"offset", x.offset},
		       {"rows", x.rows},
		       {"rects", x.rects},
		       {"rays", x.rays},
		       {"feasible", x.feasible},
		       {"rcp_cost", q_str(x.rcp_cost)},
		       {"schedule_cost", cost_str(x.schedule_cost)},
		       {"certificates_ok", x.certificates_ok}};
		if (!x.approx.nodes.empty())
			o["approx"] = approx_report_to_json(x.approx);
		if (!x.tardiness.nodes.empty())
			o["tardiness"] = tardiness_report_to_json(x.tardiness);
		runs.push_back(o);
	}
	json out{{"feasible", r.feasible},
	         {"cost", cost_str(r.cost)},
	         {"raw_cost", cost_str(r.raw_cost)},
	         {"certificates_ok", r.certificates_ok},
	         {"schedule", schedule_to_json(r.schedule)},
	         {"runs", runs},
	         {"notes", r.notes}};
	return out;
}

} // namespace gspkit

#endif // GSPKIT_IO_HPP
