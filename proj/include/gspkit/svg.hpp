#ifndef GSPKIT_SVG_HPP
#define GSPKIT_SVG_HPP

#include "gspkit/rcp.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>

namespace gspkit {

/** \brief Pixels per unit of the drawing grid. */
inline constexpr int kSvgUnit = 16;

/**
 * \brief Renders an RCP instance as an SVG document.
 *
 * Row y is the band [y, y+1] above the time axis. Each rectangle is a box labelled with its
 * cost and value; a ray (s, t, d) is a downward arrow at x = t + 1/2 from the top of row s to
 * the axis, labelled with its demand. Rectangles in the optional selection are shaded. Element
 * classes are stable ("box", "box selected", "ray", "axis") so output can be diffed and counted.
 */
inline std::string render_svg(const RcpInstance& inst, const std::optional<Selection>& sel = std::nullopt)
{
	std::set<int> chosen;
	if (sel)
		chosen.insert(sel->begin(), sel->end());
	i64 xmax = 1, ymax = 0;
	for (const Row& w : inst.rows) {
		ymax = std::max(ymax, w.y + 1);
		for (const Rect& r : w.rects)
			xmax = std::max(xmax, r.b);
	}
	for (const Ray& l : inst.rays) {
		xmax = std::max(xmax, l.t + 1);
		ymax = std::max(ymax, l.s + 1);
	}
	ymax = std::max<i64>(ymax, 1);
	const i64 margin = 2 * kSvgUnit;
	const i64 width = xmax * kSvgUnit + 2 * margin;
	const i64 height = (ymax + 1) * kSvgUnit + 2 * margin;
	auto px = [&](i64 x2) { return margin + x2 * kSvgUnit / 2; }; // x2 is twice the x coordinate
	auto py = [&](i64 y) { return height - margin - y * kSvgUnit; };

	std::ostringstream os;
	os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
	   << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
	os << "<defs><marker id=\"head\" markerWidth=\"6\" markerHeight=\"6\" refX=\"3\" refY=\"5\" orient=\"auto\">"
	   << "<path d=\"M0,0 L6,0 L3,6 z\" fill=\"#c0392b\"/></marker></defs>\n";
	os << "<line class=\"axis\" x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(2 * xmax) << "\" y2=\""
	   << py(0) << "\" stroke=\"black\"/>\n";
	os << "<line class=\"axis\" x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0) << "\" y2=\""
	   << py(ymax) << "\" stroke=\"black\"/>\n";
	for (i64 x = 0; x <= xmax; ++x)
		os << "<text class=\"tick\" x=\"" << px(2 * x) << "\" y=\"" << py(0) + 12
		   << "\" font-size=\"9\" text-anchor=\"middle\">" << x << "</text>\n";
	for (const Row& w : inst.rows)
		for (const Rect& r : w.rects) {
			const bool on = chosen.count(r.id) > 0;
			os << "<rect class=\"box" << (on ? " selected" : "") << "\" data-id=\"" << r.id << "\" x=\"" << px(2 * r.a)
			   << "\" y=\"" << py(w.y + 1) << "\" width=\"" << (r.b - r.a) * kSvgUnit << "\" height=\"" << kSvgUnit
			   << "\" fill=\"" << (on ? "#9ecae1" : "white") << "\" stroke=\"black\"/>\n";
			os << "<text class=\"label\" x=\"" << (px(2 * r.a) + px(2 * r.b)) / 2 << "\" y=\"" << py(w.y) - 4
			   << "\" font-size=\"8\" text-anchor=\"middle\">c=" << q_str(r.c) << " p=" << r.p << "</text>\n";
		}
	for (const Ray& l : inst.rays) {
		const i64 x = px(2 * l.t + 1);
		os << "<g class=\"ray\"><line x1=\"" << x << "\" y1=\"" << py(l.s + 1) - 4 << "\" x2=\"" << x << "\" y2=\""
		   << py(0) - 6 << "\" stroke=\"#c0392b\" marker-end=\"url(#head)\"/>"
		   << "<text x=\"" << x + 3 << "\" y=\"" << py(l.s + 1) - 6 << "\" font-size=\"8\">d=" << l.d << "</text></g>\n";
	}
	os << "</svg>\n";
	return os.str();
}

} // namespace gspkit

#endif // GSPKIT_SVG_HPP
