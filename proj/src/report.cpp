#include "hdrbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "hdrbench/image.hpp"

namespace hdrbench {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string render_ranking_svg(const ScoreTable& table, const RankingResult& ranking) {
    const int label_w = 150;
    const int plot_w = 560;
    const int row_h = 30;
    const int top = 50;
    int n = static_cast<int>(ranking.methods_by_mean.size());

    // Scale spans whisker extremes over all methods, padded 5%.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    struct Box {
        double min, q1, med, q3, max, mean, se;
    };
    std::vector<Box> boxes;
    for (const std::string& method : ranking.methods_by_mean) {
        std::vector<double> s = method_samples(table, ranking.metric, method);
        Box b;
        b.min = *std::min_element(s.begin(), s.end());
        b.max = *std::max_element(s.begin(), s.end());
        b.q1 = percentile(s, 25.0);
        b.med = percentile(s, 50.0);
        b.q3 = percentile(s, 75.0);
        auto agg = std::find_if(ranking.aggregates.begin(), ranking.aggregates.end(),
                                [&](const Aggregate& a) { return a.method == method; });
        b.mean = agg->mean;
        b.se = agg->standard_error;
        lo = std::min({lo, b.min, b.mean - b.se});
        hi = std::max({hi, b.max, b.mean + b.se});
        boxes.push_back(b);
    }
    double pad = (hi - lo) * 0.05;
    if (pad == 0.0) pad = std::max(1.0, std::fabs(hi)) * 0.05;
    lo -= pad;
    hi += pad;
    auto sx = [&](double v) { return label_w + (v - lo) / (hi - lo) * plot_w; };

    // Ranking strip below the boxes: methods in rank order, links drawn as
    // stacked horizontal connectors between non-significant pairs.
    int strip_top = top + n * row_h + 40;
    std::vector<std::pair<int, int>> link_idx;
    for (const auto& [a, b] : ranking.links) {
        auto pos = [&](const std::string& m) {
            return static_cast<int>(std::find(ranking.methods_by_mean.begin(),
                                              ranking.methods_by_mean.end(), m) -
                                    ranking.methods_by_mean.begin());
        };
        int ia = pos(a);
        int ib = pos(b);
        link_idx.emplace_back(std::min(ia, ib), std::max(ia, ib));
    }
    std::sort(link_idx.begin(), link_idx.end());
    int strip_h = 40 + static_cast<int>(link_idx.size()) * 10 + 20;
    int height = strip_top + strip_h + 20;
    int width = label_w + plot_w + 40;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << label_w << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\""
        << " font-weight=\"bold\">" << xml_escape(ranking.metric)
        << " per method (box: quartiles, diamond: mean &#177; SE)</text>\n";

    // Axis.
    int axis_y = top + n * row_h + 8;
    svg << "<line x1=\"" << label_w << "\" y1=\"" << axis_y << "\" x2=\"" << label_w + plot_w
        << "\" y2=\"" << axis_y << "\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        double v = lo + (hi - lo) * k / 4.0;
        double x = sx(v);
        svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << axis_y << "\" x2=\"" << fmt(x)
            << "\" y2=\"" << axis_y + 4 << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << fmt(x) << "\" y=\"" << axis_y + 16
            << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" << fmt(v)
            << "</text>\n";
    }

    for (int i = 0; i < n; ++i) {
        const Box& b = boxes[i];
        int cy = top + i * row_h + row_h / 2;
        svg << "<text x=\"" << label_w - 8 << "\" y=\"" << cy + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">"
            << xml_escape(ranking.methods_by_mean[i]) << "</text>\n";
        // Whiskers.
        svg << "<line x1=\"" << fmt(sx(b.min)) << "\" y1=\"" << cy << "\" x2=\"" << fmt(sx(b.q1))
            << "\" y2=\"" << cy << "\" stroke=\"#666\"/>\n";
        svg << "<line x1=\"" << fmt(sx(b.q3)) << "\" y1=\"" << cy << "\" x2=\"" << fmt(sx(b.max))
            << "\" y2=\"" << cy << "\" stroke=\"#666\"/>\n";
        // Box and median.
        svg << "<rect x=\"" << fmt(sx(b.q1)) << "\" y=\"" << cy - 8 << "\" width=\""
            << fmt(std::max(sx(b.q3) - sx(b.q1), 0.5)) << "\" height=\"16\" fill=\"#cfe2f3\""
            << " stroke=\"#1f4e79\"/>\n";
        svg << "<line x1=\"" << fmt(sx(b.med)) << "\" y1=\"" << cy - 8 << "\" x2=\""
            << fmt(sx(b.med)) << "\" y2=\"" << cy + 8 << "\" stroke=\"#1f4e79\"/>\n";
        // Mean +- SE.
        svg << "<line x1=\"" << fmt(sx(b.mean - b.se)) << "\" y1=\"" << cy << "\" x2=\""
            << fmt(sx(b.mean + b.se)) << "\" y2=\"" << cy << "\" stroke=\"#b00\""
            << " stroke-width=\"2\"/>\n";
        double mx = sx(b.mean);
        svg << "<path d=\"M " << fmt(mx) << " " << cy - 6 << " L " << fmt(mx + 5) << " " << cy
            << " L " << fmt(mx) << " " << cy + 6 << " L " << fmt(mx - 5) << " " << cy
            << " Z\" fill=\"#b00\"/>\n";
    }

    // Ranking strip.
    svg << "<text x=\"" << label_w << "\" y=\"" << strip_top
        << "\" font-family=\"sans-serif\" font-size=\"13\" font-weight=\"bold\">ranking"
        << " (best to worst, bars join statistically tied methods, p &gt; "
        << fmt(ranking.p_threshold) << ")</text>\n";
    auto strip_x = [&](int i) {
        return label_w + 30 + (plot_w - 60) * (n > 1 ? static_cast<double>(i) / (n - 1) : 0.5);
    };
    int names_y = strip_top + 22;
    for (int i = 0; i < n; ++i) {
        svg << "<text x=\"" << fmt(strip_x(i)) << "\" y=\"" << names_y
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
            << xml_escape(ranking.methods_by_mean[i]) << "</text>\n";
    }
    int link_y = names_y + 14;
    for (const auto& [ia, ib] : link_idx) {
        svg << "<line x1=\"" << fmt(strip_x(ia)) << "\" y1=\"" << link_y << "\" x2=\""
            << fmt(strip_x(ib)) << "\" y2=\"" << link_y
            << "\" stroke=\"#333\" stroke-width=\"3\" stroke-linecap=\"round\"/>\n";
        link_y += 10;
    }

    svg << "</svg>\n";
    return svg.str();
}

std::vector<std::string> emit_reports(const ScoreTable& table,
                                      const std::vector<RankingResult>& rankings,
                                      const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;

    for (const std::string& metric : table.metrics()) {
        std::string path = (std::filesystem::path(out_dir) / ("scores_" + metric + ".csv")).string();
        write_score_csv(table, metric, path);
        written.push_back(path);
    }

    nlohmann::json summary;
    for (const RankingResult& r : rankings) {
        nlohmann::json jr;
        jr["p_threshold"] = r.p_threshold;
        jr["paired"] = r.paired;
        jr["methods_by_mean"] = r.methods_by_mean;
        nlohmann::json aggs = nlohmann::json::array();
        for (const Aggregate& a : r.aggregates)
            aggs.push_back({{"method", a.method},
                            {"mean", a.mean},
                            {"standard_error", a.standard_error},
                            {"n", a.n}});
        jr["aggregates"] = aggs;
        nlohmann::json pvals = nlohmann::json::array();
        for (const auto& [pair, p] : r.pairwise_p)
            pvals.push_back({{"a", pair.first}, {"b", pair.second}, {"p", p}});
        jr["pairwise_p"] = pvals;
        nlohmann::json links = nlohmann::json::array();
        for (const auto& [a, b] : r.links) links.push_back({a, b});
        jr["links"] = links;
        summary[r.metric] = jr;

        std::string svg_path =
            (std::filesystem::path(out_dir) / ("ranking_" + r.metric + ".svg")).string();
        std::ofstream svg(svg_path);
        if (!svg) throw std::runtime_error("cannot write " + svg_path);
        svg << render_ranking_svg(table, r);
        written.push_back(svg_path);
    }

    std::string json_path = (std::filesystem::path(out_dir) / "summary.json").string();
    std::ofstream jf(json_path);
    if (!jf) throw std::runtime_error("cannot write " + json_path);
    jf << summary.dump(2) << "\n";
    written.push_back(json_path);
    return written;
}

}  // namespace hdrbench
