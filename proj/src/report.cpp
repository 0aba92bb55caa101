#include "dreg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dreg {

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out) {
    const std::size_t cols = log.exported_columns;
    for (std::size_t c = 0; c < cols; ++c) out << (c ? "," : "") << log.columns[c];
    out << '\n';
    for (std::size_t r = 0; r < log.rows(); ++r) {
        for (std::size_t c = 0; c < cols; ++c)
            out << (c ? "," : "") << format_number(log.at(r, static_cast<int>(c)));
        out << '\n';
    }
}

void write_metrics(const RunMetrics& m, const TrajectoryLog& log, std::ostream& out) {
    out << "tail_max_error=" << format_number(m.tail_max_error) << '\n';
    for (std::size_t i = 0; i < m.k_sup.size(); ++i) {
        out << "k" << i + 1 << "_sup=" << format_number(m.k_sup[i]) << '\n';
        out << "theta" << i + 1 << "_sup=" << format_number(m.theta_sup[i]) << '\n';
    }
    out << "theta_monotone=" << (m.theta_monotone ? "true" : "false") << '\n';
    out << "state_sup=" << format_number(m.state_sup) << '\n';
    out << "input_bound=" << format_number(log.input_bound) << '\n';
    out << "exo_drive_sup=" << format_number(log.exo_drive_sup) << '\n';
}

namespace {

struct Panel {
    double x0, y0, w, h;
    double tmin, tmax, vmin, vmax;

    double px(double t) const { return x0 + (t - tmin) / (tmax - tmin) * w; }
    double py(double v) const { return y0 + h - (v - vmin) / (vmax - vmin) * h; }
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double x, const char* spec = "%.2f") {
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

void polyline(std::ostream& out, const Panel& p, const TrajectoryLog& log, int col,
              const std::string& color, double width, std::size_t step) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width << "\" points=\"";
    const auto& L = log.layout;
    for (std::size_t r = 0; r < log.rows(); r += step) {
        const double v = std::clamp(log.at(r, col), p.vmin, p.vmax);
        out << fmt(p.px(log.at(r, L.t))) << ',' << fmt(p.py(v)) << ' ';
    }
    out << "\"/>\n";
}

void frame(std::ostream& out, const Panel& p, const std::string& label) {
    out << "<rect x=\"" << fmt(p.x0) << "\" y=\"" << fmt(p.y0) << "\" width=\"" << fmt(p.w)
        << "\" height=\"" << fmt(p.h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    if (p.vmin < 0.0 && p.vmax > 0.0)
        out << "<line x1=\"" << fmt(p.x0) << "\" y1=\"" << fmt(p.py(0)) << "\" x2=\"" << fmt(p.x0 + p.w)
            << "\" y2=\"" << fmt(p.py(0)) << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
    out << "<text x=\"" << fmt(p.x0 + 6) << "\" y=\"" << fmt(p.y0 + 16) << "\" font-size=\"13\">" << label
        << "</text>\n";
    out << "<text x=\"" << fmt(p.x0 - 6) << "\" y=\"" << fmt(p.y0 + 10)
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(p.vmax, "%.3g") << "</text>\n";
    out << "<text x=\"" << fmt(p.x0 - 6) << "\" y=\"" << fmt(p.y0 + p.h)
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(p.vmin, "%.3g") << "</text>\n";
    for (int k = 0; k <= 6; ++k) {
        const double t = p.tmin + (p.tmax - p.tmin) * k / 6.0;
        out << "<text x=\"" << fmt(p.px(t)) << "\" y=\"" << fmt(p.y0 + p.h + 14)
            << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(t, "%.3g") << "</text>\n";
    }
}

std::pair<double, double> range_of(const TrajectoryLog& log, const std::vector<int>& cols) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t r = 0; r < log.rows(); ++r)
        for (int c : cols) {
            lo = std::min(lo, log.at(r, c));
            hi = std::max(hi, log.at(r, c));
        }
    if (hi - lo < 1e-12) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

}  // namespace

void write_tracking_svg(const TrajectoryLog& log, std::ostream& out, const std::string& title) {
    const double width = 900, height = 620;
    const auto& L = log.layout;
    const std::size_t rows = log.rows();
    const double tmin = rows ? log.at(0, L.t) : 0.0;
    const double tmax = rows > 1 ? log.at(rows - 1, L.t) : tmin + 1.0;
    const std::size_t step = std::max<std::size_t>(1, rows / 2000);

    std::vector<int> ycols{L.y0}, ecols;
    for (const auto& a : L.agents) {
        ycols.push_back(a.y);
        ecols.push_back(a.e);
    }
    const auto [ylo, yhi] = range_of(log, ycols);
    const auto [elo, ehi] = range_of(log, ecols);
    const Panel top{70, 40, width - 100, 240, tmin, tmax, ylo, yhi};
    const Panel bottom{70, 340, width - 100, 240, tmin, tmax, elo, ehi};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
        out << "<text x=\"" << width / 2 << "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">" << title
            << "</text>\n";
    frame(out, top, "outputs: y0 (black), y_i");
    frame(out, bottom, "tracking errors e_i = y_i - y0");
    polyline(out, top, log, L.y0, "#000", 2.0, step);
    for (std::size_t i = 0; i < L.agents.size(); ++i) {
        const std::string color = kPalette[i % std::size(kPalette)];
        polyline(out, top, log, L.agents[i].y, color, 1.0, step);
        polyline(out, bottom, log, L.agents[i].e, color, 1.0, step);
        out << "<text x=\"" << fmt(width - 30 - 60.0 * (L.agents.size() - i)) << "\" y=\"" << 334
            << "\" font-size=\"12\" fill=\"" << color << "\">agent " << i + 1 << "</text>\n";
    }
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 8
        << "\" font-size=\"12\" text-anchor=\"middle\">t [s]</text>\n";
    out << "</svg>\n";
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    std::size_t n = 0;
    for (const auto& o : result.outcomes) n = std::max(n, o.metrics.k_sup.size());
    out << "sample,mu_v,mu_x,mu_1,mu_2,mu_3,status,tail_max_error";
    for (std::size_t i = 0; i < n; ++i) out << ",k" << i + 1 << "_sup,theta" << i + 1 << "_sup";
    out << ",theta_monotone,state_sup\n";
    for (std::size_t s = 0; s < result.outcomes.size(); ++s) {
        const auto& o = result.outcomes[s];
        out << s;
        for (std::size_t k = 0; k < Mu::size; ++k) out << ',' << format_number(o.mu[k]);
        const char* status = o.diverged ? "diverged" : (o.error.empty() ? "ok" : "error");
        out << ',' << status << ',' << (o.ok() ? format_number(o.metrics.tail_max_error) : "nan");
        for (std::size_t i = 0; i < n; ++i) {
            const bool have = o.ok() && i < o.metrics.k_sup.size();
            out << ',' << (have ? format_number(o.metrics.k_sup[i]) : "nan") << ','
                << (have ? format_number(o.metrics.theta_sup[i]) : "nan");
        }
        out << ',' << (o.metrics.theta_monotone ? "true" : "false") << ','
            << (o.ok() ? format_number(o.metrics.state_sup) : "nan") << '\n';
    }
}

}  // namespace dreg
