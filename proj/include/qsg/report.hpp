#ifndef QSG_REPORT_HPP
#define QSG_REPORT_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "qsg/bounds.hpp"
#include "qsg/errors.hpp"
#include "qsg/game.hpp"
#include "qsg/sim.hpp"

#ifndef QSG_BUILD_ID
#define QSG_BUILD_ID "dev"
#endif

namespace qsg {

// fixed-format double so CSV output is byte-identical across runs
inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string fmt_g6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

// "(a0,a1|b0)" style label for a joint action profile, A-seats before the bar
inline std::string profile_label(const NormalFormGame& game, int ja, int jb) {
    std::string s = "(";
    const std::vector<int> aa = game.decode_joint_a(ja);
    const std::vector<int> bb = game.decode_joint_b(jb);
    for (std::size_t k = 0; k < aa.size(); ++k) s += (k ? "," : "") + std::to_string(aa[k]);
    if (!aa.empty() && !bb.empty()) s += "|";
    for (std::size_t k = 0; k < bb.size(); ++k) s += (k ? "," : "") + std::to_string(bb[k]);
    return s + ")";
}

// CSV field quoting for names that embed commas (multi-agent profiles)
inline std::string csv_field(const std::string& s) {
    if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// One row per stage: running-mean (or windowed) frequency per joint action
// profile, followed by each agent's running-mean payoff. Metadata lines
// echo the resolved configuration so a run is reproducible from its output.
inline void write_summary_csv(const std::string& path, const TrialSummary& s,
                              const NormalFormGame& game,
                              const std::vector<std::string>& meta, int window = 0) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << "# qsg summary v1 (build " << QSG_BUILD_ID << ")\n";
    for (const std::string& m : meta) out << "# " << m << "\n";
    out << "# trials=" << s.n_trials << " stages=" << s.stages << " base_seed=" << s.base_seed
        << " gamma=" << fmt_g17(s.gamma) << " clipped=" << s.clipped << "\n";
    out << "# normalized_utility_mean:";
    for (int ag = 0; ag < s.num_agents(); ++ag) out << " " << fmt_g17(s.utility_mean(ag));
    out << "\n# normalized_utility_se:";
    for (int ag = 0; ag < s.num_agents(); ++ag) out << " " << fmt_g17(s.utility_se(ag));
    out << "\n";
    out << "stage";
    for (int ja = 0; ja < s.num_joint_a; ++ja)
        for (int jb = 0; jb < s.num_joint_b; ++jb)
            out << "," << csv_field("freq_" + profile_label(game, ja, jb));
    for (int ag = 0; ag < s.num_agents(); ++ag) out << ",payoff_agent" << ag;
    out << "\n";
    for (int k = 0; k < s.stages; ++k) {
        out << k;
        for (int p = 0; p < s.num_profiles(); ++p)
            out << "," << fmt_g17(window > 0 ? s.freq_window(k, p, window) : s.freq(k, p));
        for (int ag = 0; ag < s.num_agents(); ++ag) out << "," << fmt_g17(s.running_payoff(k, ag));
        out << "\n";
    }
}

// Static SVG line chart of the per-profile running means (one polyline per
// joint profile), axes and legend included. No interactivity by design.
inline void write_profile_chart_svg(const std::string& path, const TrialSummary& s,
                                    const NormalFormGame& game, const std::string& title,
                                    int window = 0) {
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
                                    "#98df8a", "#ff9896", "#c5b0d5", "#c49c94"};
    const int w = 720, h = 420, ml = 60, mr = 170, mt = 40, mb = 50;
    const int pw = w - ml - mr, ph = h - mt - mb;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">"
        << title << "</text>\n";
    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 5; ++tick) {
        const double fy = mt + ph - ph * tick / 5.0;
        out << "<line x1=\"" << ml - 4 << "\" y1=\"" << fy << "\" x2=\"" << ml << "\" y2=\"" << fy
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << fy + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
            << fmt_g6(tick / 5.0) << "</text>\n";
        const double fx = ml + pw * tick / 5.0;
        out << "<line x1=\"" << fx << "\" y1=\"" << mt + ph << "\" x2=\"" << fx << "\" y2=\""
            << mt + ph + 4 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fx << "\" y=\"" << mt + ph + 18
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
            << s.stages * tick / 5 << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << h - 12
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">stage</text>\n";
    const int step = std::max(1, s.stages / pw);
    for (int p = 0; p < s.num_profiles(); ++p) {
        out << "<polyline fill=\"none\" stroke=\"" << kColors[p % 16]
            << "\" stroke-width=\"1.5\" points=\"";
        for (int k = 0; k < s.stages; k += step) {
            const double f = window > 0 ? s.freq_window(k, p, window) : s.freq(k, p);
            const double x = ml + pw * (static_cast<double>(k) / std::max(1, s.stages - 1));
            const double y = mt + ph - ph * f;
            out << fmt_g6(x) << "," << fmt_g6(y) << " ";
        }
        out << "\"/>\n";
        const int ja = p / s.num_joint_b, jb = p % s.num_joint_b;
        const double ly = mt + 16 + 16.0 * p;
        out << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << ml + pw + 30
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << kColors[p % 16]
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << ml + pw + 35 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << profile_label(game, ja, jb)
            << "</text>\n";
    }
    out << "</svg>\n";
}

inline void write_bound_reports(const std::string& text_path, const std::string& json_path,
                                const std::vector<BoundReport>& reports) {
    std::ofstream out(text_path);
    if (!out) throw ConfigError("cannot open for writing: " + text_path);
    out << "bound verification (build " << QSG_BUILD_ID << ")\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%-44s %6s %14s %14s  %s\n", "check", "kappa", "empirical",
                  "theoretical", "status");
    out << line;
    for (const BoundReport& r : reports) {
        std::snprintf(line, sizeof(line), "%-44s %6d %14.6g %14.6g  %s\n", r.name.c_str(), r.kappa,
                      r.empirical_gap, r.theoretical_gap,
                      r.satisfied ? (r.note.empty() ? "ok" : r.note.c_str()) : "VIOLATED");
        out << line;
    }
    std::ofstream js(json_path);
    if (!js) throw ConfigError("cannot open for writing: " + json_path);
    for (const BoundReport& r : reports) {
        js << "{\"name\":\"" << r.name << "\",\"kappa\":" << r.kappa
           << ",\"m_kappa\":" << fmt_g17(r.m_kappa) << ",\"l_kappa\":" << fmt_g17(r.l_kappa)
           << ",\"l0\":" << fmt_g17(r.l0) << ",\"delta\":" << fmt_g17(r.delta)
           << ",\"theoretical_gap\":" << fmt_g17(r.theoretical_gap)
           << ",\"empirical_gap\":" << fmt_g17(r.empirical_gap)
           << ",\"satisfied\":" << (r.satisfied ? "true" : "false") << ",\"note\":\"" << r.note
           << "\"}\n";
    }
}

} // namespace qsg

#endif // QSG_REPORT_HPP
