#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "spsreg/errors.hpp"
#include "spsreg/harness.hpp"

namespace spsreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Round-trip double formatting: 17 significant digits recover the exact bits.
std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void check_nonempty(const SizeTable& table) {
    if (table.methods.empty() || table.ts.empty())
        throw ConfigError("size table is empty");
    for (const auto& col : table.columns)
        if (col.size() != table.ts.size())
            throw ConfigError("size table columns are ragged");
}

} // namespace

OutputFormat format_from_name(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "svg") return OutputFormat::Svg;
    if (name == "gnuplot") return OutputFormat::Gnuplot;
    throw ConfigError("unknown output format: " + name);
}

std::string table_to_csv(const SizeTable& table) {
    check_nonempty(table);
    std::string out = "t,method,size\n";
    for (std::size_t m = 0; m < table.methods.size(); ++m)
        for (std::size_t i = 0; i < table.ts.size(); ++i) {
            out += std::to_string(table.ts[i]);
            out += ',';
            out += method_name(table.methods[m]);
            out += ',';
            out += fmt_double(table.columns[m][i]);
            out += '\n';
        }
    return out;
}

SizeTable table_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "t,method,size")
        throw ConfigError("size CSV: missing 't,method,size' header");

    SizeTable table;
    std::vector<std::vector<long>> per_method_ts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw ConfigError("size CSV: malformed row: " + line);
        const long t = std::stol(line.substr(0, c1));
        const Method m = method_from_name(line.substr(c1 + 1, c2 - c1 - 1));
        const std::string val = line.substr(c2 + 1);
        const double v = val == "inf" ? kInf : std::stod(val);

        auto it = std::find(table.methods.begin(), table.methods.end(), m);
        if (it == table.methods.end()) {
            table.methods.push_back(m);
            table.columns.emplace_back();
            per_method_ts.emplace_back();
            it = std::prev(table.methods.end());
        }
        const auto idx = static_cast<std::size_t>(it - table.methods.begin());
        table.columns[idx].push_back(v);
        per_method_ts[idx].push_back(t);
    }
    if (table.methods.empty()) throw ConfigError("size CSV: no data rows");
    table.ts = per_method_ts.front();
    for (const auto& ts : per_method_ts)
        if (ts != table.ts)
            throw ConfigError("size CSV: methods disagree on the time grid");
    return table;
}

namespace {

const char* method_color(Method m) {
    switch (m) {
        case Method::SpsEoa: return "#1f77b4";
        case Method::Asymptotic: return "#2ca02c";
        case Method::Setmem: return "#d62728";
        case Method::DmrBound: return "#9467bd";
        case Method::EoaBound: return "#ff7f0e";
    }
    return "#000000";
}

} // namespace

std::string table_to_svg(const SizeTable& table) {
    check_nonempty(table);
    constexpr double width = 640, height = 480;
    constexpr double ml = 70, mr = 150, mt = 30, mb = 50;

    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    for (long t : table.ts) {
        xmin = std::min(xmin, std::log10(static_cast<double>(t)));
        xmax = std::max(xmax, std::log10(static_cast<double>(t)));
    }
    for (const auto& col : table.columns)
        for (double v : col)
            if (std::isfinite(v) && v > 0.0) {
                ymin = std::min(ymin, std::log10(v));
                ymax = std::max(ymax, std::log10(v));
            }
    if (!std::isfinite(ymin)) throw NumericError("table_to_svg: no positive finite sizes");
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;

    const auto px = [&](double logt) {
        return ml + (logt - xmin) / (xmax - xmin) * (width - ml - mr);
    };
    const auto py = [&](double logv) {
        return height - mb - (logv - ymin) / (ymax - ymin) * (height - mt - mb);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    svg += "<text x=\"320\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
           "confidence region size vs sample size (log-log)</text>\n";

    // Decade grid lines.
    for (int e = static_cast<int>(std::floor(ymin)); e <= static_cast<int>(std::ceil(ymax)); ++e) {
        if (e < ymin || e > ymax) continue;
        const double y = py(e);
        svg += "<line x1=\"" + fmt_short(ml) + "\" y1=\"" + fmt_short(y) + "\" x2=\"" +
               fmt_short(width - mr) + "\" y2=\"" + fmt_short(y) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + fmt_short(ml - 8) + "\" y=\"" + fmt_short(y + 4) +
               "\" text-anchor=\"end\" font-size=\"11\">1e" + std::to_string(e) +
               "</text>\n";
    }
    svg += "<line x1=\"" + fmt_short(ml) + "\" y1=\"" + fmt_short(height - mb) + "\" x2=\"" +
           fmt_short(width - mr) + "\" y2=\"" + fmt_short(height - mb) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt_short(ml) + "\" y1=\"" + fmt_short(mt) + "\" x2=\"" +
           fmt_short(ml) + "\" y2=\"" + fmt_short(height - mb) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt_short(ml) + "\" y=\"" + fmt_short(height - mb + 18) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + std::to_string(table.ts.front()) +
           "</text>\n";
    svg += "<text x=\"" + fmt_short(width - mr) + "\" y=\"" + fmt_short(height - mb + 18) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + std::to_string(table.ts.back()) +
           "</text>\n";
    svg += "<text x=\"" + fmt_short(0.5 * (ml + width - mr)) + "\" y=\"" +
           fmt_short(height - mb + 36) + "\" text-anchor=\"middle\" font-size=\"12\">t</text>\n";

    for (std::size_t m = 0; m < table.methods.size(); ++m) {
        std::string pts;
        for (std::size_t i = 0; i < table.ts.size(); ++i) {
            const double v = table.columns[m][i];
            if (!std::isfinite(v) || v <= 0.0) continue; // below validity / unbounded
            pts += fmt_short(px(std::log10(static_cast<double>(table.ts[i]))));
            pts += ',';
            pts += fmt_short(py(std::log10(v)));
            pts += ' ';
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += method_color(table.methods[m]);
        svg += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        const double ly = mt + 18.0 * static_cast<double>(m) + 10.0;
        svg += "<rect x=\"" + fmt_short(width - mr + 10) + "\" y=\"" + fmt_short(ly - 9) +
               "\" width=\"12\" height=\"4\" fill=\"" + method_color(table.methods[m]) +
               "\"/>\n";
        svg += "<text x=\"" + fmt_short(width - mr + 28) + "\" y=\"" + fmt_short(ly - 2) +
               "\" font-size=\"11\">" + method_name(table.methods[m]) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

GnuplotOutput table_to_gnuplot(const SizeTable& table, const std::string& data_filename) {
    check_nonempty(table);
    GnuplotOutput out;
    out.data = "# t";
    for (Method m : table.methods) out.data += " " + method_name(m);
    out.data += '\n';
    for (std::size_t i = 0; i < table.ts.size(); ++i) {
        out.data += std::to_string(table.ts[i]);
        for (std::size_t m = 0; m < table.methods.size(); ++m) {
            const double v = table.columns[m][i];
            out.data += ' ';
            out.data += std::isfinite(v) ? fmt_double(v) : "NaN";
        }
        out.data += '\n';
    }

    out.script = "set logscale xy\n";
    out.script += "set datafile missing \"NaN\"\n";
    out.script += "set xlabel \"t\"\n";
    out.script += "set ylabel \"size\"\n";
    out.script += "set key outside right\n";
    out.script += "plot ";
    for (std::size_t m = 0; m < table.methods.size(); ++m) {
        if (m > 0) out.script += ", \\\n     ";
        out.script += "'" + data_filename + "' using 1:" + std::to_string(m + 2) +
                      " with lines title '" + method_name(table.methods[m]) + "'";
    }
    out.script += '\n';
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw NumericError("write failed: " + path.string());
}

} // namespace

std::vector<std::filesystem::path> emit_outputs(const SizeTable& table,
                                                OutputFormat format,
                                                const std::filesystem::path& out_dir,
                                                const std::string& basename) {
    check_nonempty(table);
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    switch (format) {
        case OutputFormat::Csv: {
            const auto p = out_dir / (basename + ".csv");
            write_file(p, table_to_csv(table));
            written.push_back(p);
            break;
        }
        case OutputFormat::Svg: {
            const auto p = out_dir / (basename + ".svg");
            write_file(p, table_to_svg(table));
            written.push_back(p);
            break;
        }
        case OutputFormat::Gnuplot: {
            const std::string data_name = basename + ".dat";
            const GnuplotOutput g = table_to_gnuplot(table, data_name);
            const auto pd = out_dir / data_name;
            const auto ps = out_dir / (basename + ".gp");
            write_file(pd, g.data);
            write_file(ps, g.script);
            written.push_back(ps);
            written.push_back(pd);
            break;
        }
    }
    return written;
}

std::string comparison_to_csv(const std::vector<ComparisonRow>& rows) {
    std::string out = "d,n,sps_eoa,eoa_bound,dmr,asymptotic\n";
    for (const auto& r : rows) {
        out += std::to_string(r.d) + ',' + std::to_string(r.n) + ',' +
               fmt_double(r.sps_eoa) + ',' + fmt_double(r.eoa_bound) + ',' +
               fmt_double(r.dmr) + ',' + fmt_double(r.asymptotic) + '\n';
    }
    return out;
}

} // namespace spsreg
