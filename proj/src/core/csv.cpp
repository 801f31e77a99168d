#include "core/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "core/errors.hpp"

namespace gdo {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_series_csv(const TimeErrorSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "# tau0=" << format_double(series.tau0) << " t0=" << format_double(series.t0)
        << " label=" << series.label << "\n";
    out << "t_s,value_s\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        out << format_double(series.time_at(i)) << "," << format_double(series.samples[i])
            << "\n";
    if (!out) throw IoError("write failed for '" + path + "'");
}

TimeErrorSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    TimeErrorSeries series;
    std::string line;
    std::size_t lineno = 0;
    bool have_header_meta = false;
    bool have_columns = false;

    auto fail = [&](const std::string& msg) -> void {
        throw InvalidArgument(path + ":" + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            // key=value tokens; unknown keys are ignored.
            std::istringstream ss(line.substr(1));
            std::string tok;
            while (ss >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                std::string key = tok.substr(0, eq);
                std::string val = tok.substr(eq + 1);
                if (key == "tau0") {
                    series.tau0 = std::strtod(val.c_str(), nullptr);
                    have_header_meta = true;
                } else if (key == "t0") {
                    series.t0 = std::strtod(val.c_str(), nullptr);
                } else if (key == "label") {
                    series.label = val;
                }
            }
            continue;
        }
        if (!have_columns) {
            if (line != "t_s,value_s") fail("expected column header 't_s,value_s'");
            have_columns = true;
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) fail("expected 't,value' row");
        const char* vtext = line.c_str() + comma + 1;
        char* end = nullptr;
        double v;
        if (std::string(vtext) == "nan") {
            v = std::nan("");
        } else {
            v = std::strtod(vtext, &end);
            if (end == vtext) fail("unparseable value '" + std::string(vtext) + "'");
        }
        series.samples.push_back(v);
    }
    if (!have_header_meta)
        throw InvalidArgument(path + ": missing '# tau0=... t0=... label=...' header");
    if (!have_columns)
        throw InvalidArgument(path + ": missing 't_s,value_s' column header");
    if (series.samples.empty())
        throw InvalidArgument(path + ": no samples");
    if (!(series.tau0 > 0.0))
        throw InvalidArgument(path + ": tau0 must be > 0");
    return series;
}

void write_curves_csv(const StabilityCurves& curves, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "tau_s,adev,tie_rms_s,mtie_s\n";

    std::map<double, std::array<double, 3>> rows;
    auto put = [&rows](const StabilityCurve& c, int col) {
        for (const auto& p : c.points) {
            auto it = rows.find(p.tau);
            if (it == rows.end())
                it = rows.emplace(p.tau, std::array<double, 3>{std::nan(""), std::nan(""),
                                                               std::nan("")})
                         .first;
            it->second[static_cast<std::size_t>(col)] = p.value;
        }
    };
    put(curves.adev, 0);
    put(curves.tie_rms, 1);
    put(curves.mtie, 2);

    for (const auto& [tau, vals] : rows)
        out << format_double(tau) << "," << format_double(vals[0]) << ","
            << format_double(vals[1]) << "," << format_double(vals[2]) << "\n";
    if (!out) throw IoError("write failed for '" + path + "'");
}

} // namespace gdo
