#include "curv/io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "curv/errors.hpp"

namespace curv {

Measure load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw bad_input("cannot open " + path);
    std::vector<Atom> atoms;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        double v[3];
        std::istringstream row(line);
        std::string tok;
        int k = 0;
        while (std::getline(row, tok, ',')) {
            if (k >= 3)
                break;
            try {
                std::size_t used = 0;
                v[k] = std::stod(tok, &used);
                while (used < tok.size() &&
                       (tok[used] == ' ' || tok[used] == '\t' || tok[used] == '\r'))
                    ++used;
                if (used != tok.size())
                    throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw bad_input(path + ":" + std::to_string(line_no) + ": bad value '" + tok + "'");
            }
            ++k;
        }
        if (k != 3)
            throw bad_input(path + ":" + std::to_string(line_no) + ": expected x,y,w");
        atoms.push_back({{v[0], v[1]}, v[2]});
    }
    try {
        return Measure(std::move(atoms), path);
    } catch (const bad_input& e) {
        throw bad_input(path + ": " + e.what());
    }
}

void save_csv(const Measure& m, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw bad_input("cannot write " + path);
    char buf[96];
    for (const Atom& a : m.atoms()) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", a.p.x, a.p.y, a.w);
        out << buf;
    }
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

nlohmann::json measure_summary(const Measure& m) {
    nlohmann::json j;
    j["name"] = m.name();
    j["atoms"] = m.size();
    j["mass"] = m.total_mass();
    if (!m.empty()) {
        double minx = m.atoms()[0].p.x, maxx = minx, miny = m.atoms()[0].p.y, maxy = miny;
        for (const Atom& a : m.atoms()) {
            minx = std::min(minx, a.p.x);
            maxx = std::max(maxx, a.p.x);
            miny = std::min(miny, a.p.y);
            maxy = std::max(maxy, a.p.y);
        }
        j["bbox"] = {minx, miny, maxx, maxy};
        double res = m.resolution();
        j["resolution"] = std::isfinite(res) ? res : 0.0;
    }
    return j;
}

std::string render_report(nlohmann::json report) {
    report["version"] = kToolVersion;
    report["schema"] = kReportSchema;
    report.erase("content_hash");
    report["content_hash"] = fnv1a64_hex(report.dump());
    return report.dump(2) + "\n";
}

void write_report(nlohmann::json report, const std::string& path) {
    std::string text = render_report(std::move(report));
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw bad_input("cannot write " + path);
    out << text;
}

} // namespace curv
