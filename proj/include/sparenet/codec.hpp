#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "network.hpp"

namespace sparenet {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

// Text form:
//   # optional comment lines, only before the first directive
//   units <n>
//   spares <m>
//   edge <u> <s>      (one line per edge, 0-based)
inline std::string serialize_network(const SpareNetwork& net) {
    std::ostringstream out;
    out << "units " << net.unit_count() << "\n";
    out << "spares " << net.spare_count() << "\n";
    for (const auto& [u, s] : net.edges()) out << "edge " << u << " " << s << "\n";
    return out.str();
}

namespace detail {

inline bool parse_int_token(std::istringstream& in, int& out) {
    long long v = 0;
    if (!(in >> v) || v < INT32_MIN || v > INT32_MAX) return false;
    out = static_cast<int>(v);
    return true;
}

}  // namespace detail

inline SpareNetwork parse_network(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    bool header_done = false;
    int n_units = -1;
    int n_spares = -1;
    std::vector<std::pair<int, int>> edges;

    while (std::getline(stream, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '#') {
            if (header_done) throw ParseError(line_no, "comments are only allowed before the first directive");
            continue;
        }

        std::istringstream fields(line);
        std::string keyword;
        fields >> keyword;
        std::string extra;

        if (keyword == "units") {
            header_done = true;
            if (n_units != -1) throw ParseError(line_no, "duplicate units directive");
            if (!detail::parse_int_token(fields, n_units) || fields >> extra)
                throw ParseError(line_no, "expected: units <count>");
            if (n_units < 1) throw ParseError(line_no, "unit count must be at least 1");
        } else if (keyword == "spares") {
            header_done = true;
            if (n_units == -1) throw ParseError(line_no, "spares directive before units");
            if (n_spares != -1) throw ParseError(line_no, "duplicate spares directive");
            if (!detail::parse_int_token(fields, n_spares) || fields >> extra)
                throw ParseError(line_no, "expected: spares <count>");
            if (n_spares < 0) throw ParseError(line_no, "spare count must be non-negative");
        } else if (keyword == "edge") {
            header_done = true;
            if (n_units == -1 || n_spares == -1)
                throw ParseError(line_no, "edge before units/spares directives");
            int u = 0;
            int s = 0;
            if (!detail::parse_int_token(fields, u) || !detail::parse_int_token(fields, s) ||
                fields >> extra)
                throw ParseError(line_no, "expected: edge <unit> <spare>");
            if (u < 0 || u >= n_units)
                throw ParseError(line_no, "unit index " + std::to_string(u) + " out of range");
            if (s < 0 || s >= n_spares)
                throw ParseError(line_no, "spare index " + std::to_string(s) + " out of range");
            edges.emplace_back(u, s);
        } else {
            throw ParseError(line_no, "unknown directive: " + keyword);
        }
    }
    if (n_units == -1) throw ParseError(line_no + 1, "missing units directive");
    if (n_spares == -1) throw ParseError(line_no + 1, "missing spares directive");
    return SpareNetwork(n_units, n_spares, edges);
}

inline SpareNetwork load_network(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open network file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str());
}

inline void save_network(const SpareNetwork& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write network file: " + path);
    out << serialize_network(net);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace sparenet
