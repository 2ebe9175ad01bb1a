// csv.cpp

#include "ancilla/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ancilla::csv {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
    if (ec != std::errc()) throw ConfigError("number formatting failed");
    return std::string(buf, ptr);
}

std::vector<std::string> select_columns(const std::vector<std::string>& requested) {
    for (const auto& r : requested) {
        bool known = false;
        for (const auto& f : kMetricFields) known = known || r == f.name;
        if (!known) throw ConfigError("unknown metric column '" + r + "'");
    }
    std::vector<std::string> out;
    for (const auto& f : kMetricFields) {
        const bool want = requested.empty() || std::string_view(f.name) == "t" ||
                          std::find(requested.begin(), requested.end(), f.name) != requested.end();
        if (want) out.emplace_back(f.name);
    }
    return out;
}

namespace {

double MetricSample::*member_of(const std::string& name) {
    for (const auto& f : kMetricFields)
        if (name == f.name) return f.member;
    return nullptr;
}

} // namespace

std::string metric_table(const std::vector<MetricSample>& samples, const std::vector<std::string>& columns,
                         const std::vector<std::string>& comments) {
    std::vector<double MetricSample::*> members;
    for (const auto& c : columns) {
        auto m = member_of(c);
        if (!m) throw ConfigError("unknown metric column '" + c + "'");
        members.push_back(m);
    }
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += "\n";
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (i) out += ',';
            out += format_number(s.*members[i]);
        }
        out += '\n';
    }
    return out;
}

std::vector<MetricSample> parse_metric_table(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double MetricSample::*> members;
    bool have_header = false;
    std::vector<MetricSample> out;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        if (!have_header) {
            for (const auto& c : cells) members.push_back(member_of(c));
            have_header = true;
            continue;
        }
        if (cells.size() != members.size())
            throw ConfigError("line " + std::to_string(line_no) + ": expected " + std::to_string(members.size()) +
                              " cells, got " + std::to_string(cells.size()));
        MetricSample s{};
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (!members[i]) continue;
            double v = 0.0;
            if (cells[i] == "nan") v = std::nan("");
            else {
                const auto [ptr, ec] = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), v);
                if (ec != std::errc() || ptr != cells[i].data() + cells[i].size())
                    throw ConfigError("line " + std::to_string(line_no) + ": bad number '" + cells[i] + "'");
            }
            s.*members[i] = v;
        }
        out.push_back(s);
    }
    if (!have_header) throw ConfigError("metric table has no header row");
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << content;
    if (!out) throw ConfigError("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace ancilla::csv
