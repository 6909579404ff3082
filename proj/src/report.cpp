#include "orlicz/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace orlicz {

namespace {

std::string quoted(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

void write_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
    os << "experiment,index,resolution,metric,value,pass\n";
    for (const auto& r : rows)
        os << quoted(r.experiment) << ',' << r.index << ',' << r.resolution << ',' << quoted(r.metric) << ','
           << format_number(r.value) << ',' << (r.pass ? "true" : "false") << '\n';
}

bool all_pass(const std::vector<ReportRow>& rows) noexcept {
    return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

}  // namespace orlicz
