#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orlicz {

struct ReportRow {
    std::string experiment;
    int index = 0;
    int resolution = 0;
    std::string metric;
    double value = 0.0;
    bool pass = true;
};

/// General format with 17 significant digits and a period decimal
/// separator regardless of locale; non-finite values print as inf, -inf, nan.
std::string format_number(double v);

/// Header `experiment,index,resolution,metric,value,pass` then one line per row.
void write_csv(std::ostream& os, const std::vector<ReportRow>& rows);

bool all_pass(const std::vector<ReportRow>& rows) noexcept;

}  // namespace orlicz
