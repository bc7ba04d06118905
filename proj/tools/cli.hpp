#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace pjlab::cli {

enum class Format { Json, Text };

struct Report {
    nlohmann::json command = nlohmann::json::object();  // verb and the flags as given
    nlohmann::json result;                               // null for an empty payload
    nlohmann::json window;                               // null when the verb has none
    std::string text;                                    // human summary for text output
};

const char* version();

// Sorted keys, two-space indent, trailing newline; no clocks or environment in the body.
std::string emit_report(const Report& r, Format f);

// args excludes the program name. 0 result, 1 internal invariant violation, 2 bad input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pjlab::cli
