#pragma once
// Verification report with the fixed schema {suite, pass, worst_case, constants}.
#include <string>
#include <fstream>
#include "json.hpp"

namespace dbar2 {

struct Report {
    std::string suite;
    bool pass = false;
    nlohmann::json worst_case = nlohmann::json::object();
    nlohmann::json constants = nlohmann::json::object();

    nlohmann::json to_json() const {
        return {{"suite", suite},
                {"pass", pass},
                {"worst_case", worst_case},
                {"constants", constants}};
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("report: cannot open " + path);
        out << to_json().dump(2) << "\n";
    }
};

} // namespace dbar2
