#pragma once

#include <string>

#include "addiff/parser.hpp"
#include "addiff/semantics.hpp"
#include "addiff/validate.hpp"

#ifndef ADDIFF_FIXTURES_DIR
#error "ADDIFF_FIXTURES_DIR must be defined by the build"
#endif

namespace testsupport {

inline std::string fixture_path(const std::string& name) {
    return std::string(ADDIFF_FIXTURES_DIR) + "/" + name;
}

inline addiff::ActivityDiagram load_fixture_ad(const std::string& name) {
    addiff::ParseResult r = addiff::parse_file(fixture_path(name));
    if (!r.ok()) {
        std::string msg = "fixture " + name + " failed to parse";
        for (const auto& e : r.errors) msg += "; " + e.message;
        throw addiff::Error(msg);
    }
    addiff::validate_or_throw(*r.ad);
    return *r.ad;
}

inline addiff::Machine load_fixture_machine(const std::string& name) {
    return addiff::Machine(load_fixture_ad(name));
}

}  // namespace testsupport
