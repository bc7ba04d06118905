#pragma once

#include <string>

#include "pjlab/grid.hpp"

namespace pjlab {

// Refuted carries evidence that re-validates; ConsistentAtScale only speaks for the window.
struct Verdict {
    enum class Kind { Refuted, ConsistentAtScale };
    Kind kind = Kind::ConsistentAtScale;
    nlohmann::json evidence;
    Window window;
    std::string note;

    bool refuted() const { return kind == Kind::Refuted; }

    static Verdict refute(nlohmann::json evidence, Window w, std::string note = {}) {
        return {Kind::Refuted, std::move(evidence), w, std::move(note)};
    }
    static Verdict consistent(Window w, std::string note, nlohmann::json evidence = nlohmann::json::object()) {
        return {Kind::ConsistentAtScale, std::move(evidence), w, std::move(note)};
    }
};

inline void to_json(nlohmann::json& j, const Verdict& v) {
    j = {{"verdict", v.refuted() ? "Refuted" : "ConsistentAtScale"},
         {"evidence", v.evidence},
         {"window", v.window},
         {"note", v.note}};
}

}  // namespace pjlab
