#pragma once

#include "cantor/embed.hpp"
#include "cantor/rectify.hpp"
#include "cantor/verify.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>

namespace cantor {

// Built-in families: odometer (param p), attracting-fix, attracting-two-orbit,
// full-shift, merged-orbits.
std::shared_ptr<Generator> make_generator(const std::string& name, const std::map<std::string, long>& params);

Covering make_covering(const std::shared_ptr<Generator>& gen);

Covering parse_covering(const std::string& text);
std::string dump_covering(Covering& c, int depth_levels);

std::string dump_marked(Covering& c, const MarkedCovering& mc);
MarkedCovering parse_marked(Covering& c, const std::string& text);

std::string dump_assignment(Covering& c, const MarkedCovering& mc, const IntervalAssignment& a);

// Assignment data as written to disk; enough to re-verify and render.
struct AssignmentDump {
    struct Entry {
        std::string label;
        Interval iv;
    };
    struct ContainerRow {
        std::string parent;
        std::vector<Interval> intervals;
    };
    std::vector<std::vector<Entry>> levels;
    std::vector<std::vector<ContainerRow>> containers;
    std::vector<Rational> eps;
    std::vector<Rational> lambda;
};

AssignmentDump parse_assignment(const std::string& text);
AssignmentDump to_dump(Covering& c, const MarkedCovering& mc, const IntervalAssignment& a);

std::string render_svg(const AssignmentDump& a);

// Layered random covering, valid by construction (test oracle input).
Covering random_valid_covering(std::uint64_t seed, int nlevels, int max_width);

double approx_double(const Rational& r);

}  // namespace cantor
