#pragma once

#include "cantor/clopen.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace cantor {

// Finite directed graph of one level. Vertex ids are sorted, so vertex index
// order is the canonical (lexicographic) order used for every tie-break.
struct LevelGraph {
    std::vector<std::string> ids;
    std::vector<std::vector<int>> out;
    std::vector<std::vector<int>> in;

    int size() const { return static_cast<int>(ids.size()); }
    int index_of(const std::string& id) const;  // -1 when absent
};

// Unsorted level data as produced by generators and the parser.
struct RawLevel {
    std::vector<std::string> ids;
    std::vector<std::pair<std::string, std::string>> edges;
    // child id -> parent id; empty for the first level
    std::vector<std::pair<std::string, std::string>> bond;
};

class Covering;

struct Generator {
    virtual ~Generator() = default;
    virtual std::string name() const = 0;
    virtual std::map<std::string, long> params() const = 0;
    virtual RawLevel level(int lvl) const = 0;  // lvl is 0-based
};

struct OrbitInfo {
    int period = 1;
    int lvl = 0;                // level of declaration (0-based)
    std::vector<int> circuit;   // cells at lvl, standard order p_1, f(p_1), ...
    Clopen basin;
};

class Covering {
  public:
    std::vector<LevelGraph> levels;
    std::vector<std::vector<int>> bond;           // bond[i]: level i+1 -> level i
    std::vector<std::vector<std::vector<int>>> kids;  // kids[i][p]: children of p at level i+1
    std::vector<std::vector<int>> ci;             // ci[i][v]: common bonding image, -1 if incoherent; ci[0] empty
    std::vector<OrbitInfo> orbits;
    std::shared_ptr<Generator> gen;

    int level_budget = 40;
    long long cell_budget = 1 << 22;

    int depth() const { return static_cast<int>(levels.size()); }
    void append_raw(const RawLevel& raw);

    // Materializes levels up to index lvl inclusive; throws budget_error when
    // the generator is missing or a budget is exceeded.
    void ensure_level(int lvl);

    int ancestor(int lvl_from, int cell, int lvl_to) const;
    const std::vector<int>& preimage_cells(int lvl, int cell);  // cells at lvl+1 with ci == cell

  private:
    std::vector<std::vector<std::vector<int>>> inv_ci_;  // lazy, per level
};

struct ValidationIssue {
    std::string kind;  // "forward-incomplete" | "non-surjective-bond" | "non-morphism-edge" | "edge-incompatible"
    int lvl = 0;
    std::string witness;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

ValidationReport validate(const Covering& c);

// Levels picked by strictly increasing 0-based indices, bonds composed.
Covering telescope(Covering& c, const std::vector<int>& indices);

// The unique circuit at lvl_to projecting cell-wise onto the given circuit.
// Throws invariant_error when no lift or several lifts exist.
std::vector<int> lift_circuit(Covering& c, int lvl_from, const std::vector<int>& circuit, int lvl_to);

}  // namespace cantor
