#include "cantor/io.hpp"

#include "cantor/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>
#include <sstream>

namespace cantor {

using nlohmann::json;

Rational rational_from_strings(const std::string& num, const std::string& den) {
    BigInt n(num), d(den);
    if (d <= 0) throw parse_error("rational with nonpositive denominator");
    return Rational(n, d);
}

std::string approx_decimal(const Rational& r, int digits) {
    BigInt n = numerator(r), d = denominator(r);
    bool neg = n < 0;
    if (neg) n = -n;
    BigInt ip = n / d, rem = n % d;
    std::ostringstream os;
    if (neg) os << "-";
    os << ip.str();
    if (rem == 0) return os.str();
    os << ".";
    for (int i = 0; i < digits && rem != 0; ++i) {
        rem *= 10;
        BigInt digit = rem / d;
        os << digit.str();
        rem %= d;
    }
    if (rem != 0) os << "#";  // truncated
    return os.str();
}

double approx_double(const Rational& r) {
    BigInt n = numerator(r), d = denominator(r);
    bool neg = n < 0;
    if (neg) n = -n;
    BigInt scaled = (n << 60) / d;
    double x = scaled.convert_to<double>() / 1152921504606846976.0;  // 2^60
    return neg ? -x : x;
}

namespace {

std::string pad_index(long i, long max_value) {
    int width = 1;
    for (long m = max_value; m >= 10; m /= 10) ++width;
    std::string s = std::to_string(i);
    return std::string(width - static_cast<int>(s.size()), '0') + s;
}

struct OdometerGen : Generator {
    long p;
    explicit OdometerGen(long p_) : p(p_) {}
    std::string name() const override { return "odometer"; }
    std::map<std::string, long> params() const override { return {{"p", p}}; }
    RawLevel level(int lvl) const override {
        RawLevel r;
        long m = 1;
        for (int i = 0; i <= lvl; ++i) m *= p;
        auto id = [&](long i) { return "c" + pad_index(i, m - 1); };
        for (long i = 0; i < m; ++i) r.ids.push_back(id(i));
        for (long i = 0; i < m; ++i) r.edges.emplace_back(id(i), id((i + 1) % m));
        if (lvl > 0) {
            long pm = m / p;
            auto pid = [&](long i) { return "c" + pad_index(i, pm - 1); };
            for (long i = 0; i < m; ++i) r.bond.emplace_back(id(i), pid(i % pm));
        }
        return r;
    }
};

struct FullShiftGen : Generator {
    std::string name() const override { return "full-shift"; }
    std::map<std::string, long> params() const override { return {}; }
    RawLevel level(int lvl) const override {
        RawLevel r;
        const int n = lvl + 1;
        const long m = 1L << n;
        auto word = [&](long i) {
            std::string w(n, '0');
            for (int b = 0; b < n; ++b)
                if (i & (1L << (n - 1 - b))) w[b] = '1';
            return w;
        };
        for (long i = 0; i < m; ++i) r.ids.push_back(word(i));
        for (long i = 0; i < m; ++i) {
            std::string w = word(i);
            std::string t = w.substr(1);
            r.edges.emplace_back(w, t + "0");
            r.edges.emplace_back(w, t + "1");
        }
        if (lvl > 0)
            for (long i = 0; i < m; ++i) {
                std::string w = word(i);
                r.bond.emplace_back(w, w.substr(0, n - 1));
            }
        return r;
    }
};

struct AttractingFixGen : Generator {
    std::string name() const override { return "attracting-fix"; }
    std::map<std::string, long> params() const override { return {}; }
    RawLevel level(int lvl) const override {
        RawLevel r;
        const int n = lvl + 1;
        const long m = 1L << n;
        auto cid = [&](long i) { return "c" + pad_index(i, m - 1); };
        auto bid = [&](int j) { return "b" + pad_index(j, 99); };
        r.ids.push_back("p");
        for (int j = 1; j <= n; ++j) r.ids.push_back(bid(j));
        for (long i = 0; i < m; ++i) r.ids.push_back(cid(i));
        r.edges.emplace_back("p", "p");
        r.edges.emplace_back(bid(1), "p");
        for (int j = 2; j <= n; ++j) r.edges.emplace_back(bid(j), bid(j - 1));
        for (long i = 0; i < m; ++i) r.edges.emplace_back(cid(i), cid((i + 1) % m));
        if (lvl > 0) {
            long pm = m / 2;
            auto pcid = [&](long i) { return "c" + pad_index(i, pm - 1); };
            r.bond.emplace_back("p", "p");
            r.bond.emplace_back(bid(1), "p");
            for (int j = 2; j <= n; ++j) r.bond.emplace_back(bid(j), bid(j - 1));
            for (long i = 0; i < m; ++i) r.bond.emplace_back(cid(i), pcid(i % pm));
        }
        return r;
    }
};

struct AttractingTwoOrbitGen : Generator {
    std::string name() const override { return "attracting-two-orbit"; }
    std::map<std::string, long> params() const override { return {}; }
    RawLevel level(int lvl) const override {
        AttractingFixGen base;
        RawLevel r = base.level(lvl);
        const int n = lvl + 1;
        auto rid = [&](int side, int k) {
            return "r" + std::to_string(side) + "_" + pad_index(k, 99);
        };
        r.ids.push_back("q0");
        r.ids.push_back("q1");
        r.edges.emplace_back("q0", "q1");
        r.edges.emplace_back("q1", "q0");
        for (int k = 2; k <= n; ++k) {
            r.ids.push_back(rid(0, k));
            r.ids.push_back(rid(1, k));
            r.edges.emplace_back(rid(0, k), "q1");
            r.edges.emplace_back(rid(1, k), "q0");
        }
        if (lvl > 0) {
            r.bond.emplace_back("q0", "q0");
            r.bond.emplace_back("q1", "q1");
            for (int k = 2; k <= n; ++k) {
                if (k == n) {
                    r.bond.emplace_back(rid(0, k), "q0");
                    r.bond.emplace_back(rid(1, k), "q1");
                } else {
                    r.bond.emplace_back(rid(0, k), rid(0, k));
                    r.bond.emplace_back(rid(1, k), rid(1, k));
                }
            }
        }
        return r;
    }
};

struct MergedOrbitsGen : Generator {
    std::string name() const override { return "merged-orbits"; }
    std::map<std::string, long> params() const override { return {}; }
    RawLevel level(int lvl) const override {
        RawLevel r;
        auto cyc = [&](const std::string& prefix) {
            for (int i = 0; i < 4; ++i)
                r.edges.emplace_back(prefix + std::to_string(i), prefix + std::to_string((i + 1) % 4));
            for (int i = 0; i < 4; ++i) r.ids.push_back(prefix + std::to_string(i));
        };
        if (lvl == 0) {
            cyc("m");
            return r;
        }
        cyc("a");
        cyc("b");
        if (lvl == 1) {
            for (int i = 0; i < 4; ++i) {
                r.bond.emplace_back("a" + std::to_string(i), "m" + std::to_string(i));
                r.bond.emplace_back("b" + std::to_string(i), "m" + std::to_string(i));
            }
        } else {
            for (int i = 0; i < 4; ++i) {
                r.bond.emplace_back("a" + std::to_string(i), "a" + std::to_string(i));
                r.bond.emplace_back("b" + std::to_string(i), "b" + std::to_string(i));
            }
        }
        return r;
    }
};

OrbitInfo make_orbit(Covering& c, int period, int lvl, const std::vector<std::string>& circuit,
                     const std::vector<std::string>& basin) {
    c.ensure_level(lvl);
    OrbitInfo o;
    o.period = period;
    o.lvl = lvl;
    for (const auto& id : circuit) {
        int idx = c.levels[lvl].index_of(id);
        if (idx < 0) throw parse_error("orbit circuit cell '" + id + "' not found");
        o.circuit.push_back(idx);
    }
    std::vector<int> cells;
    for (const auto& id : basin) {
        int idx = c.levels[lvl].index_of(id);
        if (idx < 0) throw parse_error("orbit basin cell '" + id + "' not found");
        cells.push_back(idx);
    }
    o.basin = clopen_of_cells(c, lvl, cells);
    return o;
}

void declare_builtin_orbits(Covering& c, const std::string& name) {
    if (name == "attracting-fix") {
        c.orbits.push_back(make_orbit(c, 1, 0, {"p"}, {"p", "b01"}));
    } else if (name == "attracting-two-orbit") {
        c.orbits.push_back(make_orbit(c, 1, 0, {"p"}, {"p", "b01"}));
        c.orbits.push_back(make_orbit(c, 2, 0, {"q0", "q1"}, {"q0", "q1"}));
    } else if (name == "full-shift") {
        c.ensure_level(1);
        c.orbits.push_back(make_orbit(c, 1, 0, {"0"}, {"0", "1"}));
        c.orbits.push_back(make_orbit(c, 1, 0, {"1"}, {"0", "1"}));
        c.orbits.push_back(make_orbit(c, 2, 1, {"01", "10"}, {"00", "01", "10", "11"}));
    } else if (name == "merged-orbits") {
        c.ensure_level(1);
        c.orbits.push_back(make_orbit(c, 4, 1, {"a0", "a1", "a2", "a3"}, {"a0", "a1", "a2", "a3"}));
        c.orbits.push_back(make_orbit(c, 4, 1, {"b0", "b1", "b2", "b3"}, {"b0", "b1", "b2", "b3"}));
    }
}

}  // namespace

std::shared_ptr<Generator> make_generator(const std::string& name, const std::map<std::string, long>& params) {
    if (name == "odometer") {
        long p = 2;
        auto it = params.find("p");
        if (it != params.end()) p = it->second;
        if (p < 2) throw parse_error("odometer needs p >= 2");
        return std::make_shared<OdometerGen>(p);
    }
    if (name == "full-shift") return std::make_shared<FullShiftGen>();
    if (name == "attracting-fix") return std::make_shared<AttractingFixGen>();
    if (name == "attracting-two-orbit") return std::make_shared<AttractingTwoOrbitGen>();
    if (name == "merged-orbits") return std::make_shared<MergedOrbitsGen>();
    throw parse_error("unknown generator '" + name + "'");
}

Covering make_covering(const std::shared_ptr<Generator>& gen) {
    Covering c;
    c.gen = gen;
    c.ensure_level(0);
    declare_builtin_orbits(c, gen->name());
    return c;
}

Covering parse_covering(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw parse_error(std::string("invalid covering document: ") + e.what());
    }
    if (!j.contains("levels") || !j["levels"].is_array() || j["levels"].empty())
        throw parse_error("covering document needs a nonempty 'levels' array");
    Covering c;
    const auto& levels = j["levels"];
    const auto bonds = j.value("bonds", json::array());
    for (size_t l = 0; l < levels.size(); ++l) {
        RawLevel raw;
        for (const auto& v : levels[l].at("vertices")) raw.ids.push_back(v.get<std::string>());
        for (const auto& e : levels[l].at("edges"))
            raw.edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
        if (l > 0) {
            if (bonds.size() < l) throw parse_error("missing bond table for level " + std::to_string(l + 1));
            for (const auto& b : bonds[l - 1])
                raw.bond.emplace_back(b.at("child").get<std::string>(), b.at("parent").get<std::string>());
        }
        c.append_raw(raw);
    }
    if (j.contains("generator")) {
        std::map<std::string, long> params;
        if (j["generator"].contains("params"))
            for (auto it = j["generator"]["params"].begin(); it != j["generator"]["params"].end(); ++it)
                params[it.key()] = it.value().get<long>();
        c.gen = make_generator(j["generator"].at("name").get<std::string>(), params);
    }
    if (j.contains("orbits"))
        for (const auto& o : j["orbits"]) {
            std::vector<std::string> circuit, basin;
            for (const auto& s : o.at("circuit")) circuit.push_back(s.get<std::string>());
            for (const auto& s : o.at("basin")) basin.push_back(s.get<std::string>());
            c.orbits.push_back(
                make_orbit(c, o.at("period").get<int>(), o.at("level").get<int>() - 1, circuit, basin));
        }
    ValidationReport rep = validate(c);
    if (!rep.ok()) throw parse_error("covering document violates invariants:\n" + rep.to_string());
    return c;
}

std::string dump_covering(Covering& c, int depth_levels) {
    c.ensure_level(depth_levels - 1);
    json j;
    j["levels"] = json::array();
    j["bonds"] = json::array();
    for (int l = 0; l < depth_levels; ++l) {
        json lvl;
        lvl["vertices"] = c.levels[l].ids;
        json edges = json::array();
        for (int u = 0; u < c.levels[l].size(); ++u)
            for (int v : c.levels[l].out[u]) edges.push_back({c.levels[l].ids[u], c.levels[l].ids[v]});
        lvl["edges"] = edges;
        j["levels"].push_back(lvl);
        if (l > 0) {
            json bt = json::array();
            for (int u = 0; u < c.levels[l].size(); ++u)
                bt.push_back({{"child", c.levels[l].ids[u]}, {"parent", c.levels[l - 1].ids[c.bond[l - 1][u]]}});
            j["bonds"].push_back(bt);
        }
    }
    json orbits = json::array();
    for (const auto& o : c.orbits) {
        json jo;
        jo["period"] = o.period;
        jo["level"] = o.lvl + 1;
        json circ = json::array();
        for (int cell : o.circuit) circ.push_back(c.levels[o.lvl].ids[cell]);
        jo["circuit"] = circ;
        json basin = json::array();
        for (int cell : expand_at(c, o.basin, o.lvl)) basin.push_back(c.levels[o.lvl].ids[cell]);
        jo["basin"] = basin;
        orbits.push_back(jo);
    }
    j["orbits"] = orbits;
    if (c.gen) {
        json g;
        g["name"] = c.gen->name();
        json params;
        for (const auto& [k, v] : c.gen->params()) params[k] = v;
        g["params"] = params;
        j["generator"] = g;
    }
    return j.dump(1);
}

namespace {

std::string mark_name(Mark m) {
    switch (m) {
        case Mark::Up: return "up";
        case Mark::Star: return "star";
        case Mark::Zero: return "zero";
        case Mark::Down: return "down";
    }
    return "?";
}

Mark mark_from_name(const std::string& s) {
    if (s == "up") return Mark::Up;
    if (s == "star") return Mark::Star;
    if (s == "zero") return Mark::Zero;
    if (s == "down") return Mark::Down;
    throw parse_error("unknown mark '" + s + "'");
}

}  // namespace

std::string dump_marked(Covering& c, const MarkedCovering& mc) {
    json j;
    j["levels"] = json::array();
    for (const auto& ml : mc.levels) {
        json lvl;
        lvl["tau"] = ml.s.tau;
        lvl["anchor"] = ml.s.part.lvl + 1;
        json blocks = json::array();
        for (int b = 0; b < ml.s.part.nblocks; ++b) {
            json jb;
            jb["id"] = block_label(c, ml.s.part, b);
            json cells = json::array();
            for (int cell : block_cells(ml.s.part, b)) cells.push_back(c.levels[ml.s.part.lvl].ids[cell]);
            jb["cells"] = cells;
            jb["mark"] = mark_name(ml.chi[b]);
            blocks.push_back(jb);
        }
        lvl["blocks"] = blocks;
        j["levels"].push_back(lvl);
    }
    return j.dump(1);
}

MarkedCovering parse_marked(Covering& c, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw parse_error(std::string("invalid marked-covering document: ") + e.what());
    }
    MarkedCovering mc;
    for (const auto& lvl : j.at("levels")) {
        const int anchor = lvl.at("anchor").get<int>() - 1;
        c.ensure_level(anchor);
        std::vector<Clopen> blocks;
        std::vector<Mark> marks;
        for (const auto& jb : lvl.at("blocks")) {
            std::vector<int> cells;
            for (const auto& s : jb.at("cells")) {
                int idx = c.levels[anchor].index_of(s.get<std::string>());
                if (idx < 0) throw parse_error("unknown cell '" + s.get<std::string>() + "' in marked level");
                cells.push_back(idx);
            }
            blocks.push_back(clopen_of_cells(c, anchor, cells));
            marks.push_back(mark_from_name(jb.at("mark").get<std::string>()));
        }
        MarkedLevel ml;
        ml.s = supercyclical_structure(c, partition_from_blocks(c, blocks), lvl.at("tau").get<int>());
        ml.chi.assign(ml.s.part.nblocks, Mark::Down);
        for (size_t i = 0; i < blocks.size(); ++i) {
            int nb = ml.s.part.block_of[expand_at(c, blocks[i], ml.s.part.lvl).front()];
            ml.chi[nb] = marks[i];
        }
        mc.levels.push_back(std::move(ml));
    }
    return mc;
}

namespace {

json interval_json(const Interval& iv) {
    json j;
    j["mid"] = {{"num", num_str(iv.mid)}, {"den", den_str(iv.mid)}};
    j["len"] = {{"num", num_str(iv.len)}, {"den", den_str(iv.len)}};
    return j;
}

Interval interval_from_json(const json& j) {
    Interval iv;
    iv.mid = rational_from_strings(j.at("mid").at("num").get<std::string>(),
                                   j.at("mid").at("den").get<std::string>());
    iv.len = rational_from_strings(j.at("len").at("num").get<std::string>(),
                                   j.at("len").at("den").get<std::string>());
    return iv;
}

}  // namespace

AssignmentDump to_dump(Covering& c, const MarkedCovering& mc, const IntervalAssignment& a) {
    AssignmentDump d;
    d.eps = a.rates.eps;
    d.lambda = a.rates.lambda;
    d.levels.resize(a.nlevels);
    d.containers.resize(a.nlevels);
    for (int l = 0; l < a.nlevels; ++l) {
        for (size_t b = 0; b < a.iv[l].size(); ++b)
            d.levels[l].push_back({block_label(c, mc.levels[l].s.part, static_cast<int>(b)), a.iv[l][b]});
        if (l >= 1)
            for (const auto& [w, conts] : a.containers[l])
                d.containers[l].push_back({block_label(c, mc.levels[l - 1].s.part, w), conts});
    }
    return d;
}

std::string dump_assignment(Covering& c, const MarkedCovering& mc, const IntervalAssignment& a) {
    AssignmentDump d = to_dump(c, mc, a);
    json j;
    j["levels"] = json::array();
    for (int l = 0; l < static_cast<int>(d.levels.size()); ++l) {
        json lvl;
        json blocks = json::array();
        for (const auto& e : d.levels[l]) {
            json jb = interval_json(e.iv);
            jb["block"] = e.label;
            blocks.push_back(jb);
        }
        lvl["blocks"] = blocks;
        json conts = json::array();
        for (const auto& row : d.containers[l]) {
            json jr;
            jr["parent"] = row.parent;
            json ivs = json::array();
            for (const auto& iv : row.intervals) ivs.push_back(interval_json(iv));
            jr["intervals"] = ivs;
            conts.push_back(jr);
        }
        lvl["containers"] = conts;
        j["levels"].push_back(lvl);
    }
    json eps = json::array(), lam = json::array();
    for (const auto& e : d.eps) eps.push_back({{"num", num_str(e)}, {"den", den_str(e)}});
    for (const auto& e : d.lambda) lam.push_back({{"num", num_str(e)}, {"den", den_str(e)}});
    j["eps"] = eps;
    j["lambda"] = lam;
    return j.dump(1);
}

AssignmentDump parse_assignment(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw parse_error(std::string("invalid assignment document: ") + e.what());
    }
    AssignmentDump d;
    for (const auto& lvl : j.at("levels")) {
        std::vector<AssignmentDump::Entry> entries;
        for (const auto& jb : lvl.at("blocks"))
            entries.push_back({jb.at("block").get<std::string>(), interval_from_json(jb)});
        std::vector<AssignmentDump::ContainerRow> rows;
        for (const auto& jr : lvl.value("containers", json::array())) {
            AssignmentDump::ContainerRow row;
            row.parent = jr.at("parent").get<std::string>();
            for (const auto& iv : jr.at("intervals")) row.intervals.push_back(interval_from_json(iv));
            rows.push_back(std::move(row));
        }
        d.levels.push_back(std::move(entries));
        d.containers.push_back(std::move(rows));
    }
    for (const auto& e : j.value("eps", json::array()))
        d.eps.push_back(rational_from_strings(e.at("num").get<std::string>(), e.at("den").get<std::string>()));
    for (const auto& e : j.value("lambda", json::array()))
        d.lambda.push_back(rational_from_strings(e.at("num").get<std::string>(), e.at("den").get<std::string>()));
    return d;
}

namespace {

double display_width(const Interval& iv) {
    long bits = static_cast<long>(msb(denominator(iv.len))) - static_cast<long>(msb(numerator(iv.len) == 0 ? BigInt(1) : numerator(iv.len)));
    if (bits < 0) bits = 0;
    return std::max(2.0, 160.0 / (1.0 + static_cast<double>(bits) / 8.0));
}

}  // namespace

std::string render_svg(const AssignmentDump& a) {
    const double W = 1200.0, band = 46.0, pad = 30.0;
    const double H = pad * 2 + band * std::max<size_t>(1, a.levels.size());
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
       << W << " " << H << "\">\n";
    os << " <style>rect.iv{fill:#4a90d9;fill-opacity:0.55;stroke:#1c3d5a;stroke-width:0.6}"
          "rect.ct{fill:none;stroke:#c0392b;stroke-width:0.8;stroke-dasharray:3 2}"
          "text{font-family:monospace;font-size:9px}</style>\n";
    for (size_t l = 0; l < a.levels.size(); ++l) {
        double y = pad + band * static_cast<double>(l);
        os << " <g id=\"level-" << (l + 1) << "\">\n";
        os << "  <text x=\"4\" y=\"" << (y + 12) << "\">L" << (l + 1) << "</text>\n";
        for (const auto& row : a.containers[l]) {
            for (const auto& iv : row.intervals) {
                double cx = pad + approx_double(iv.mid) * (W - 2 * pad);
                double w = display_width(iv) + 4.0;
                os << "  <rect class=\"ct\" x=\"" << (cx - w / 2) << "\" y=\"" << (y + 2) << "\" width=\"" << w
                   << "\" height=\"" << (band - 10) << "\"><title>container of " << row.parent << "</title></rect>\n";
            }
        }
        for (const auto& e : a.levels[l]) {
            double cx = pad + approx_double(e.iv.mid) * (W - 2 * pad);
            double w = display_width(e.iv);
            os << "  <rect class=\"iv\" x=\"" << (cx - w / 2) << "\" y=\"" << (y + 6) << "\" width=\"" << w
               << "\" height=\"" << (band - 18) << "\"><title>" << e.label << " mid=" << num_str(e.iv.mid) << "/"
               << den_str(e.iv.mid) << " len=" << num_str(e.iv.len) << "/" << den_str(e.iv.len)
               << "</title></rect>\n";
        }
        os << " </g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

Covering random_valid_covering(std::uint64_t seed, int nlevels, int max_width) {
    std::mt19937_64 rng(seed);
    auto rnd = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
    Covering c;
    RawLevel first;
    const int n0 = rnd(2, std::max(2, std::min(6, max_width)));
    auto vid = [&](int lvl, int i) { return "v" + std::to_string(lvl) + "_" + pad_index(i, 2999); };
    for (int i = 0; i < n0; ++i) first.ids.push_back(vid(0, i));
    for (int i = 0; i < n0; ++i) {
        int deg = rnd(1, 2);
        for (int k = 0; k < deg; ++k) first.edges.emplace_back(vid(0, i), vid(0, rnd(0, n0 - 1)));
    }
    c.append_raw(first);
    for (int l = 1; l < nlevels; ++l) {
        const LevelGraph& par = c.levels[l - 1];
        RawLevel raw;
        std::vector<std::vector<int>> ch(par.size());
        int next = 0;
        for (int p = 0; p < par.size(); ++p) {
            int k = rnd(1, 3);
            if (next + k > max_width) k = std::max(1, max_width - next);
            for (int j = 0; j < k; ++j) ch[p].push_back(next++);
        }
        for (int i = 0; i < next; ++i) raw.ids.push_back(vid(l, i));
        for (int p = 0; p < par.size(); ++p)
            for (int u : ch[p]) {
                raw.bond.emplace_back(vid(l, u), par.ids[p]);
                // all out-edges of u land among the children of one parent
                // out-neighbor, keeping bonding edge-compatible
                const auto& po = par.out[p];
                int w = po[rnd(0, static_cast<int>(po.size()) - 1)];
                int deg = rnd(1, std::min<int>(2, static_cast<int>(ch[w].size())));
                std::vector<int> picks;
                for (int k = 0; k < deg; ++k) picks.push_back(ch[w][rnd(0, static_cast<int>(ch[w].size()) - 1)]);
                std::sort(picks.begin(), picks.end());
                picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
                for (int v : picks) raw.edges.emplace_back(vid(l, u), vid(l, v));
            }
        c.append_raw(raw);
    }
    return c;
}

}  // namespace cantor
