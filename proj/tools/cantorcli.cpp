#include "cantor/circuits.hpp"
#include "cantor/errors.hpp"
#include "cantor/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace cantor;

namespace {

struct CommonOpts {
    std::string gen;
    std::vector<std::string> params;
    std::string in_file;
    int depth = 4;
    int budget = 0;  // 0: derived from depth
    int exponent = 1;
    std::string out_dir;
    unsigned long long seed = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--gen", o.gen, "built-in covering family");
    cmd->add_option("--param", o.params, "generator parameter K=V")->take_all();
    cmd->add_option("--in", o.in_file, "covering file");
    cmd->add_option("--depth", o.depth, "depth N (levels)")->check(CLI::PositiveNumber);
    cmd->add_option("--budget", o.budget, "max base depth the run may materialize");
    cmd->add_option("--exponent", o.exponent, "contraction target exponent n")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--seed", o.seed, "seed for randomized runs");
}

std::map<std::string, long> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, long> out;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw parse_error("--param expects K=V, got '" + kv + "'");
        out[kv.substr(0, eq)] = std::stol(kv.substr(eq + 1));
    }
    return out;
}

Covering load_covering(const CommonOpts& o) {
    Covering c;
    if (!o.gen.empty()) {
        c = make_covering(make_generator(o.gen, parse_params(o.params)));
    } else if (!o.in_file.empty()) {
        std::ifstream in(o.in_file);
        if (!in) throw parse_error("cannot open '" + o.in_file + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        c = parse_covering(ss.str());
    } else {
        throw parse_error("either --gen or --in is required");
    }
    c.level_budget = o.budget > 0 ? o.budget : std::max(o.depth + 20, 28);
    return c;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    if (dir.empty()) return;
    fs::create_directories(dir);
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    out << content;
}

long param_or(const CommonOpts& o, const std::string& key, long dflt) {
    auto params = parse_params(o.params);
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
}

int run(int argc, char** argv) {
    CLI::App app{"graph-covering representations of Cantor systems: marking pipeline, "
                 "interval embedding and finite-depth contraction certificates"};
    app.require_subcommand(1);

    CommonOpts o;
    auto* c_validate = app.add_subcommand("validate", "check covering invariants");
    auto* c_analyze = app.add_subcommand("analyze", "circuit lengths, periodic candidates, detector");
    auto* c_pipeline = app.add_subcommand("pipeline", "build the marked covering sequence");
    auto* c_embed = app.add_subcommand("embed", "exact interval assignment");
    auto* c_verify = app.add_subcommand("verify", "structural, geometry and contraction certificates");
    auto* c_render = app.add_subcommand("render", "SVG of a dumped interval assignment");
    auto* c_dump = app.add_subcommand("dump", "write a covering file");
    for (auto* cmd : {c_validate, c_analyze, c_pipeline, c_embed, c_verify, c_render, c_dump})
        add_common(cmd, o);

    CLI11_PARSE(app, argc, argv);

    if (c_render->parsed()) {
        if (o.in_file.empty()) throw parse_error("render needs --in assignment.json");
        std::ifstream in(o.in_file);
        if (!in) throw parse_error("cannot open '" + o.in_file + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        std::string svg = render_svg(parse_assignment(ss.str()));
        if (o.out_dir.empty()) {
            std::cout << svg;
        } else {
            write_file(o.out_dir, "assignment.svg", svg);
            std::cout << "wrote " << (fs::path(o.out_dir) / "assignment.svg").string() << "\n";
        }
        return 0;
    }

    Covering cov = load_covering(o);

    if (c_validate->parsed()) {
        cov.ensure_level(o.depth - 1);
        ValidationReport rep = validate(cov);
        std::cout << rep.to_string();
        return rep.ok() ? 0 : 2;
    }
    if (c_dump->parsed()) {
        std::string doc = dump_covering(cov, o.depth);
        if (o.out_dir.empty()) std::cout << doc;
        else {
            write_file(o.out_dir, "covering.json", doc);
            std::cout << "wrote " << (fs::path(o.out_dir) / "covering.json").string() << "\n";
        }
        return 0;
    }
    if (c_analyze->parsed()) {
        const int maxp = static_cast<int>(param_or(o, "max_period", 4));
        AperiodicityReport rep = aperiodicity_certificate(cov, o.depth - 1, maxp);
        std::cout << rep.to_string();
        auto cands = periodic_candidates(cov, maxp, o.depth - 1);
        std::cout << "periodic candidates (period <= " << maxp << "): " << cands.size() << "\n";
        for (const auto& cand : cands)
            std::cout << "  period " << cand.period << " spanning levels " << (cand.first_lvl + 1) << ".."
                      << (cand.first_lvl + cand.chain.size()) << "\n";
        NonAttractingReport nr = negative_detector(cov, o.depth - 1, maxp);
        std::cout << nr.to_string();
        return 0;
    }

    if (c_pipeline->parsed()) {
        DescentTrace trace;
        MarkedCovering mc = build_marked_sequence(cov, o.depth, &trace);
        std::cout << "built " << mc.levels.size() << " marked levels\n";
        for (size_t l = 0; l < mc.levels.size(); ++l)
            std::cout << "  level " << (l + 1) << ": " << mc.levels[l].s.part.nblocks << " blocks, tau "
                      << mc.levels[l].s.tau << "\n";
        write_file(o.out_dir, "marked.json", dump_marked(cov, mc));
        write_file(o.out_dir, "trace.log", trace.to_string());
        if (!o.out_dir.empty()) std::cout << "wrote marked.json, trace.log\n";
        return 0;
    }
    if (c_embed->parsed()) {
        MarkedCovering mc = build_marked_sequence(cov, o.depth + 1, nullptr);
        IntervalAssignment a = assign_intervals(cov, mc, o.depth);
        std::cout << "assigned intervals for " << a.nlevels << " levels\n";
        write_file(o.out_dir, "marked.json", dump_marked(cov, mc));
        write_file(o.out_dir, "assignment.json", dump_assignment(cov, mc, a));
        if (!o.out_dir.empty()) std::cout << "wrote marked.json, assignment.json\n";
        return 0;
    }
    if (c_verify->parsed()) {
        DescentTrace trace;
        MarkedCovering mc = build_marked_sequence(cov, o.depth + 1, &trace);
        IntervalAssignment a = assign_intervals(cov, mc, o.depth);
        SuiteReport sr = structural_suite(cov, mc);
        SuiteReport gr = geometry_suite(cov, mc, a);
        ContractionReport cr = contraction_certificate(cov, mc, a, o.exponent);
        std::cout << "structural: " << sr.to_string();
        std::cout << "geometry:   " << gr.to_string();
        std::cout << "contraction: " << cr.to_string();
        write_file(o.out_dir, "structural.txt", sr.to_string());
        write_file(o.out_dir, "geometry.txt", gr.to_string());
        write_file(o.out_dir, "contraction.txt", cr.to_string());
        write_file(o.out_dir, "marked.json", dump_marked(cov, mc));
        write_file(o.out_dir, "assignment.json", dump_assignment(cov, mc, a));
        bool ok = sr.ok() && gr.ok() && cr.ok();
        return ok ? 0 : 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const refusal_error& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 3;
    } catch (const budget_error& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 4;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const invariant_error& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
