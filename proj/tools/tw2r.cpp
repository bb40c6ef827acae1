#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "tw2/generators.hpp"
#include "tw2/pipeline.hpp"
#include "tw2/reductions.hpp"

using namespace tw2;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_obstruction = 2;
constexpr int exit_falsified = 3;

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw op_error("IOError", "cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

// Write via a temp file + rename so readers never observe partial output.
void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw op_error("IOError", "cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

void atomic_write(const std::string& path, const nlohmann::json& j) {
    atomic_write(path, j.dump(2) + "\n");
}

int cmd_dim(const std::string& poset_path, const std::string& target, int max_elems) {
    poset p = poset_from_json(load_json(poset_path));
    pair_target t = target == "mm" ? pair_target::mm : pair_target::inc;
    auto res = exact_dimension(p, t, -1, max_elems);
    std::cout << res.d << "\n";
    return exit_ok;
}

int cmd_bound(const std::string& poset_path, const std::string& emit_path,
              const std::string& report_path, int max_cycle_len) {
    poset p = poset_from_json(load_json(poset_path));
    bound_options opt;
    opt.max_cycle_len = max_cycle_len;
    bound_result res;
    try {
        res = bound_pipeline(p, opt);
    } catch (const falsification& f) {
        std::cerr << "falsification: " << f.what() << "\n" << f.dump.dump(2) << "\n";
        return exit_falsified;
    }
    if (!report_path.empty()) atomic_write(report_path, res.report);
    if (res.status == bound_status::obstruction) {
        std::cout << "obstruction: residual graph on "
                  << res.obstruction.residual_vertices.size()
                  << " vertices has minimum degree >= 3 (treewidth >= 3)\n";
        return exit_obstruction;
    }
    std::cout << "realizer size " << res.rlz.extensions.size() << " (verified, bound 1276)\n";
    if (!emit_path.empty()) atomic_write(emit_path, realizer_to_json(res.rlz, p));
    return exit_ok;
}

int cmd_check(const std::string& poset_path, const std::string& realizer_path) {
    poset p = poset_from_json(load_json(poset_path));
    realizer r = realizer_from_json(load_json(realizer_path), p);
    auto chk = is_realizer(p, r);
    if (chk.ok) {
        std::cout << "ok: " << r.extensions.size() << " extensions realize the "
                  << (r.kind == realizer_kind::mm ? "min-max pairs" : "poset") << "\n";
        return exit_ok;
    }
    std::cout << "invalid: " << chk.detail << "\n";
    return exit_error;
}

int cmd_gen(const std::string& family, int n, uint64_t seed, double density,
            const std::string& out_path, bool dot) {
    poset p;
    if (family == "sn") p = standard_example(n);
    else if (family == "kelly") p = kelly(n);
    else p = random_tw2_poset({seed, n, density});
    std::string payload = dot ? poset_to_dot(p) : poset_to_json(p).dump(2) + "\n";
    if (out_path.empty()) std::cout << payload;
    else atomic_write(out_path, payload);
    return exit_ok;
}

struct trial_outcome {
    bool falsified = false;
    std::string summary;
    nlohmann::json dump;
};

int cmd_verify_claims(uint64_t seed, int trials, int max_size, const std::string& dump_dir) {
    std::vector<trial_outcome> results(trials);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next++; i < trials; i = next++) {
            uint64_t s = seed + (uint64_t)i;
            int n = 4 + (int)(s * 2654435761u % (uint64_t)std::max(1, max_size - 3));
            double density = 0.6 + 0.4 * (double)(s % 97) / 96.0;
            poset p = random_tw2_poset({s, n, density});
            trial_outcome& out = results[i];
            try {
                auto res = bound_pipeline(p);
                if (res.status == bound_status::obstruction) {
                    out.summary = "obstruction (unexpected for a generated partial 2-tree)";
                    out.falsified = true;
                } else {
                    out.summary = "realized size " + std::to_string(res.rlz.extensions.size());
                }
            } catch (const falsification& f) {
                out.falsified = true;
                out.summary = f.what();
                out.dump = f.dump;
                out.dump["trial_seed"] = s;
            }
        }
    };
    unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    int bad = 0;
    for (int i = 0; i < trials; ++i) {
        if (!results[i].falsified) continue;
        ++bad;
        std::cerr << "trial " << i << ": " << results[i].summary << "\n";
        if (!dump_dir.empty() && !results[i].dump.is_null()) {
            std::filesystem::create_directories(dump_dir);
            atomic_write(dump_dir + "/falsification_" + std::to_string(seed + i) + ".json",
                         results[i].dump);
        }
    }
    std::cout << "trials " << trials << ", falsifications " << bad << "\n";
    return bad == 0 ? exit_ok : exit_falsified;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified realizers for posets with treewidth-2 cover graphs"};
    app.require_subcommand(1);

    std::string poset_path, realizer_path, emit_path, report_path, out_path, dump_dir;
    std::string target = "inc", family;
    int max_elems = 20, max_cycle_len = 0, n = 10, trials = 100, max_size = 20;
    uint64_t seed = 0;
    double density = 0.8;
    bool dot = false;

    auto* dim = app.add_subcommand("dim", "exact dimension of a small poset");
    dim->add_option("poset", poset_path, "poset JSON file")->required();
    dim->add_option("--target", target, "pair set to reverse: inc (dim) or mm (dim*)")
        ->check(CLI::IsMember({"inc", "mm"}));
    dim->add_option("--max-elems", max_elems, "element count guard for the exact search");

    auto* bound = app.add_subcommand("bound", "construct a verified realizer (<= 1276)");
    bound->add_option("poset", poset_path, "poset JSON file")->required();
    bound->add_option("--emit-realizer", emit_path, "write the realizer JSON here");
    bound->add_option("--max-cycle-len", max_cycle_len,
                      "cap on enumerated alternating cycle length (0 = class size)");
    bound->add_option("--report", report_path, "write the stage report JSON here");

    auto* check = app.add_subcommand("check", "verify a realizer against a poset");
    check->add_option("poset", poset_path, "poset JSON file")->required();
    check->add_option("realizer", realizer_path, "realizer JSON file")->required();

    auto* gen = app.add_subcommand("gen", "generate instance families");
    gen->add_option("family", family, "sn | kelly | random")
        ->required()
        ->check(CLI::IsMember({"sn", "kelly", "random"}));
    gen->add_option("--n", n, "size parameter")->required();
    gen->add_option("--seed", seed, "seed (random family)");
    gen->add_option("--density", density, "edge keep probability (random family)");
    gen->add_option("-o,--out", out_path, "output file (default: stdout)");
    gen->add_flag("--dot", dot, "emit the cover graph as DOT instead of JSON");

    auto* verify = app.add_subcommand("verify-claims", "seeded falsification campaign");
    verify->add_option("--seed", seed, "base seed")->required();
    verify->add_option("--trials", trials, "number of instances")->required();
    verify->add_option("--max-size", max_size, "maximum element count")->required();
    verify->add_option("--dump-dir", dump_dir, "directory for counterexample dumps");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*dim) return cmd_dim(poset_path, target, max_elems);
        if (*bound) return cmd_bound(poset_path, emit_path, report_path, max_cycle_len);
        if (*check) return cmd_check(poset_path, realizer_path);
        if (*gen) return cmd_gen(family, n, seed, density, out_path, dot);
        if (*verify) return cmd_verify_claims(seed, trials, max_size, dump_dir);
    } catch (const falsification& f) {
        std::cerr << "falsification: " << f.what() << "\n" << f.dump.dump(2) << "\n";
        return exit_falsified;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_error;
}
