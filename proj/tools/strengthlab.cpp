// strengthlab — exact and sampled invariants of polynomials over finite
// fields: bias, Gowers norms, analytic rank, partition-rank certificates,
// fiber distributions, point counts of varieties and their singular loci, and
// the determinant generator families.
//
// One binary, subcommand style. All randomness flows from --seed; --threads
// never changes any emitted number. Exit codes: 0 success, 1 input error,
// 2 budget refusal.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "strengthlab/generators.hpp"
#include "strengthlab/json_io.hpp"
#include "strengthlab/rng.hpp"
#include "strengthlab/suite.hpp"

using namespace strengthlab;

namespace {

struct CommonOpts {
    std::string field_spec = "2";
    std::string poly_text;
    std::string poly_file;
    std::string family_file;
    uint32_t nvars = 0;  // 0: infer from the largest index used
    std::string mode = "exact";
    uint64_t samples = 100000;
    double delta = 0.01;
    int threads = 0;  // 0: resolve from STRENGTHLAB_THREADS, default 1
    uint64_t budget = uint64_t(1) << 34;
    uint64_t seed = 0;
    std::string format = "json";
    bool with_timing = false;

    std::optional<uint32_t> declared_n() const {
        return nvars == 0 ? std::optional<uint32_t>{} : std::optional<uint32_t>{nvars};
    }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool wants_poly, bool wants_family) {
    cmd->add_option("--field", o.field_spec, "field as P or P,S (e.g. 2 or 3,2)");
    if (wants_poly) {
        cmd->add_option("--poly", o.poly_text, "polynomial text");
        cmd->add_option("--poly-file", o.poly_file, "file with one polynomial (first line used)");
    }
    if (wants_family) cmd->add_option("--family-file", o.family_file, "file with one polynomial per line");
    cmd->add_option("--nvars", o.nvars, "ambient variable count (default: inferred)");
    cmd->add_option("--mode", o.mode, "exact | mc")->check(CLI::IsMember({"exact", "mc"}));
    cmd->add_option("--samples", o.samples, "monte carlo sample count");
    cmd->add_option("--delta", o.delta, "monte carlo failure probability");
    cmd->add_option("--threads", o.threads, "worker threads (default: STRENGTHLAB_THREADS or 1)");
    cmd->add_option("--budget", o.budget, "max exact evaluations");
    cmd->add_option("--seed", o.seed, "seed for all randomness");
    cmd->add_option("--format", o.format, "json | csv | text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_flag("--timing", o.with_timing, "include wall-clock fields in reports");
}

FieldPtr make_field(const std::string& spec) {
    uint64_t p = 0;
    uint32_t s = 1;
    size_t comma = spec.find(',');
    p = std::stoull(spec.substr(0, comma));
    if (comma != std::string::npos) s = uint32_t(std::stoul(spec.substr(comma + 1)));
    return field_create(p, s);
}

ExecConfig make_exec(const CommonOpts& o) {
    ExecConfig cfg;
    cfg.budget = o.budget;
    if (o.threads > 0) {
        cfg.threads = o.threads;
    } else if (const char* env = std::getenv("STRENGTHLAB_THREADS")) {
        cfg.threads = std::max(1, std::atoi(env));
    } else {
        cfg.threads = 1;
    }
    return cfg;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::bad_parameters, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Polynomial load_poly(const CommonOpts& o, const FieldPtr& f) {
    if (!o.poly_text.empty()) return parse_polynomial(o.poly_text, f, o.declared_n());
    if (!o.poly_file.empty()) {
        auto polys = parse_polynomial_lines(read_file(o.poly_file), f, o.declared_n());
        if (polys.empty()) fail(errc::bad_parameters, "no polynomial in " + o.poly_file);
        return polys[0];
    }
    fail(errc::bad_parameters, "need --poly or --poly-file");
}

PolyFamily load_family(const CommonOpts& o, const FieldPtr& f, bool allow_dependent = false) {
    if (o.family_file.empty()) fail(errc::bad_parameters, "need --family-file");
    auto polys = parse_polynomial_lines(read_file(o.family_file), f, o.declared_n());
    if (polys.empty()) fail(errc::bad_parameters, "no polynomials in " + o.family_file);
    return PolyFamily::make(std::move(polys), allow_dependent);
}

void emit(const json& j, const CommonOpts& o) {
    if (o.format == "text") {
        for (auto it = j.begin(); it != j.end(); ++it)
            std::cout << it.key() << ": " << it.value().dump() << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strengthlab: rank, bias and uniformity invariants over finite fields"};
    app.require_subcommand(1);

    CommonOpts o;

    // bias
    auto* cmd_bias = app.add_subcommand("bias", "character-sum bias of a polynomial");
    bool want_arank = false;
    add_common(cmd_bias, o, true, false);
    cmd_bias->add_flag("--arank", want_arank, "also compute the analytic rank (exact)");

    // gowers
    auto* cmd_gowers = app.add_subcommand("gowers", "Gowers U_d norm");
    uint32_t gowers_d = 2;
    std::string gowers_path = "definition";
    add_common(cmd_gowers, o, true, false);
    cmd_gowers->add_option("--d", gowers_d, "norm order d >= 1");
    cmd_gowers->add_option("--path", gowers_path, "definition | tensor")
        ->check(CLI::IsMember({"definition", "tensor"}));

    // family
    auto* cmd_family = app.add_subcommand("family", "operations on a polynomial family");
    auto* fam_rank = cmd_family->add_subcommand("rank", "min analytic rank over the span");
    add_common(fam_rank, o, false, true);
    auto* fam_fibers = cmd_family->add_subcommand("fibers", "joint value distribution and Fourier side");
    add_common(fam_fibers, o, false, true);
    auto* fam_equi = cmd_family->add_subcommand("equidistribution", "fiber ratio deviation check");
    add_common(fam_equi, o, false, true);
    auto* fam_search = cmd_family->add_subcommand("search-shifts", "randomized shift-family search");
    uint32_t search_m = 1, search_trials = 16;
    add_common(fam_search, o, true, false);
    fam_search->add_option("--m", search_m, "number of shifts")->required();
    fam_search->add_option("--trials", search_trials, "sampled tuples")->required();

    // variety
    auto* cmd_variety = app.add_subcommand("variety", "point counts and singular locus");
    auto* var_count = cmd_variety->add_subcommand("count", "CSV of counts per extension degree");
    uint32_t smax = 1;
    std::string sing_method = "minors";
    add_common(var_count, o, true, true);
    var_count->add_option("--smax", smax, "largest extension degree");
    var_count->add_option("--method", sing_method, "minors | pairing")
        ->check(CLI::IsMember({"minors", "pairing"}));
    auto* var_codim = cmd_variety->add_subcommand("codim", "dimension and codimension report");
    add_common(var_codim, o, true, true);
    var_codim->add_option("--smax", smax, "largest extension degree");
    var_codim->add_option("--method", sing_method, "minors | pairing")
        ->check(CLI::IsMember({"minors", "pairing"}));

    // rank
    auto* cmd_rank = app.add_subcommand("rank", "partition-rank bounds and certificates");
    auto* rank_prank = cmd_rank->add_subcommand("prank", "bounds for the multilinear form of P");
    uint64_t search_budget = 20000;
    add_common(rank_prank, o, true, false);
    rank_prank->add_option("--search-budget", search_budget, "exhaustive-phase assignment budget");

    // gen
    auto* cmd_gen = app.add_subcommand("gen", "structured generator polynomials");
    std::string gen_kind;
    uint32_t gen_n = 2, gen_s = 2, gen_m = 1, gen_i = 1, gen_t = 2;
    std::string gen_degrees = "2,2";
    std::string gen_out;
    std::string shifts_file;
    cmd_gen->add_option("kind", gen_kind, "F | Fblock | G | theorem-m")->required();
    add_common(cmd_gen, o, false, true);
    cmd_gen->add_option("--n", gen_n, "coordinate range n");
    cmd_gen->add_option("--s", gen_s, "number of rows / labels");
    cmd_gen->add_option("--m", gen_m, "number of blocks");
    cmd_gen->add_option("--i", gen_i, "block index (1-based)");
    cmd_gen->add_option("--t", gen_t, "coordinate range t");
    cmd_gen->add_option("--degrees", gen_degrees, "comma-separated degrees for G");
    cmd_gen->add_option("--shifts-file", shifts_file, "one point per line for theorem-m");
    cmd_gen->add_option("--out", gen_out, "output prefix (PREFIX.poly, PREFIX.vars.json)");

    // suite
    auto* cmd_suite = app.add_subcommand("suite", "acceptance criteria");
    std::string suite_name = "all";
    cmd_suite->add_option("name", suite_name, "criterion name or 'all'");
    add_common(cmd_suite, o, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        ExecConfig cfg = make_exec(o);
        McParams mc{o.samples, o.delta, o.seed};
        BiasMode mode = o.mode == "exact" ? BiasMode::exact : BiasMode::monte_carlo;

        if (cmd_bias->parsed()) {
            FieldPtr f = make_field(o.field_spec);
            Polynomial p = load_poly(o, f);
            BiasReport rep = bias(p, mode, mc, cfg);
            std::optional<double> arank;
            bool arank_inf = false;
            if (want_arank) {
                ArankResult ar = analytic_rank(p, BiasMode::exact, mc, cfg);
                arank_inf = ar.infinite;
                if (!ar.infinite) arank = ar.value;
            }
            emit(bias_report_json(rep, arank, arank_inf, want_arank, o.with_timing), o);
            return 0;
        }
        if (cmd_gowers->parsed()) {
            FieldPtr f = make_field(o.field_spec);
            Polynomial p = load_poly(o, f);
            GowersResult gr = gowers_norm(
                p, gowers_d, gowers_path == "definition" ? GowersPath::definition : GowersPath::tensor,
                cfg);
            emit(gowers_report_json(gr, gowers_d, gowers_path, f->q(), p.nvars()), o);
            return 0;
        }
        if (fam_rank->parsed()) {
            FieldPtr f = make_field(o.field_spec);
            PolyFamily fam = load_family(o, f);
            MinArankResult r = family_min_arank(fam, mode, mc, cfg);
            emit(family_rank_report_json(r), o);
            return 0;
        }
        if (fam_fibers->parsed()) {
            FieldPtr f = make_field(o.field_spec);
            PolyFamily fam = load_family(o, f);
            FiberDistribution dist = joint_distribution(fam.members(), cfg);
            emit(fibers_report_json(dist, true), o);
            return 0;
        }
        if (fam_equi->parsed()) {
            FieldPtr f = make_field(o.field_spec);
            PolyFamily fam = load_family(o, f);
            EquidistReport er = equidistribution_check(fam, cfg);
            json j{{"schema", "strengthlab/equidistribution_report/v1"},
                   {"max_deviation", er.has_empty_fiber ? json("inf") : json(er.max_deviation)},
                   {"satisfied", er.satisfied},
                   {"hypothesis_rank",
                    er.hypothesis_rank_infinite ? json("inf") : json(er.hypothesis_rank)},
                   {"dim_span", er.dim_span}};
            emit(j, o);
            return 0;
        }
        if (fam_search->parsed()) {
            FieldPtr f = make_field(o.field_spec);
            Polynomial p = load_poly(o, f);
            ShiftSearchResult sr = search_shifts(p, search_m, search_trials, o.seed, mode, mc, cfg);
            emit(shift_search_report_json(sr, *f), o);
            return 0;
        }
        if (var_count->parsed() || var_codim->parsed()) {
            FieldPtr f = make_field(o.field_spec);
            PolyFamily fam = o.family_file.empty()
                                 ? PolyFamily::make({load_poly(o, f)})
                                 : load_family(o, f);
            SingularMethod method =
                sing_method == "minors" ? SingularMethod::minors : SingularMethod::pairing;
            VarietyReport vr = codim_singular(fam, smax, cfg, method);
            if (var_count->parsed() && o.format != "json") {
                std::cout << point_count_csv(vr.table, o.with_timing);
            } else if (var_count->parsed()) {
                emit(variety_report_json(vr, o.with_timing), o);
            } else {
                emit(variety_report_json(vr, o.with_timing), o);
            }
            return 0;
        }
        if (rank_prank->parsed()) {
            FieldPtr f = make_field(o.field_spec);
            Polynomial p = load_poly(o, f);
            RankBounds rb = ncrank_bounds(p, {}, search_budget, cfg);
            json j{{"schema", "strengthlab/rank_report/v1"},
                   {"nc_lower", rb.lower},
                   {"prank_lower", rb.prank_lower_value},
                   {"c_d", rb.c_d},
                   {"method", rb.method}};
            j["upper"] = rb.upper ? json(*rb.upper) : json(nullptr);
            Tensor t = multilinearize(p);
            if (auto cert = prank_upper_search(t, search_budget, o.seed))
                j["certificate"] = certificate_json(*cert);
            emit(j, o);
            return 0;
        }
        if (cmd_gen->parsed()) {
            FieldPtr f = make_field(o.field_spec);
            Polynomial out(f, 0);
            std::vector<std::string> names;
            json params;
            if (gen_kind == "F") {
                out = gen_F(f, gen_n, gen_s);
                names = gen_F_names(gen_n, gen_s);
                params = json{{"n", gen_n}, {"s", gen_s}};
            } else if (gen_kind == "Fblock") {
                out = gen_F_block(f, gen_n, gen_s, gen_m, gen_i);
                names = gen_F_block_names(gen_n, gen_s, gen_m);
                params = json{{"n", gen_n}, {"s", gen_s}, {"m", gen_m}, {"i", gen_i}};
            } else if (gen_kind == "G") {
                std::vector<uint32_t> degs;
                size_t start = 0;
                while (start <= gen_degrees.size()) {
                    size_t comma = gen_degrees.find(',', start);
                    degs.push_back(uint32_t(std::stoul(gen_degrees.substr(start, comma - start))));
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
                out = gen_G(f, gen_t, gen_s, degs);
                names = gen_G_names(gen_t, gen_s, degs);
                params = json{{"t", gen_t}, {"s", gen_s}, {"degrees", degs}};
            } else if (gen_kind == "theorem-m") {
                PolyFamily inputs = load_family(o, f);
                std::vector<std::vector<uint32_t>> shifts;
                if (!shifts_file.empty()) {
                    std::istringstream in(read_file(shifts_file));
                    std::string line;
                    while (std::getline(in, line)) {
                        if (line.empty() || line[0] == '#') continue;
                        shifts.push_back(parse_point(line, f));
                    }
                } else {
                    for (uint32_t k = 0; k < gen_t * gen_m; ++k) {
                        std::vector<uint32_t> w(inputs.nvars());
                        for (uint32_t i = 0; i < inputs.nvars(); ++i)
                            w[i] = uint32_t(bounded(ctr_value(o.seed, k, i), f->q()));
                        shifts.push_back(std::move(w));
                    }
                }
                PolyFamily fam = build_theorem_m_family(inputs, shifts, gen_t, gen_m);
                std::string poly_text;
                for (auto& m : fam.members()) poly_text += m.str() + "\n";
                json sidecar = gen_sidecar_json("theorem-m",
                                                json{{"t", gen_t}, {"m", gen_m}, {"s", inputs.size()}},
                                                {});
                if (!gen_out.empty()) {
                    std::ofstream(gen_out + ".poly") << poly_text;
                    std::ofstream(gen_out + ".vars.json") << sidecar.dump(2) << "\n";
                    std::cout << gen_out << ".poly\n";
                } else {
                    std::cout << poly_text;
                    std::cerr << sidecar.dump(2) << "\n";
                }
                return 0;
            } else {
                fail(errc::bad_parameters, "unknown generator kind " + gen_kind);
            }
            json sidecar = gen_sidecar_json(gen_kind, params, names);
            if (!gen_out.empty()) {
                std::ofstream(gen_out + ".poly") << out.str() << "\n";
                std::ofstream(gen_out + ".vars.json") << sidecar.dump(2) << "\n";
                std::cout << gen_out << ".poly\n";
            } else {
                std::cout << out.str() << "\n";
                std::cerr << sidecar.dump(2) << "\n";
            }
            return 0;
        }
        if (cmd_suite->parsed()) {
            std::vector<CriterionResult> results;
            if (suite_name == "all") {
                results = run_all_criteria(cfg);
            } else {
                int id = criterion_id_from_name(suite_name);
                if (id < 0) {
                    // allow numeric ids too
                    try {
                        id = std::stoi(suite_name);
                    } catch (...) {
                        fail(errc::bad_parameters, "unknown suite " + suite_name);
                    }
                }
                results.push_back(run_criterion(id, cfg));
            }
            bool all_pass = true;
            for (const auto& r : results) {
                std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.id << " " << r.name;
                if (o.with_timing) std::cout << " (" << int(r.elapsed_ms) << " ms)";
                std::cout << ": " << r.detail << "\n";
                all_pass = all_pass && r.pass;
            }
            return all_pass ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == errc::budget_exceeded ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
