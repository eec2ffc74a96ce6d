// ============================================================================
// idm — command-line surface of the solver toolkit
// ============================================================================
//
// Subcommands: validate, solve, oracle, gen, compact, classify.
// Results go to stdout, diagnostics to stderr. Exit codes:
//   0  success (validate: all schedules valid; solve/oracle: answer found)
//   1  completed with a negative answer (invalid schedule, no perfect
//      schedule, threshold missed)
//   2  usage error or refused (problem, variant, shape) combination
//   3  search budget exhausted before the answer was certified
//   4  parse error in an input file
//   5  internal error: a solver produced a witness that failed re-validation

#include "CLI11.hpp"

#include "idm/instance.hpp"
#include "idm/io.hpp"
#include "idm/lp_bailout.hpp"
#include "idm/oracle.hpp"
#include "idm/reductions.hpp"
#include "idm/schedule.hpp"
#include "idm/shape.hpp"
#include "idm/tree_bailout.hpp"
#include "idm/validity.hpp"

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitParse = 4;
constexpr int kExitInternal = 5;

struct CliError {
    int code;
    std::string message;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{kExitParse, "cannot open '" + path + "'"};
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{kExitUsage, "cannot write '" + path + "'"};
    out << content;
}

idm::IdmInstance load_instance(const std::string& path) {
    try {
        return idm::parse_instance(slurp(path));
    } catch (const idm::ParseError& e) {
        throw CliError{kExitParse, path + ": " + e.what()};
    }
}

idm::Variant parse_variant(const std::string& name) {
    if (name == "aon") return idm::Variant::AoN;
    if (name == "pp") return idm::Variant::PP;
    if (name == "fp") return idm::Variant::FP;
    throw CliError{kExitUsage, "unknown variant '" + name + "'"};
}

std::string report_text(const idm::IdmInstance& inst, const idm::ValidationReport& rep) {
    std::ostringstream os;
    os << "verdict " << (rep.valid ? "valid" : "invalid") << "\n";
    os << "perfect " << (rep.perfect ? "true" : "false") << "\n";
    os << "bankruptcies " << idm::count_bankruptcies(rep) << "\n";
    for (const auto& [node, time] : rep.bankrupt)
        os << "bankrupt " << inst.node_id(node) << " " << time << "\n";
    for (const idm::Violation& v : rep.violations) {
        os << "violation " << idm::to_string(v.kind);
        if (v.node >= 0) os << " node=" << inst.node_id(v.node);
        if (v.debt >= 0) {
            const idm::Debt& d = inst.debt(v.debt);
            os << " debt=" << inst.node_id(d.debtor) << ">" << inst.node_id(d.creditor) << "#"
               << d.label;
        }
        if (v.time >= 0) os << " time=" << v.time;
        os << "\n";
    }
    return os.str();
}

// ---- validate ---------------------------------------------------------------

int cmd_validate(const std::string& variant_name, const std::vector<std::string>& files,
                 const std::string& bailout_file, int jobs) {
    idm::Variant variant = parse_variant(variant_name);
    if (files.size() < 2 || files.size() % 2 != 0)
        throw CliError{kExitUsage, "expected <instance> <schedule> pairs"};
    if (!bailout_file.empty() && files.size() != 2)
        throw CliError{kExitUsage, "--bailout requires exactly one pair"};

    struct Job {
        std::string inst_path, sched_path;
        std::string output;
        bool valid = false;
    };
    std::vector<Job> work;
    for (size_t i = 0; i < files.size(); i += 2) work.push_back({files[i], files[i + 1], "", false});

    auto run_one = [&](Job& job) {
        idm::IdmInstance inst = load_instance(job.inst_path);
        idm::Schedule sched = [&] {
            try {
                return idm::parse_schedule(slurp(job.sched_path), inst);
            } catch (const idm::ParseError& e) {
                throw CliError{kExitParse, job.sched_path + ": " + e.what()};
            }
        }();
        std::optional<idm::BailoutVector> bail;
        if (!bailout_file.empty()) {
            try {
                bail = idm::parse_bailout(slurp(bailout_file), inst);
            } catch (const idm::ParseError& e) {
                throw CliError{kExitParse, bailout_file + ": " + e.what()};
            }
        }
        idm::ValidationReport rep =
            idm::validate(inst, sched, variant, bail ? &*bail : nullptr);
        std::ostringstream os;
        os << "schedule " << job.sched_path << "\n" << report_text(inst, rep);
        job.output = os.str();
        job.valid = rep.valid;
    };

    if (jobs > 1 && work.size() > 1) {
        std::vector<std::future<void>> futures;
        std::atomic<size_t> next{0};
        for (int j = 0; j < std::min<size_t>(jobs, work.size()); ++j)
            futures.push_back(std::async(std::launch::async, [&] {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= work.size()) return;
                    run_one(work[i]);
                }
            }));
        for (auto& f : futures) f.get();
    } else {
        for (Job& job : work) run_one(job);
    }
    bool all_valid = true;
    for (const Job& job : work) {
        std::cout << job.output;
        all_valid = all_valid && job.valid;
    }
    return all_valid ? 0 : kExitNegative;
}

// ---- solve ------------------------------------------------------------------

void write_witness(const idm::IdmInstance& inst, const idm::Schedule& sched,
                   const idm::BailoutVector* bailout, const std::string& out_schedule,
                   const std::string& out_bailout) {
    if (!out_schedule.empty()) spit(out_schedule, idm::emit_schedule(inst, sched));
    if (!out_bailout.empty() && bailout) spit(out_bailout, idm::emit_bailout(inst, *bailout));
}

void recheck_witness(const idm::IdmInstance& inst, const idm::Schedule& sched,
                     idm::Variant variant, const idm::BailoutVector* bailout) {
    idm::ValidationReport rep = idm::validate(inst, sched, variant, bailout);
    if (!rep.valid || !rep.perfect)
        throw CliError{kExitInternal, "solver emitted a witness that failed re-validation"};
}

int cmd_solve(const std::string& problem, const std::string& variant_name, bool exact_due,
              const std::string& shape_flag, const std::string& inst_path,
              const std::string& out_schedule, const std::string& out_bailout) {
    idm::Variant variant = parse_variant(variant_name);
    if (problem != "bailout-min" && problem != "perfect")
        throw CliError{kExitUsage, "unknown problem '" + problem + "'"};
    idm::IdmInstance inst = load_instance(inst_path);

    auto finish_bailout = [&](const idm::Money& total, const idm::BailoutVector& bailout,
                              const idm::Schedule& sched) {
        recheck_witness(inst, sched, variant, &bailout);
        std::cout << "min-bailout " << total << "\n";
        for (int v = 0; v < inst.node_count(); ++v)
            if (!bailout.at(v).is_zero())
                std::cout << "supplement " << inst.node_id(v) << " " << bailout.at(v) << "\n";
        write_witness(inst, sched, &bailout, out_schedule, out_bailout);
        return 0;
    };
    auto finish_perfect = [&](const std::optional<idm::Schedule>& sched) {
        if (!sched) {
            std::cout << "perfect absent\n";
            return kExitNegative;
        }
        recheck_witness(inst, *sched, variant, nullptr);
        std::cout << "perfect present\n";
        write_witness(inst, *sched, nullptr, out_schedule, out_bailout);
        return 0;
    };

    if (exact_due) {
        if (!classify_shape(inst).all_exact_due)
            throw CliError{kExitUsage,
                           "--exact-due: instance has a debt with t1 < t2; this route "
                           "requires every debt due at one exact time"};
        idm::TreeBailoutResult r = idm::exact_due_bailout_min(inst, variant);
        if (problem == "bailout-min")
            return finish_bailout(r.min_total, r.bailout, r.schedule);
        if (r.min_total.is_zero()) return finish_perfect(r.schedule);
        return finish_perfect(std::nullopt);
    }
    if (variant == idm::Variant::FP) {
        if (problem == "bailout-min") {
            idm::FpBailoutResult r = idm::fp_bailout_min(inst);
            return finish_bailout(r.min_total, r.bailout, r.schedule);
        }
        return finish_perfect(idm::fp_perfect_scheduling(inst));
    }
    if (variant == idm::Variant::PP && shape_flag == "out-tree") {
        if (!classify_shape(inst).is_out_tree)
            throw CliError{kExitUsage, "--shape out-tree: instance is not an out-tree"};
        idm::TreeBailoutResult r = idm::pp_bailout_min_out_tree(inst);
        if (problem == "bailout-min")
            return finish_bailout(r.min_total, r.bailout, r.schedule);
        if (r.min_total.is_zero()) return finish_perfect(r.schedule);
        return finish_perfect(std::nullopt);
    }

    // refused combinations, with the blocking hardness fact
    std::string why;
    if (variant == idm::Variant::AoN)
        why = "aon " + problem +
              " is NP-complete even when the graph is a directed path (and in general); "
              "the tractable aon route is --exact-due";
    else if (variant == idm::Variant::PP)
        why = "pp " + problem +
              " is NP-complete on DAGs and on multiditrees; tractable routes are "
              "--shape out-tree (out-trees) or --exact-due";
    else
        why = "unsupported combination";
    throw CliError{kExitUsage, "refused: " + why + "; use `oracle` for exhaustive desk-scale "
                               "answers"};
}

// ---- oracle -----------------------------------------------------------------

int cmd_oracle(const std::string& problem, const std::string& variant_name,
               const std::vector<std::string>& inst_paths, long long max_states,
               long long granularity, double timeout, int jobs,
               const std::string& out_schedule, const std::string& out_bailout) {
    idm::Variant variant = parse_variant(variant_name);
    if (variant == idm::Variant::FP)
        throw CliError{kExitUsage,
                       "oracle: fp is not enumerable; fp questions are answered by `solve "
                       "--variant fp` (LP)"};
    idm::SearchBudget budget;
    budget.max_states = max_states;
    budget.max_payment_granularity = granularity;
    budget.timeout_seconds = timeout;
    if (inst_paths.size() != 1 && (!out_schedule.empty() || !out_bailout.empty()))
        throw CliError{kExitUsage, "witness output requires exactly one instance"};

    struct Job {
        std::string path;
        std::string output;
        bool exhausted = true;
    };
    std::vector<Job> work;
    for (const std::string& p : inst_paths) work.push_back({p, "", true});

    auto run_one = [&](Job& job) {
        idm::IdmInstance inst = load_instance(job.path);
        idm::OracleAnswer ans;
        if (problem == "bank-min")
            ans = idm::oracle_bankruptcy_min(inst, variant, budget);
        else if (problem == "bank-max")
            ans = idm::oracle_bankruptcy_max(inst, variant, budget);
        else if (problem == "perfect")
            ans = idm::oracle_perfect_scheduling(inst, variant, budget);
        else if (problem == "bailout-min")
            ans = idm::oracle_bailout_min(inst, variant, budget);
        else
            throw CliError{kExitUsage, "unknown problem '" + problem + "'"};
        std::ostringstream os;
        os << "instance " << job.path << "\n";
        if (std::holds_alternative<idm::Money>(ans.value))
            os << "value " << ans.money() << "\n";
        else if (problem == "perfect")
            os << "value " << (ans.truth() ? "true" : "false") << "\n";
        else
            os << "value " << ans.count() << "\n";
        os << "exhausted " << (ans.exhausted ? "true" : "false") << "\n";
        job.output = os.str();
        job.exhausted = ans.exhausted;
        if (inst_paths.size() == 1 && ans.witness)
            write_witness(inst, *ans.witness, ans.bailout ? &*ans.bailout : nullptr,
                          out_schedule, out_bailout);
    };

    if (jobs > 1 && work.size() > 1) {
        std::vector<std::future<void>> futures;
        std::atomic<size_t> next{0};
        for (int j = 0; j < std::min<size_t>(jobs, work.size()); ++j)
            futures.push_back(std::async(std::launch::async, [&] {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= work.size()) return;
                    run_one(work[i]);
                }
            }));
        for (auto& f : futures) f.get();
    } else {
        for (Job& job : work) run_one(job);
    }
    bool all_exhausted = true;
    for (const Job& job : work) {
        std::cout << job.output;
        all_exhausted = all_exhausted && job.exhausted;
    }
    return all_exhausted ? 0 : kExitBudget;
}

// ---- gen --------------------------------------------------------------------

idm::Sat3Formula parse_formula_file(const std::string& text) {
    idm::Sat3Formula phi;
    for (const auto& [num, toks] : idm::detail::logical_lines(text)) {
        if (toks[0] == "vars") {
            if (toks.size() != 2) throw idm::ParseError(num, "vars takes <n>");
            phi.variables = idm::detail::parse_int(toks[1], num, "variable count");
        } else if (toks[0] == "clause") {
            std::vector<int> clause;
            for (size_t i = 1; i < toks.size(); ++i)
                clause.push_back(idm::detail::parse_int(toks[i], num, "literal"));
            phi.clauses.push_back(std::move(clause));
        } else {
            throw idm::ParseError(num, "unknown directive '" + toks[0] + "'");
        }
    }
    return phi;
}

idm::NumberMultiset parse_numbers_file(const std::string& text) {
    idm::NumberMultiset s;
    for (const auto& [num, toks] : idm::detail::logical_lines(text)) {
        if (toks[0] == "values") {
            for (size_t i = 1; i < toks.size(); ++i)
                s.values.push_back(idm::detail::parse_int(toks[i], num, "value"));
        } else if (toks[0] == "k") {
            if (toks.size() != 2) throw idm::ParseError(num, "k takes <target>");
            s.target = idm::detail::parse_int(toks[1], num, "target");
        } else {
            throw idm::ParseError(num, "unknown directive '" + toks[0] + "'");
        }
    }
    return s;
}

idm::SourcedDigraph parse_digraph_file(const std::string& text) {
    idm::SourcedDigraph h;
    for (const auto& [num, toks] : idm::detail::logical_lines(text)) {
        if (toks[0] == "vertices") {
            if (toks.size() != 2) throw idm::ParseError(num, "vertices takes <n>");
            h.vertices = idm::detail::parse_int(toks[1], num, "vertex count");
        } else if (toks[0] == "source") {
            if (toks.size() != 2) throw idm::ParseError(num, "source takes <vertex>");
            h.source = idm::detail::parse_int(toks[1], num, "source");
        } else if (toks[0] == "edge") {
            if (toks.size() != 3) throw idm::ParseError(num, "edge takes <from> <to>");
            h.edges.emplace_back(idm::detail::parse_int(toks[1], num, "endpoint"),
                                 idm::detail::parse_int(toks[2], num, "endpoint"));
        } else {
            throw idm::ParseError(num, "unknown directive '" + toks[0] + "'");
        }
    }
    return h;
}

int cmd_gen(const std::string& reduction, const std::string& input_path,
            const std::string& out_base) {
    const std::string text = slurp(input_path);
    idm::GeneratedInstance g = [&] {
        try {
            if (reduction == "bankmin-3sat3") return idm::gen_bankmin_3sat3(parse_formula_file(text));
            if (reduction == "bankmin-ecp32")
                return idm::gen_bankmin_fixed32_ecp(parse_numbers_file(text));
            if (reduction == "perfsched-dag-3sat3")
                return idm::gen_perfsched_dag_3sat3(parse_formula_file(text));
            if (reduction == "perfsched-multiditree-3sat3")
                return idm::gen_perfsched_multiditree_3sat3(parse_formula_file(text));
            if (reduction == "perfsched-hampath")
                return idm::gen_perfsched_hampath(parse_digraph_file(text));
            if (reduction == "aon-perfsched-partition")
                return idm::gen_aon_perfsched_partition(parse_numbers_file(text));
            if (reduction == "aon-perfsched-3partition")
                return idm::gen_aon_perfsched_3partition(parse_numbers_file(text));
            if (reduction == "bankmax-3sat3") return idm::gen_bankmax_3sat3(parse_formula_file(text));
            if (reduction == "aon-bankmax-subset-sum") {
                idm::NumberMultiset s = parse_numbers_file(text);
                if (!s.target) throw CliError{kExitParse, "subset-sum input needs a 'k' line"};
                long long k = *s.target;
                s.target.reset();
                return idm::gen_aon_bankmax_subset_sum(s, k);
            }
            throw CliError{kExitUsage, "unknown reduction '" + reduction + "'"};
        } catch (const idm::ParseError& e) {
            throw CliError{kExitParse, input_path + ": " + e.what()};
        } catch (const idm::MalformedFormula& e) {
            throw CliError{kExitParse, input_path + ": malformed formula: " + e.what()};
        } catch (const idm::MalformedInput& e) {
            throw CliError{kExitParse, input_path + ": malformed input: " + e.what()};
        } catch (const idm::OddSum& e) {
            throw CliError{kExitParse, input_path + ": " + std::string(e.what())};
        }
    }();
    spit(out_base + ".idm", idm::emit_instance(g.instance));
    spit(out_base + ".note", g.note);
    std::cout << "instance " << out_base << ".idm\n";
    std::cout << "sidecar " << out_base << ".note\n";
    if (g.threshold) std::cout << "threshold " << *g.threshold << "\n";
    return 0;
}

// ---- compact / classify ------------------------------------------------------

int cmd_compact(const std::string& inst_path, const std::string& out_path,
                const std::string& map_path) {
    idm::IdmInstance inst = load_instance(inst_path);
    idm::CompactResult r = idm::compact(inst);
    std::string doc = idm::emit_instance(r.instance);
    if (out_path.empty()) {
        std::cout << doc;
        for (const auto& [oldt, newt] : r.time_map)
            std::cout << "# time-map " << oldt << " -> " << newt << "\n";
    } else {
        spit(out_path, doc);
    }
    if (!map_path.empty()) {
        std::ostringstream os;
        for (const auto& [oldt, newt] : r.time_map) os << oldt << " " << newt << "\n";
        spit(map_path, os.str());
    }
    return 0;
}

int cmd_classify(const std::string& inst_path) {
    idm::IdmInstance inst = load_instance(inst_path);
    idm::ShapeClass s = idm::classify_shape(inst);
    std::cout << "multiditree " << (s.is_multiditree ? "true" : "false") << "\n";
    std::cout << "dag " << (s.is_dag ? "true" : "false") << "\n";
    std::cout << "out-tree " << (s.is_out_tree ? "true" : "false") << "\n";
    std::cout << "out-path " << (s.is_out_path ? "true" : "false") << "\n";
    std::cout << "exact-due " << (s.all_exact_due ? "true" : "false") << "\n";
    if (s.is_out_tree) std::cout << "root " << inst.node_id(s.out_tree_root) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interval Debt Model solver toolkit"};
    app.require_subcommand(1);

    // validate
    auto* validate = app.add_subcommand("validate", "check a schedule against an instance");
    std::string v_variant;
    std::vector<std::string> v_files;
    std::string v_bailout;
    int v_jobs = 1;
    validate->add_option("--variant", v_variant, "aon|pp|fp")->required();
    validate->add_option("files", v_files, "<instance> <schedule> pairs")->required();
    validate->add_option("--bailout", v_bailout, "bailout document applied at time 0");
    validate->add_option("--jobs", v_jobs, "parallel validation jobs");

    // solve
    auto* solve = app.add_subcommand("solve", "run a polynomial solver");
    std::string s_problem, s_variant, s_shape, s_instance, s_out_sched, s_out_bail;
    bool s_exact_due = false;
    solve->add_option("--problem", s_problem, "bailout-min|perfect")->required();
    solve->add_option("--variant", s_variant, "aon|pp|fp")->required();
    solve->add_flag("--exact-due", s_exact_due, "route for instances with t1 == t2 everywhere");
    solve->add_option("--shape", s_shape, "out-tree (required for the pp tree route)");
    solve->add_option("instance", s_instance, "instance document")->required();
    solve->add_option("--out-schedule", s_out_sched, "write the witness schedule here");
    solve->add_option("--out-bailout", s_out_bail, "write the bailout vector here");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exhaustive desk-scale reference answer");
    std::string o_problem, o_variant, o_out_sched, o_out_bail;
    std::vector<std::string> o_instances;
    long long o_max_states = 2'000'000;
    long long o_granularity = 1'000'000;
    double o_timeout = 600.0;
    int o_jobs = 1;
    oracle->add_option("--problem", o_problem, "bank-min|bank-max|perfect|bailout-min")
        ->required();
    oracle->add_option("--variant", o_variant, "aon|pp")->required();
    oracle->add_option("instances", o_instances, "instance documents")->required();
    oracle->add_option("--max-states", o_max_states, "search state budget");
    oracle->add_option("--granularity", o_granularity, "per-debt per-time payment cap");
    oracle->add_option("--timeout", o_timeout, "seconds");
    oracle->add_option("--jobs", o_jobs, "parallel oracle jobs over instances");
    oracle->add_option("--out-schedule", o_out_sched, "write the witness schedule here");
    oracle->add_option("--out-bailout", o_out_bail, "write the witness bailout here");

    // gen
    auto* gen = app.add_subcommand("gen", "build a hardness-reduction instance");
    std::string g_reduction, g_input, g_out;
    gen->add_option("--reduction", g_reduction,
                    "bankmin-3sat3|bankmin-ecp32|perfsched-dag-3sat3|"
                    "perfsched-multiditree-3sat3|perfsched-hampath|aon-perfsched-partition|"
                    "aon-perfsched-3partition|bankmax-3sat3|aon-bankmax-subset-sum")
        ->required();
    gen->add_option("--input", g_input, "combinatorial source object")->required();
    gen->add_option("--out", g_out, "output base path (.idm and .note)")->required();

    // compact
    auto* comp = app.add_subcommand("compact", "canonicalize timestamps");
    std::string c_instance, c_out, c_map;
    comp->add_option("instance", c_instance, "instance document")->required();
    comp->add_option("--out", c_out, "write the compacted instance here");
    comp->add_option("--out-map", c_map, "write 'old new' time map lines here");

    // classify
    auto* cls = app.add_subcommand("classify", "structural flags of an instance");
    std::string k_instance;
    cls->add_option("instance", k_instance, "instance document")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*validate) return cmd_validate(v_variant, v_files, v_bailout, v_jobs);
        if (*solve)
            return cmd_solve(s_problem, s_variant, s_exact_due, s_shape, s_instance, s_out_sched,
                             s_out_bail);
        if (*oracle)
            return cmd_oracle(o_problem, o_variant, o_instances, o_max_states, o_granularity,
                              o_timeout, o_jobs, o_out_sched, o_out_bail);
        if (*gen) return cmd_gen(g_reduction, g_input, g_out);
        if (*comp) return cmd_compact(c_instance, c_out, c_map);
        if (*cls) return cmd_classify(k_instance);
        return kExitUsage;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const idm::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const idm::BudgetExhausted& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kExitBudget;
    } catch (const idm::ModelViolation& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
