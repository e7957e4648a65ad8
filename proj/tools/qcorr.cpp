// Command-line front end. Exit codes: 0 success, 1 check failed, 2 usage or
// parse error, 3 resource cap exceeded. Errors go to stderr as JSON lines.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcorr/correlations.hpp"
#include "qcorr/coxeter.hpp"
#include "qcorr/dihedral.hpp"
#include "qcorr/fnfamily.hpp"
#include "qcorr/kms.hpp"
#include "qcorr/minsky.hpp"
#include "qcorr/numerics.hpp"
#include "qcorr/presentations.hpp"

using namespace qcorr;
using nlohmann::json;

namespace {

struct ExitCode {
    int code;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void error_line(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}, {"version", kVersion}}.dump() << "\n";
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

void emit(json j) {
    if (j.is_object() && !j.contains("version")) j["version"] = kVersion;
    std::cout << j.dump(2) << "\n";
}

void write_json(const std::filesystem::path& path, json j) {
    if (j.is_object() && !j.contains("version")) j["version"] = kVersion;
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

bool is_exact(const json& j) { return !j.contains("format") || j.at("format").get<std::string>() == "exact"; }

CoxWord parse_word(const std::string& s) {
    std::istringstream in(s);
    CoxWord w;
    std::string tok;
    while (in >> tok) {
        try {
            w.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw UsageError("bad generator index '" + tok + "'");
        }
    }
    return w;
}

json run_result_to_json(const RunResult& r) {
    if (const auto* a = std::get_if<RunAccepted>(&r)) return {{"result", "accepted"}, {"steps", a->steps}};
    if (const auto* s = std::get_if<RunStuck>(&r))
        return {{"result", "stuck"}, {"steps", s->steps}, {"configuration", configuration_to_json(s->config)}};
    const auto& t = std::get<RunTimeout>(r);
    return {{"result", "timeout"}, {"configuration", configuration_to_json(t.config)}};
}

template <class V>
json correlation_checks(const Correlation<V>& c, double tol) {
    const auto v = validate(c, tol);
    const auto ns = is_nonsignalling(c, tol);
    json j{{"valid", v.ok},
           {"exact", v.exact},
           {"max_negativity", format_double(v.max_negativity)},
           {"max_normalization_defect", format_double(v.max_normalization_defect)},
           {"nonreal_entries", v.nonreal_entries},
           {"nonsignalling", ns.ok},
           {"max_signalling_defect", format_double(ns.max_defect)}};
    if (c.scenario().symmetric()) j["synchronous"] = is_synchronous(c, tol);
    return j;
}

template <class V>
json perfect_report_json(const Correlation<V>& c, const BinaryLinearSystem& A, double tol) {
    const auto rep = check_perfect(c, A, tol);
    json conds = json::array();
    for (const auto& list : rep.violations) {
        json l = json::array();
        for (const auto& v : list) l.push_back({{"x", v.x}, {"y", v.y}, {"a", v.a}, {"b", v.b}});
        conds.push_back(l);
    }
    return {{"perfect", rep.pass()}, {"violations", rep.total()}, {"by_condition", conds}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and numeric tools for constant-sized quantum correlations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    double tol = kDefaultTolerance;
    int jobs = 1;
    app.add_option("--tol", tol, "numeric tolerance")->capture_default_str();
    app.add_option("--jobs", jobs, "accepted for compatibility; computations run on one thread")->check(CLI::PositiveNumber);
    std::function<void()> action;

    // ---- minsky ----
    auto* minsky = app.add_subcommand("minsky", "Minsky machines")->require_subcommand(1);
    std::string machine_path;
    long input = 0;
    long long max_steps = 10000;
    int cycle_p = 3, bound = 100;
    {
        auto* c = minsky->add_subcommand("run", "bounded run on input n");
        c->add_option("--machine", machine_path)->required();
        c->add_option("--input", input)->required()->check(CLI::NonNegativeNumber);
        c->add_option("--max-steps", max_steps)->capture_default_str();
        c->callback([&] {
            action = [&] {
                const auto m = machine_from_json(read_json(machine_path));
                json out = run_result_to_json(run(m, input, max_steps));
                out["input"] = input;
                emit(out);
            };
        });
        auto* g = minsky->add_subcommand("extend-glass", "glass-copying extension");
        g->add_option("--machine", machine_path)->required();
        g->callback([&] { action = [&] { emit(machine_to_json(add_glass_extension(machine_from_json(read_json(machine_path))))); }; });
        auto* y = minsky->add_subcommand("extend-cycle", "forced p-cycle extension");
        y->add_option("--machine", machine_path)->required();
        y->add_option("--p", cycle_p)->required();
        y->callback([&] {
            action = [&] { emit(machine_to_json(p_cycle_extension(machine_from_json(read_json(machine_path)), cycle_p))); };
        });
        auto* cl = minsky->add_subcommand("closure", "bounded equivalence closure of the input configuration");
        cl->add_option("--machine", machine_path)->required();
        cl->add_option("--input", input)->required()->check(CLI::NonNegativeNumber);
        cl->add_option("--bound", bound)->capture_default_str();
        cl->callback([&] {
            action = [&] {
                const auto m = machine_from_json(read_json(machine_path));
                const auto cls = equivalence_closure(m, input_configuration(m, input), bound);
                json cs = json::array();
                for (const auto& c : cls) cs.push_back(configuration_to_json(c));
                emit({{"bound", bound}, {"contains_accept", cls.count(accept_configuration(m)) > 0}, {"configurations", cs}});
            };
        });
    }

    // ---- kms ----
    auto* kms = app.add_subcommand("kms", "words of the machine group")->require_subcommand(1);
    int command_index = 0, kms_n = 0, kms_k = 3;
    {
        auto* r = kms->add_subcommand("relator", "relator of one machine command");
        r->add_option("--machine", machine_path)->required();
        r->add_option("--command", command_index)->required();
        r->callback([&] {
            action = [&] {
                const auto m = machine_from_json(read_json(machine_path));
                if (command_index < 0 || command_index >= static_cast<int>(m.commands().size()))
                    throw UsageError("command index out of range");
                const auto w = command_relator(m.commands()[command_index], m.glasses());
                emit({{"command", command_index}, {"word", kms_to_json(w)}, {"text", kms_to_string(w)}});
            };
        });
        auto* iw = kms->add_subcommand("input-word", "configuration word of the input n");
        iw->add_option("--n", kms_n)->required()->check(CLI::NonNegativeNumber);
        iw->add_option("--k", kms_k, "number of glasses")->capture_default_str();
        iw->callback([&] {
            action = [&] {
                const auto w = input_word(kms_n, kms_k);
                emit({{"n", kms_n}, {"k", kms_k}, {"word", kms_to_json(w)}, {"text", kms_to_string(w)}});
            };
        });
    }

    // ---- linsys ----
    auto* linsys = app.add_subcommand("linsys", "binary linear systems")->require_subcommand(1);
    std::string linsys_path;
    {
        auto* n = linsys->add_subcommand("normalize", "rewrite rows to exactly three variables");
        n->add_option("--linsys", linsys_path)->required();
        n->callback([&] {
            action = [&] {
                const auto res = normalize_rows_to_three(linsys_from_json(read_json(linsys_path)));
                json out = linsys_to_json(res.system);
                out["var_map"] = res.var_map;
                emit(out);
            };
        });
        auto* s = linsys->add_subcommand("solution-group", "presentation of the solution group");
        s->add_option("--linsys", linsys_path)->required();
        s->callback([&] { action = [&] { emit(presentation_to_json(solution_group(linsys_from_json(read_json(linsys_path))))); }; });
    }

    // ---- coxeter ----
    auto* coxeter = app.add_subcommand("coxeter", "Coxeter group words")->require_subcommand(1);
    std::string ctx_path, word_text, word2_text;
    {
        auto* nf = coxeter->add_subcommand("normal-form", "canonical representative of a word");
        nf->add_option("--ctx", ctx_path)->required();
        nf->add_option("--word", word_text)->required();
        nf->callback([&] {
            action = [&] {
                const auto ctx = coxeter_context_from_json(read_json(ctx_path));
                const auto w = parse_word(word_text);
                ctx.check_word(w);
                emit({{"word", w}, {"normal_form", normal_form(ctx, w)}});
            };
        });
        auto* eq = coxeter->add_subcommand("equal", "decide equality of two words (exit 1 if different)");
        eq->add_option("--ctx", ctx_path)->required();
        eq->add_option("--word", word_text)->required();
        eq->add_option("--other", word2_text)->required();
        eq->callback([&] {
            action = [&] {
                const auto ctx = coxeter_context_from_json(read_json(ctx_path));
                const auto a = parse_word(word_text), b = parse_word(word2_text);
                ctx.check_word(a);
                ctx.check_word(b);
                const bool same = equal(ctx, a, b);
                emit({{"equal", same}});
                if (!same) throw ExitCode{1};
            };
        });
    }

    // ---- dihedral ----
    auto* dihedral = app.add_subcommand("dihedral", "the dihedral correlation")->require_subcommand(1);
    int p = 5;
    long long r = 2;
    std::string format = "exact";
    {
        auto* b = dihedral->add_subcommand("build-cp", "seven-question correlation");
        b->add_option("--p", p)->required();
        b->add_option("--format", format)->check(CLI::IsMember({"exact", "float"}))->capture_default_str();
        b->callback([&] {
            action = [&] {
                const auto c = build_cp(p);
                emit(format == "exact" ? correlation_to_json(c) : correlation_to_json(to_float(c)));
            };
        });
        auto* bp = dihedral->add_subcommand("build-cp-prime", "five-question correlation");
        bp->add_option("--p", p)->required();
        bp->add_option("--format", format)->check(CLI::IsMember({"exact", "float"}))->capture_default_str();
        bp->callback([&] {
            action = [&] {
                const auto c = build_cp_prime_with_norm(p);
                json out = format == "exact" ? correlation_to_json(c.correlation) : correlation_to_json(to_float(c.correlation));
                out["norm_squared"] = c.norm_squared;
                emit(out);
            };
        });
        auto* s = dihedral->add_subcommand("strategy", "canonical strategy on the regular representation");
        s->add_option("--p", p)->required();
        s->add_option("--format", format)->check(CLI::IsMember({"exact", "float"}))->capture_default_str();
        s->callback([&] {
            action = [&] {
                const auto st = canonical_strategy(p);
                emit(format == "exact" ? strategy_to_json(st) : strategy_to_json(to_float(st)));
            };
        });
        auto* v = dihedral->add_subcommand("verify-fcp", "check the p-th power theorem on the lifted canonical strategy");
        v->add_option("--p", p)->required();
        v->add_option("--r", r)->required();
        v->callback([&] {
            action = [&] {
                const auto lift = holomorph_lift(p, r);
                const auto rep = verify_fcp(to_float(lift.strategy), to_float(lift.U_A), to_float(lift.U_B), r, p, tol);
                json out = fcp_report_to_json(rep);
                out["p"] = p;
                out["r"] = r;
                emit(out);
                if (!rep.hypotheses_pass || rep.conclusion >= tol) throw ExitCode{1};
            };
        });
    }

    // ---- corr ----
    auto* corr = app.add_subcommand("corr", "correlation checks")->require_subcommand(1);
    std::string corr_path, strategy_path;
    {
        auto* v = corr->add_subcommand("validate", "nonnegativity, normalization, nonsignalling, synchronicity");
        v->add_option("--corr", corr_path)->required();
        v->callback([&] {
            action = [&] {
                const json j = read_json(corr_path);
                const json out = is_exact(j) ? correlation_checks(correlation_from_json<CyclotomicNumber>(j), tol)
                                             : correlation_checks(correlation_from_json<double>(j), tol);
                emit(out);
                if (!out.at("valid").get<bool>() || !out.at("nonsignalling").get<bool>()) throw ExitCode{1};
            };
        });
        auto* cp = corr->add_subcommand("check-perfect", "perfect-correlation conditions for Ax = 0");
        cp->add_option("--corr", corr_path)->required();
        cp->add_option("--linsys", linsys_path)->required();
        cp->callback([&] {
            action = [&] {
                const json j = read_json(corr_path);
                const auto A = linsys_from_json(read_json(linsys_path));
                const json out = is_exact(j) ? perfect_report_json(correlation_from_json<CyclotomicNumber>(j), A, tol)
                                             : perfect_report_json(correlation_from_json<double>(j), A, tol);
                emit(out);
                if (!out.at("perfect").get<bool>()) throw ExitCode{1};
            };
        });
        auto* fs = corr->add_subcommand("from-strategy", "correlation of a strategy file");
        fs->add_option("--strategy", strategy_path)->required();
        fs->callback([&] {
            action = [&] {
                const json j = read_json(strategy_path);
                if (is_exact(j)) emit(correlation_to_json(correlation_from_strategy(strategy_from_json<CyclotomicNumber>(j), true, tol)));
                else emit(correlation_to_json(correlation_from_strategy(strategy_from_json<Complex>(j), true, tol)));
            };
        });
    }

    // ---- fn ----
    auto* fn = app.add_subcommand("fn", "trace-function family over the Coxeter group")->require_subcommand(1);
    std::string f_path, out_dir, cursor_text = "0";
    std::size_t limit = 10;
    {
        auto* w = fn->add_subcommand("wn", "support set and constraint partition");
        w->add_option("--ctx", ctx_path)->required();
        w->callback([&] {
            action = [&] {
                const auto ctx = fn_context_from_json(read_json(ctx_path));
                const auto wn = compute_Wn(ctx);
                const auto tc = trace_constraints(ctx, wn);
                auto words = [&](const std::vector<std::size_t>& idx) {
                    json a = json::array();
                    for (auto i : idx) a.push_back(wn.words[i]);
                    return a;
                };
                emit({{"size", wn.words.size()},
                      {"words", wn.words},
                      {"forced1", words(tc.forced1)},
                      {"forced0", words(tc.forced0)},
                      {"free", words(tc.free)}});
            };
        });
        auto* e = fn->add_subcommand("enumerate", "stream members of F_n into a directory");
        e->add_option("--ctx", ctx_path)->required();
        e->add_option("--limit", limit)->capture_default_str();
        e->add_option("--out", out_dir)->required();
        e->add_option("--cursor", cursor_text, "candidate index to resume from")->capture_default_str();
        e->callback([&] {
            action = [&] {
                const auto ctx = fn_context_from_json(read_json(ctx_path));
                const auto wn = compute_Wn(ctx);
                FnEnumerator en(ctx, wn);
                BigInt start;
                if (start.set_str(cursor_text, 10) != 0 || start < 0) throw UsageError("cursor must be a nonnegative integer");
                std::filesystem::create_directories(out_dir);
                json files = json::array();
                const auto next = en.enumerate(start, limit, [&](const BigInt& k, const TraceFunction& f) {
                    const std::string name = "f_" + k.get_str() + ".json";
                    json fj = trace_function_to_json(wn, f);
                    fj["candidate"] = k.get_str();
                    write_json(std::filesystem::path(out_dir) / name, fj);
                    files.push_back(name);
                });
                emit({{"written", files},
                      {"next_cursor", next ? json(next->get_str()) : json(nullptr)},
                      {"free_words", en.free_count()},
                      {"relevant_words", en.relevant_count()}});
            };
        });
        auto* ev = fn->add_subcommand("eval", "correlation C_f of a trace function");
        ev->add_option("--ctx", ctx_path)->required();
        ev->add_option("--f", f_path)->required();
        ev->add_option("--format", format)->check(CLI::IsMember({"exact", "float"}))->capture_default_str();
        ev->callback([&] {
            action = [&] {
                const auto ctx = fn_context_from_json(read_json(ctx_path));
                const auto wn = compute_Wn(ctx);
                const auto f = trace_function_from_json(ctx, wn, read_json(f_path));
                const auto c = correlation_from_f(ctx, wn, f);
                json out = format == "exact" ? correlation_to_json(c) : correlation_to_json(to_float(c));
                out["in_Fn"] = is_in_Fn(ctx, wn, f);
                out["checks"] = correlation_checks(c, tol);
                emit(out);
            };
        });
    }

    // ---- num ----
    auto* num = app.add_subcommand("num", "numeric representations")->require_subcommand(1);
    std::string family_path, pres_path, assign_path;
    double c_bound = 0;
    {
        auto* rp = num->add_subcommand("round-pvm", "round a near-projective family to a projective measurement");
        rp->add_option("--family", family_path, "JSON list of matrices")->required();
        rp->add_option("--c", c_bound, "operator-norm bound (default: measured)");
        rp->callback([&] {
            action = [&] {
                std::vector<FloatMatrix> fam;
                for (const auto& m : read_json(family_path)) fam.push_back(float_matrix_from_json(m));
                if (fam.empty()) throw UsageError("empty family");
                const auto def = near_pvm_defects(fam);
                const double c = c_bound > 0 ? c_bound : def.c;
                const auto res = round_to_pvm(fam, c);
                json pvm = json::array(), dist = json::array();
                for (const auto& m : res.pvm) pvm.push_back(float_matrix_to_json(m));
                for (double d : res.distances) dist.push_back(format_double(d));
                const double bound = delta(c, static_cast<int>(fam.size())) * def.epsilon;
                emit({{"pvm", pvm},
                      {"distances", dist},
                      {"epsilon", format_double(def.epsilon)},
                      {"c", format_double(c)},
                      {"bound", format_double(bound)},
                      {"pvm_defect", format_double(res.pvm_defect)}});
            };
        });
        auto* d = num->add_subcommand("defect", "relator defects of a unitary assignment");
        d->add_option("--presentation", pres_path)->required();
        d->add_option("--assignment", assign_path, "JSON list of matrices, one per generator")->required();
        d->callback([&] {
            action = [&] {
                const auto pres = presentation_from_json(read_json(pres_path));
                std::vector<FloatMatrix> as;
                for (const auto& m : read_json(assign_path)) as.push_back(float_matrix_from_json(m));
                const auto rep = approx_defect(pres, as, tol);
                json ds = json::array();
                for (double x : rep.relator_defects) ds.push_back(format_double(x));
                emit({{"relator_defects", ds}, {"epsilon", format_double(rep.epsilon)}});
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_line("usage", e.what());
        return 2;
    }
    (void)jobs;
    try {
        if (action) action();
        return 0;
    } catch (const ExitCode& e) {
        return e.code;
    } catch (const UsageError& e) {
        error_line("usage", e.what());
        return 2;
    } catch (const json::exception& e) {
        error_line("parse", e.what());
        return 2;
    } catch (const CoxeterCapExceeded& e) {
        error_line("resource_cap", e.what());
        return 3;
    } catch (const TooLarge& e) {
        error_line("resource_cap", e.what());
        return 3;
    } catch (const InvariantViolation& e) {
        error_line("check_failed", e.what());
        return 1;
    } catch (const SpectralGapFailure& e) {
        error_line("check_failed", e.what());
        return 1;
    } catch (const NotGoodStrategy& e) {
        error_line("check_failed", e.what());
        return 1;
    } catch (const RelatorViolation& e) {
        error_line("check_failed", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        error_line("invalid_input", e.what());
        return 2;
    } catch (const std::out_of_range& e) {
        error_line("invalid_input", e.what());
        return 2;
    } catch (const std::exception& e) {
        error_line("internal", e.what());
        return 1;
    }
}
