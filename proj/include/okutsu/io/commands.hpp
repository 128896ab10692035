#pragma once

#include "okutsu/io/render.hpp"
#include "okutsu/io/tree_json.hpp"
#include "okutsu/oracle/verify.hpp"
#include "okutsu/validate.hpp"

#include <functional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace okutsu::io {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInputError = 2, kBudgetExceeded = 3 };

/// Parses and validates; invariant violations are reported as document issues.
inline OMTree load_validated(const std::string& path)
{
    OMTree tree = load_tree(path);
    const auto violations = validate(tree);
    if (!violations.empty()) {
        std::vector<DocumentIssue> issues;
        for (const auto& v : violations) {
            std::string where = v.invariant;
            for (std::size_t i = 0; i < v.primes.size(); ++i) where += (i ? "," : ":") + v.primes[i];
            issues.push_back({where, v.message});
        }
        throw DocumentError(std::move(issues));
    }
    return tree;
}

/// The explicit --order, or the stored/default ordering of the whole tree.
inline std::vector<PrimeId> resolve_order(const OMTree& tree, const std::string& order)
{
    if (order.empty()) return order_primes(tree);
    std::vector<PrimeId> S = parse_id_list(order);
    std::set<PrimeId> seen;
    for (const auto& p : S) {
        if (!tree.has_prime(p)) throw UsageError("--order names unknown prime '" + p + "'");
        if (!seen.insert(p).second) throw UsageError("--order lists '" + p + "' twice");
    }
    if (S.empty()) throw UsageError("--order is empty");
    return S;
}

inline oracle::GeneratorConfig config_from_json(const json& doc)
{
    detail::Reader rd;
    oracle::GeneratorConfig cfg;
    if (!doc.is_object()) throw DocumentError(std::vector<DocumentIssue>{{"", "config must be a JSON object"}});
    rd.reject_unknown(doc, "",
                      {"seed", "num_primes", "num_components", "max_depth", "max_ef", "max_f0", "max_slope_numerator",
                       "refinement_chain_length", "fractional_exponent_range", "common_prefix_levels", "max_degree",
                       "max_attempts"});
    auto range = [&](const char* key, oracle::IntRange& r) {
        const json* v = rd.field(doc, "", key, false);
        if (!v) return;
        const std::string path = std::string("/") + key;
        if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() || !(*v)[1].is_number_integer()) {
            rd.fail(path, "expected [lo, hi]");
            return;
        }
        r = {(*v)[0].get<std::int64_t>(), (*v)[1].get<std::int64_t>()};
        if (r.lo > r.hi) rd.fail(path, "lo exceeds hi");
    };
    auto integer = [&](const char* key, auto& target) {
        if (auto v = rd.integer(rd.field(doc, "", key, false), std::string("/") + key))
            target = static_cast<std::remove_reference_t<decltype(target)>>(*v);
    };
    integer("seed", cfg.seed);
    range("num_primes", cfg.num_primes);
    range("num_components", cfg.num_components);
    range("max_depth", cfg.max_depth);
    integer("max_ef", cfg.max_ef);
    integer("max_f0", cfg.max_f0);
    integer("max_slope_numerator", cfg.max_slope_numerator);
    range("refinement_chain_length", cfg.refinement_chain_length);
    range("fractional_exponent_range", cfg.fractional_exponent_range);
    range("common_prefix_levels", cfg.common_prefix_levels);
    integer("max_degree", cfg.max_degree);
    integer("max_attempts", cfg.max_attempts);
    if (cfg.num_primes.lo < 1) rd.fail("/num_primes", "at least one prime is needed");
    if (cfg.num_components.lo < 1) rd.fail("/num_components", "at least one component is needed");
    if (cfg.max_f0 < 1) rd.fail("/max_f0", "must be positive");
    if (cfg.max_slope_numerator < 1) rd.fail("/max_slope_numerator", "must be positive");
    if (cfg.refinement_chain_length.lo < 1) rd.fail("/refinement_chain_length", "chains have at least one step");
    if (!rd.issues.empty()) throw DocumentError(std::move(rd.issues));
    return cfg;
}

inline oracle::GeneratorConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DocumentError(std::vector<DocumentIssue>{{"", "cannot open " + path}});
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DocumentError(std::vector<DocumentIssue>{{"", std::string("invalid JSON: ") + e.what()}});
    }
    return config_from_json(doc);
}

/// Runs `body`, mapping input errors to 2 and budget refusals to 3.
inline int guarded(std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const DocumentError& e) {
        for (const auto& i : e.issues()) err << "error: " << (i.path.empty() ? "" : i.path + ": ") << i.message << "\n";
        return kInputError;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return kBudgetExceeded;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const InconsistentTree& e) {
        err << "error: inconsistent tree: " << e.what() << "\n";
        return kInputError;
    } catch (const InsufficientData& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const oracle::GenerationFailed& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

struct RunOptions {
    std::string tree_file;
    std::string ideal;
    std::string order;
    std::string format = "table";
};

inline void check_format(const std::string& f, std::initializer_list<const char*> allowed)
{
    for (const char* a : allowed)
        if (f == a) return;
    throw UsageError("unknown format '" + f + "'");
}

inline int cmd_basis(const RunOptions& opt, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        check_format(opt.format, {"table", "json"});
        const OMTree tree = load_validated(opt.tree_file);
        const auto S = resolve_order(tree, opt.order);
        const FractionalIdeal I = parse_ideal(tree, opt.ideal);
        const MaxMinOutput run = maxmin(tree, S, I);
        if (opt.format == "json")
            out << basis_json(tree, run, I).dump(2) << "\n";
        else
            out << render_basis_table(tree, run);
        return int(kOk);
    });
}

inline int cmd_trace(const RunOptions& opt, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        check_format(opt.format, {"table", "json"});
        const OMTree tree = load_validated(opt.tree_file);
        const auto S = resolve_order(tree, opt.order);
        const FractionalIdeal I = parse_ideal(tree, opt.ideal);
        const MaxMinOutput run = maxmin(tree, S, I);
        if (opt.format == "json")
            out << trace_json(tree, run).dump(2) << "\n";
        else
            out << render_trace_table(tree, run);
        return int(kOk);
    });
}

inline const std::vector<std::string>& all_checks()
{
    static const std::vector<std::string> names{"maximality", "blocks", "precomp", "nu", "canonical"};
    return names;
}

struct VerifyOptions {
    std::string tree_file;
    std::string random;  ///< "SEED/COUNT[/CONFIG]"
    std::string checks = "maximality,blocks,precomp,nu,canonical";
    std::string ideal;
    std::string order;
    std::string format = "table";
    bool corrupt_table = false;  ///< test hook: perturbs the table fed to MaxMin
    int canonical_samples = 5;
};

enum class Outcome { pass, fail, budget, skipped };

inline const char* outcome_name(Outcome o)
{
    switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::budget: return "budget-exceeded";
    case Outcome::skipped: return "skipped";
    }
    return "?";
}

struct CheckResult {
    std::string name;
    Outcome outcome = Outcome::pass;
    json detail = json::object();
};

inline json ext_list(const std::vector<ExtValue>& v)
{
    json a = json::array();
    for (const auto& x : v) a.push_back(x.str());
    return a;
}

/// Adds 100 to every value of the first prime's numerators of positive index.
inline CrossValuationTable corrupted_table(const OMTree& tree, const std::vector<PrimeId>& S)
{
    CrossValuationTable T = build_table(tree, S);
    for (std::size_t k = 0; k < T.size(); ++k)
        for (std::int64_t j = 1; j <= T.n(0); ++j) T.set(k, 0, j, T.at(k, 0, j) + Rational(100));
    return T;
}

inline std::vector<CheckResult> run_checks(const OMTree& tree, const std::vector<PrimeId>& S, const FractionalIdeal& I,
                                           const std::vector<std::string>& checks, std::uint64_t seed,
                                           const VerifyOptions& opt)
{
    std::vector<CheckResult> results;
    auto attempt = [&](const std::string& name, const std::function<void(CheckResult&)>& body) {
        CheckResult r;
        r.name = name;
        try {
            body(r);
        } catch (const BudgetExceeded& e) {
            r.outcome = Outcome::budget;
            r.detail["reason"] = e.what();
        } catch (const InsufficientData& e) {
            r.outcome = Outcome::skipped;
            r.detail["reason"] = e.what();
        }
        results.push_back(std::move(r));
    };
    for (const auto& name : checks) {
        if (name == "maximality") {
            attempt(name, [&](CheckResult& r) {
                const auto rep = opt.corrupt_table
                                     ? oracle::verify_maximality_with_table(tree, S, I, corrupted_table(tree, S))
                                     : oracle::verify_maximality(tree, S, I);
                r.outcome = rep.passed ? Outcome::pass : Outcome::fail;
                r.detail["greedy"] = ext_list(rep.greedy);
                r.detail["oracle"] = ext_list(rep.oracle);
                if (rep.failing_degree) {
                    r.detail["degree"] = *rep.failing_degree;
                    r.detail["greedy_index"] = rep.greedy_index.coords;
                    r.detail["witness"] = rep.witness.coords;
                }
            });
        } else if (name == "blocks") {
            attempt(name, [&](CheckResult& r) {
                const auto rep = oracle::verify_blocks(tree, S, I);
                r.outcome = rep.passed ? Outcome::pass : Outcome::fail;
                r.detail["m_ell"] = rep.m_ell;
                if (!rep.passed) r.detail["failure"] = rep.failure;
            });
        } else if (name == "precomp") {
            attempt(name, [&](CheckResult& r) {
                json sets = json::array();
                bool ok = true;
                for (const auto& ns : node_sets(tree, S)) {
                    const auto interval = restrict_order(S, ns.members);
                    if (!is_interval(S, ns.members)) continue;
                    const auto rep = oracle::verify_precomputation(tree, S, I, interval);
                    ok = ok && rep.passed;
                    sets.push_back({{"members", interval}, {"depth", ns.depth}, {"passed", rep.passed}});
                }
                r.outcome = ok ? Outcome::pass : Outcome::fail;
                r.detail["node_sets"] = sets;
            });
        } else if (name == "nu") {
            attempt(name, [&](CheckResult& r) {
                json splits = json::array();
                bool ok = true;
                std::vector<std::vector<PrimeId>> comps;
                for (const auto& p : S) {
                    if (comps.empty() || !same_component(tree, comps.back().back(), p)) comps.push_back({});
                    comps.back().push_back(p);
                }
                for (const auto& C : comps) {
                    if (C.size() < 2) continue;
                    const auto rep = oracle::verify_nu_sequences(tree, C, I);
                    ok = ok && rep.passed;
                    json s{{"primes", C},
                           {"case", std::string(1, oracle::case_letter(rep.split.split_case))},
                           {"U", rep.split.U},
                           {"D", rep.split.D},
                           {"passed", rep.passed}};
                    if (!rep.passed) s["failure"] = rep.failure;
                    splits.push_back(s);
                }
                if (S.size() >= 2 && index_of_coincidence(tree, S) == 0) {
                    const auto rep = oracle::verify_nu_sequences(tree, S, I);
                    ok = ok && rep.passed;
                    splits.push_back({{"primes", S}, {"case", "A"}, {"passed", rep.passed}});
                }
                r.outcome = ok ? Outcome::pass : Outcome::fail;
                r.detail["splits"] = splits;
            });
        } else if (name == "canonical") {
            attempt(name, [&](CheckResult& r) {
                bool ok = true;
                json bad = json::array();
                for (int t = 0; t < opt.canonical_samples; ++t) {
                    const FactorProduct g = oracle::random_phi_product(tree, S, seed * 7919 + static_cast<std::uint64_t>(t));
                    const auto rep = oracle::verify_canonical(tree, S, g);
                    if (!rep.passed) {
                        ok = false;
                        bad.push_back({{"input", render_numerator(tree, g, S)},
                                       {"output", render_numerator(tree, rep.output, S)}});
                    }
                }
                r.outcome = ok ? Outcome::pass : Outcome::fail;
                r.detail["samples"] = opt.canonical_samples;
                if (!ok) r.detail["failures"] = bad;
            });
        } else {
            throw UsageError("unknown check '" + name + "'");
        }
    }
    return results;
}

inline std::vector<std::string> parse_checks(const std::string& text)
{
    std::vector<std::string> out = parse_id_list(text);
    if (out.empty()) throw UsageError("no checks selected");
    for (const auto& c : out)
        if (std::find(all_checks().begin(), all_checks().end(), c) == all_checks().end())
            throw UsageError("unknown check '" + c + "'");
    return out;
}

struct RandomSpec {
    std::uint64_t seed = 0;
    std::uint64_t count = 1;
    oracle::GeneratorConfig config;
};

inline RandomSpec parse_random_spec(const std::string& text)
{
    RandomSpec spec;
    const auto a = text.find('/');
    if (a == std::string::npos) throw UsageError("--random expects SEED/COUNT[/CONFIG]");
    const auto b = text.find('/', a + 1);
    try {
        std::size_t used = 0;
        const std::string s = text.substr(0, a);
        spec.seed = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        const std::string c = text.substr(a + 1, b == std::string::npos ? std::string::npos : b - a - 1);
        spec.count = std::stoull(c, &used);
        if (used != c.size()) throw std::invalid_argument(c);
    } catch (const std::logic_error&) {
        throw UsageError("--random expects SEED/COUNT[/CONFIG] with integer SEED and COUNT");
    }
    if (b != std::string::npos) spec.config = load_config(text.substr(b + 1));
    return spec;
}

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        check_format(opt.format, {"table", "json"});
        const auto checks = parse_checks(opt.checks);
        if (opt.tree_file.empty() == opt.random.empty())
            throw UsageError("give exactly one of a tree file or --random");
        json instances = json::array();
        bool failed = false;
        bool budget = false;
        auto record = [&](const std::string& label, const std::vector<CheckResult>& results, json extra) {
            json inst = std::move(extra);
            inst["instance"] = label;
            inst["checks"] = json::object();
            for (const auto& r : results) {
                failed = failed || r.outcome == Outcome::fail;
                budget = budget || r.outcome == Outcome::budget;
                json c = r.detail;
                c["outcome"] = outcome_name(r.outcome);
                inst["checks"][r.name] = c;
            }
            instances.push_back(inst);
            if (opt.format == "table") {
                out << label << ":";
                for (const auto& r : results) out << " " << r.name << "=" << outcome_name(r.outcome);
                out << "\n";
                for (const auto& r : results)
                    if (r.outcome == Outcome::fail && r.detail.contains("degree"))
                        out << "  " << r.name << " fails at degree " << r.detail["degree"].get<std::int64_t>()
                            << ": witness " << r.detail["witness"].dump() << "\n";
            }
        };
        if (!opt.tree_file.empty()) {
            const OMTree tree = load_validated(opt.tree_file);
            const auto S = resolve_order(tree, opt.order);
            const FractionalIdeal I = parse_ideal(tree, opt.ideal);
            record(opt.tree_file, run_checks(tree, S, I, checks, 0, opt), json::object());
        } else {
            const RandomSpec spec = parse_random_spec(opt.random);
            for (std::uint64_t i = 0; i < spec.count; ++i) {
                oracle::GeneratorConfig cfg = spec.config;
                cfg.seed = spec.seed + i;
                const OMTree tree = oracle::generate_tree(cfg);
                const auto S = order_primes(tree);
                const FractionalIdeal I =
                    oracle::random_ideal(tree, cfg.seed ^ 0x9e3779b97f4a7c15ULL, cfg.fractional_exponent_range);
                json extra{{"seed", cfg.seed}, {"primes", S}};
                json ideal = json::object();
                for (const auto& [p, a] : I.exponents) ideal[p] = a;
                extra["ideal"] = ideal;
                record("seed " + std::to_string(cfg.seed), run_checks(tree, S, I, checks, cfg.seed, opt), extra);
            }
        }
        const int code = failed ? kCheckFailed : budget ? kBudgetExceeded : kOk;
        if (opt.format == "json") {
            json report{{"instances", instances}, {"passed", code == kOk}, {"exit_code", code}};
            out << report.dump(2) << "\n";
        } else {
            out << (failed ? "FAILED" : budget ? "INCOMPLETE (budget exceeded)" : "OK") << ": " << instances.size()
                << " instance(s)\n";
        }
        return code;
    });
}

inline int cmd_gen(std::uint64_t seed, const std::string& config_path, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        oracle::GeneratorConfig cfg = config_path.empty() ? oracle::GeneratorConfig{} : load_config(config_path);
        cfg.seed = seed;
        out << serialize_tree(oracle::generate_tree(cfg));
        return int(kOk);
    });
}

}  // namespace okutsu::io
