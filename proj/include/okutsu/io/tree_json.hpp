#pragma once

#include "okutsu/tree.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace okutsu::io {

using json = nlohmann::json;

struct DocumentIssue {
    std::string path;
    std::string message;
};

/// A tree document that could not be read; lists every problem found.
class DocumentError : public std::runtime_error {
public:
    explicit DocumentError(std::vector<DocumentIssue> issues)
        : std::runtime_error(summary(issues)), issues_(std::move(issues))
    {
    }

    const std::vector<DocumentIssue>& issues() const { return issues_; }

private:
    static std::string summary(const std::vector<DocumentIssue>& issues)
    {
        std::string s;
        for (const auto& i : issues) s += (s.empty() ? "" : "; ") + i.path + ": " + i.message;
        return s;
    }

    std::vector<DocumentIssue> issues_;
};

inline constexpr int kDocumentVersion = 1;

namespace detail {

class Reader {
public:
    void fail(const std::string& path, const std::string& msg) { issues.push_back({path, msg}); }

    const json* field(const json& obj, const std::string& path, const char* key, bool required)
    {
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) fail(path + "/" + key, "missing required field");
            return nullptr;
        }
        return &*it;
    }

    void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> known)
    {
        std::set<std::string> allowed(known.begin(), known.end());
        for (auto it = obj.begin(); it != obj.end(); ++it)
            if (!allowed.count(it.key())) fail(path + "/" + it.key(), "unknown field");
    }

    std::optional<std::int64_t> integer(const json* v, const std::string& path)
    {
        if (!v) return std::nullopt;
        if (!v->is_number_integer()) {
            fail(path, "expected an integer");
            return std::nullopt;
        }
        return v->get<std::int64_t>();
    }

    std::optional<std::string> string(const json* v, const std::string& path)
    {
        if (!v) return std::nullopt;
        if (!v->is_string()) {
            fail(path, "expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    std::optional<bool> boolean(const json* v, const std::string& path)
    {
        if (!v) return std::nullopt;
        if (!v->is_boolean()) {
            fail(path, "expected a boolean");
            return std::nullopt;
        }
        return v->get<bool>();
    }

    std::optional<Rational> rational(const json* v, const std::string& path)
    {
        if (!v) return std::nullopt;
        if (v->is_number_integer()) return Rational(v->get<std::int64_t>());
        if (!v->is_string()) {
            fail(path, "expected a rational string \"num/den\"");
            return std::nullopt;
        }
        try {
            return parse_rational(v->get<std::string>());
        } catch (const NumberFormatError& e) {
            fail(path, e.what());
            return std::nullopt;
        }
    }

    std::vector<DocumentIssue> issues;
};

}  // namespace detail

inline OMTree tree_from_json(const json& doc)
{
    detail::Reader rd;
    OMTree tree;
    if (!doc.is_object()) throw DocumentError(std::vector<DocumentIssue>{{"", "document must be a JSON object"}});
    rd.reject_unknown(doc, "", {"version", "primes", "pairs", "ordering", "x_valuations"});
    if (auto v = rd.integer(rd.field(doc, "", "version", true), "/version"); v && *v != kDocumentVersion)
        rd.fail("/version", "unsupported version " + std::to_string(*v));

    const json* primes = rd.field(doc, "", "primes", true);
    if (primes && (!primes->is_array() || primes->empty())) rd.fail("/primes", "expected a non-empty array");
    if (primes && primes->is_array()) {
        for (std::size_t a = 0; a < primes->size(); ++a) {
            const json& pj = (*primes)[a];
            const std::string path = "/primes/" + std::to_string(a);
            if (!pj.is_object()) {
                rd.fail(path, "expected an object");
                continue;
            }
            rd.reject_unknown(pj, path, {"id", "component", "f0", "levels", "refinements"});
            PrimeNode np;
            np.id = rd.string(rd.field(pj, path, "id", true), path + "/id").value_or("");
            np.component = rd.string(rd.field(pj, path, "component", true), path + "/component").value_or("");
            np.f0 = rd.integer(rd.field(pj, path, "f0", true), path + "/f0").value_or(1);
            const json* levels = rd.field(pj, path, "levels", true);
            if (levels && (!levels->is_array() || levels->empty()))
                rd.fail(path + "/levels", "expected a non-empty array");
            if (levels && levels->is_array()) {
                for (std::size_t i = 0; i < levels->size(); ++i) {
                    const json& lj = (*levels)[i];
                    const std::string lp = path + "/levels/" + std::to_string(i);
                    if (!lj.is_object()) {
                        rd.fail(lp, "expected an object");
                        continue;
                    }
                    rd.reject_unknown(lj, lp, {"e", "f", "h"});
                    LevelData L;
                    L.e = rd.integer(rd.field(lj, lp, "e", true), lp + "/e").value_or(1);
                    L.f = rd.integer(rd.field(lj, lp, "f", true), lp + "/f").value_or(1);
                    L.h = rd.integer(rd.field(lj, lp, "h", true), lp + "/h").value_or(1);
                    np.levels.push_back(L);
                }
            }
            if (const json* refs = rd.field(pj, path, "refinements", false)) {
                if (!refs->is_array()) rd.fail(path + "/refinements", "expected an array");
                else
                    for (std::size_t i = 0; i < refs->size(); ++i) {
                        const json& cj = (*refs)[i];
                        const std::string cp = path + "/refinements/" + std::to_string(i);
                        if (cj.is_null()) {
                            np.refinements.emplace_back();
                            continue;
                        }
                        if (!cj.is_array()) {
                            rd.fail(cp, "expected an array or null");
                            continue;
                        }
                        RefinementChain chain;
                        for (std::size_t k = 0; k < cj.size(); ++k) {
                            const json& sj = cj[k];
                            const std::string sp = cp + "/" + std::to_string(k);
                            if (!sj.is_object()) {
                                rd.fail(sp, "expected an object");
                                continue;
                            }
                            rd.reject_unknown(sj, sp, {"phi", "slope", "psi"});
                            RefinementStep st;
                            st.phi = rd.string(rd.field(sj, sp, "phi", true), sp + "/phi").value_or("");
                            st.slope = rd.rational(rd.field(sj, sp, "slope", true), sp + "/slope").value_or(0);
                            st.psi = rd.string(rd.field(sj, sp, "psi", false), sp + "/psi").value_or("");
                            chain.push_back(st);
                        }
                        np.refinements.emplace_back(std::move(chain));
                    }
            }
            tree.primes.push_back(std::move(np));
        }
    }

    if (const json* pairs = rd.field(doc, "", "pairs", false)) {
        if (!pairs->is_array()) rd.fail("/pairs", "expected an array");
        else
            for (std::size_t a = 0; a < pairs->size(); ++a) {
                const json& rj = (*pairs)[a];
                const std::string path = "/pairs/" + std::to_string(a);
                if (!rj.is_object()) {
                    rd.fail(path, "expected an object");
                    continue;
                }
                rd.reject_unknown(rj, path,
                                  {"p", "q", "ell", "lambda_pq", "lambda_qp", "phi_match_p", "phi_match_q", "minor_index"});
                PairRecord rec;
                rec.p = rd.string(rd.field(rj, path, "p", true), path + "/p").value_or("");
                rec.q = rd.string(rd.field(rj, path, "q", true), path + "/q").value_or("");
                rec.ell = static_cast<int>(rd.integer(rd.field(rj, path, "ell", true), path + "/ell").value_or(0));
                rec.lambda_pq = rd.rational(rd.field(rj, path, "lambda_pq", false), path + "/lambda_pq");
                rec.lambda_qp = rd.rational(rd.field(rj, path, "lambda_qp", false), path + "/lambda_qp");
                rec.phi_match_p = rd.boolean(rd.field(rj, path, "phi_match_p", false), path + "/phi_match_p");
                rec.phi_match_q = rd.boolean(rd.field(rj, path, "phi_match_q", false), path + "/phi_match_q");
                if (auto m = rd.integer(rd.field(rj, path, "minor_index", false), path + "/minor_index"))
                    rec.minor_index = static_cast<int>(*m);
                tree.pairs.push_back(std::move(rec));
            }
    }

    if (const json* ord = rd.field(doc, "", "ordering", false)) {
        if (!ord->is_array()) rd.fail("/ordering", "expected an array of prime ids");
        else {
            std::vector<PrimeId> o;
            for (std::size_t i = 0; i < ord->size(); ++i)
                if (auto s = rd.string(&(*ord)[i], "/ordering/" + std::to_string(i))) o.push_back(*s);
            tree.ordering = std::move(o);
        }
    }

    if (const json* xv = rd.field(doc, "", "x_valuations", false)) {
        if (!xv->is_object()) rd.fail("/x_valuations", "expected an object");
        else
            for (auto it = xv->begin(); it != xv->end(); ++it)
                if (auto r = rd.rational(&it.value(), "/x_valuations/" + it.key())) tree.x_valuations[it.key()] = *r;
    }

    if (!rd.issues.empty()) throw DocumentError(std::move(rd.issues));
    return tree;
}

inline OMTree parse_tree(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DocumentError(std::vector<DocumentIssue>{{"", std::string("invalid JSON: ") + e.what()}});
    }
    return tree_from_json(doc);
}

inline OMTree load_tree(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DocumentError(std::vector<DocumentIssue>{{"", "cannot open " + path}});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_tree(ss.str());
}

inline json tree_to_json(const OMTree& tree)
{
    json doc;
    doc["version"] = kDocumentVersion;
    doc["primes"] = json::array();
    for (const auto& np : tree.primes) {
        json pj;
        pj["id"] = np.id;
        pj["component"] = np.component;
        pj["f0"] = np.f0;
        pj["levels"] = json::array();
        for (const auto& L : np.levels) pj["levels"].push_back({{"e", L.e}, {"f", L.f}, {"h", L.h}});
        if (!np.refinements.empty()) {
            pj["refinements"] = json::array();
            for (const auto& c : np.refinements) {
                if (!c) {
                    pj["refinements"].push_back(nullptr);
                    continue;
                }
                json cj = json::array();
                for (const auto& st : *c) cj.push_back({{"phi", st.phi}, {"slope", to_string(st.slope)}, {"psi", st.psi}});
                pj["refinements"].push_back(cj);
            }
        }
        doc["primes"].push_back(pj);
    }
    doc["pairs"] = json::array();
    for (const auto& rec : tree.pairs) {
        json rj{{"p", rec.p}, {"q", rec.q}, {"ell", rec.ell}};
        if (rec.lambda_pq) rj["lambda_pq"] = to_string(*rec.lambda_pq);
        if (rec.lambda_qp) rj["lambda_qp"] = to_string(*rec.lambda_qp);
        if (rec.phi_match_p) rj["phi_match_p"] = *rec.phi_match_p;
        if (rec.phi_match_q) rj["phi_match_q"] = *rec.phi_match_q;
        if (rec.minor_index) rj["minor_index"] = *rec.minor_index;
        doc["pairs"].push_back(rj);
    }
    if (tree.ordering) doc["ordering"] = *tree.ordering;
    if (!tree.x_valuations.empty()) {
        json xv = json::object();
        for (const auto& [p, v] : tree.x_valuations) xv[p] = to_string(v);
        doc["x_valuations"] = xv;
    }
    return doc;
}

inline std::string serialize_tree(const OMTree& tree) { return tree_to_json(tree).dump(2) + "\n"; }

}  // namespace okutsu::io
