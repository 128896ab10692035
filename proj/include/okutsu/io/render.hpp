#pragma once

#include "okutsu/maxmin.hpp"
#include "okutsu/io/tree_json.hpp"

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace okutsu::io {

/// "x^a * phi[i,p]^b * PHI[p]^c"; x exponents of all primes are merged, the empty product is "1".
inline std::string render_numerator(const OMTree& tree, const FactorProduct& g, const std::vector<PrimeId>& order = {})
{
    std::vector<PrimeId> primes = order.empty() ? g.primes() : order;
    std::int64_t x = 0;
    for (const auto& [k, e] : g.factors())
        if (k.level == 0) x += e;
    std::vector<std::string> parts;
    auto power = [](std::string base, std::int64_t e) { return e == 1 ? base : base + "^" + std::to_string(e); };
    if (x > 0) parts.push_back(power("x", x));
    for (const auto& p : primes) {
        const int top = tree.prime(p).depth() + 1;
        for (int lv = 1; lv <= top; ++lv) {
            const std::int64_t e = g.exponent(p, lv);
            if (e == 0) continue;
            parts.push_back(power(lv == top ? "PHI[" + p + "]" : "phi[" + std::to_string(lv) + "," + p + "]", e));
        }
    }
    if (parts.empty()) return "1";
    std::string out;
    for (const auto& s : parts) out += (out.empty() ? "" : " * ") + s;
    return out;
}

/// "p:a,q:b"; whitespace around tokens is ignored.
inline FractionalIdeal parse_ideal(const OMTree& tree, const std::string& text)
{
    FractionalIdeal I;
    std::stringstream ss(text);
    std::string item;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw UsageError("ideal entry '" + item + "' is not of the form p:a");
        const std::string p = trim(item.substr(0, colon));
        if (!tree.has_prime(p)) throw UsageError("ideal names unknown prime '" + p + "'");
        if (I.exponents.count(p)) throw UsageError("ideal lists prime '" + p + "' twice");
        try {
            std::size_t used = 0;
            const std::string num = trim(item.substr(colon + 1));
            const long long a = std::stoll(num, &used);
            if (used != num.size()) throw std::invalid_argument(num);
            I.exponents[p] = a;
        } catch (const std::logic_error&) {
            throw UsageError("ideal exponent of '" + p + "' is not an integer");
        }
    }
    return I;
}

inline std::vector<PrimeId> parse_id_list(const std::string& text)
{
    std::vector<PrimeId> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

inline json ext_json(const ExtValue& v) { return v.str(); }

inline json index_json(const MultiIndex& idx) { return idx.coords; }

inline std::string pad(const std::string& s, std::size_t w)
{
    return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

/// Column-aligned rendering of rows of cells; the first row is the header.
inline std::string render_table(const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> width;
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (width.size() <= c) width.push_back(0);
            width[c] = std::max(width[c], r[c].size());
        }
    std::string out;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t c = 0; c < r.size(); ++c) line += (c ? "  " : "") + (c + 1 == r.size() ? r[c] : pad(r[c], width[c]));
        out += line + "\n";
    }
    return out;
}

/// Valuation vector with the argmin entry in brackets, e.g. "([18], 22, 21)".
inline std::string render_vector(const std::vector<ExtValue>& vec, std::optional<std::size_t> mark)
{
    std::string s = "(";
    for (std::size_t i = 0; i < vec.size(); ++i) {
        if (i) s += ", ";
        const std::string v = vec[i].str();
        s += mark && *mark == i ? "[" + v + "]" : v;
    }
    return s + ")";
}

struct TraceRow {
    std::size_t step = 0;
    std::int64_t degree = 0;
    std::string numerator;
    std::vector<ExtValue> vector;
    std::optional<std::size_t> argmin;  ///< absent on the final row
    ExtValue value;
};

inline std::vector<TraceRow> trace_rows(const OMTree& tree, const MaxMinOutput& run)
{
    std::vector<TraceRow> rows;
    for (std::size_t k = 0; k < run.indices.size(); ++k) {
        TraceRow r;
        r.step = k;
        r.degree = run.indices[k].degree();
        r.numerator = render_numerator(tree, run.numerators[k], run.primes);
        r.vector = run.vectors[k];
        if (k < run.argmin_trace.size()) r.argmin = run.argmin_trace[k];
        r.value = run.values[k];
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::string render_trace_table(const OMTree& tree, const MaxMinOutput& run)
{
    std::vector<std::vector<std::string>> rows;
    std::string head = "vector (";
    for (std::size_t i = 0; i < run.primes.size(); ++i) head += (i ? ", " : "") + run.primes[i];
    rows.push_back({"k", "deg", "numerator", head + ")", "w"});
    for (const auto& r : trace_rows(tree, run))
        rows.push_back({std::to_string(r.step), std::to_string(r.degree), r.numerator, render_vector(r.vector, r.argmin),
                        r.value.str()});
    return render_table(rows);
}

inline json trace_json(const OMTree& tree, const MaxMinOutput& run)
{
    json out;
    out["primes"] = run.primes;
    out["steps"] = json::array();
    for (const auto& r : trace_rows(tree, run)) {
        json row{{"step", r.step}, {"degree", r.degree}, {"numerator", r.numerator}, {"value", r.value.str()}};
        row["index"] = run.indices[r.step].coords;
        row["vector"] = json::array();
        for (const auto& v : r.vector) row["vector"].push_back(v.str());
        row["argmin"] = r.argmin ? json(*r.argmin) : json(nullptr);
        out["steps"].push_back(row);
    }
    out["argmin_trace"] = run.argmin_trace;
    return out;
}

inline std::string render_basis_table(const OMTree& tree, const MaxMinOutput& run)
{
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"k", "deg", "numerator", "nu", "floor"});
    std::size_t k = 0;
    for (const auto& b : assemble_basis(run))
        rows.push_back({std::to_string(k++), std::to_string(b.degree), render_numerator(tree, b.numerator, run.primes),
                        b.nu.str(), b.exponent.str()});
    return render_table(rows);
}

inline json basis_json(const OMTree& tree, const MaxMinOutput& run, const FractionalIdeal& I)
{
    json out;
    out["primes"] = run.primes;
    out["basis"] = json::array();
    for (const auto& b : assemble_basis(run))
        out["basis"].push_back({{"degree", b.degree},
                                {"numerator", render_numerator(tree, b.numerator, run.primes)},
                                {"nu", b.nu.str()},
                                {"floor", b.exponent.str()}});
    out["maxmin"] = trace_json(tree, run);
    json th = json::object();
    for (const auto& [p, t] : sfl_thresholds(tree, run, I)) {
        th[p] = {{"tau", to_string(t.tau)}, {"frame_bound", to_string(t.frame_bound)}, {"h", t.h}};
        th[p]["row_bound"] = t.row_bound ? json(to_string(*t.row_bound)) : json(nullptr);
    }
    out["thresholds"] = th;
    return out;
}

}  // namespace okutsu::io
