#pragma once
// Exact Fourier-Motzkin elimination over small systems of linear inequalities
// coeff . x <= bound with rational coefficients, plus the sum-rate projection
// used to reproduce the treating-interference-as-noise MAC region. The text
// format is one row per line:  <coeff>*<var> [+ <coeff>*<var> ...] <= <bound>
// with rationals written p or p/q.

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "icb/channel.hpp"
#include "icb/rational.hpp"

namespace icb {

struct LinearSystem {
    struct Row {
        std::vector<Rat> coeff; // one entry per variable
        Rat bound;
    };
    std::vector<std::string> variables;
    std::vector<Row> rows;

    int var_index(const std::string& name) const {
        for (std::size_t i = 0; i < variables.size(); ++i)
            if (variables[i] == name) return static_cast<int>(i);
        return -1;
    }
    int add_variable(const std::string& name) {
        int i = var_index(name);
        if (i >= 0) return i;
        variables.push_back(name);
        for (auto& r : rows) r.coeff.emplace_back(0);
        return static_cast<int>(variables.size()) - 1;
    }
    void add_row(std::vector<Rat> coeff, Rat bound) {
        if (coeff.size() != variables.size())
            throw std::invalid_argument("LinearSystem: row width mismatch");
        rows.push_back(Row{std::move(coeff), std::move(bound)});
    }
};

namespace detail_fme {

// Positive-scale canonical form: divide by |first nonzero coefficient|.
inline void canonicalize(LinearSystem::Row& r) {
    for (const Rat& c : r.coeff) {
        if (c != 0) {
            Rat s = abs(c);
            for (Rat& x : r.coeff) x /= s;
            r.bound /= s;
            return;
        }
    }
}

inline bool all_zero(const LinearSystem::Row& r) {
    for (const Rat& c : r.coeff)
        if (c != 0) return false;
    return true;
}

// Removes trivial rows (0 <= b, b >= 0), exact duplicates, and rows dominated
// by another row with identical coefficients and a tighter bound. Infeasible
// constant rows (0 <= b < 0) are kept. Returns the number removed.
inline std::size_t prune(std::vector<LinearSystem::Row>& rows) {
    const std::size_t before = rows.size();
    for (auto& r : rows) canonicalize(r);
    std::vector<LinearSystem::Row> kept;
    std::map<std::vector<Rat>, std::size_t> best; // coeffs -> index in kept
    for (auto& r : rows) {
        if (all_zero(r)) {
            if (r.bound >= 0) continue; // trivially true
        }
        auto it = best.find(r.coeff);
        if (it == best.end()) {
            best.emplace(r.coeff, kept.size());
            kept.push_back(std::move(r));
        } else if (r.bound < kept[it->second].bound) {
            kept[it->second].bound = std::move(r.bound);
        }
    }
    rows = std::move(kept);
    return before - rows.size();
}

} // namespace detail_fme

struct ProjectionResult {
    std::vector<std::string> eliminated;
    LinearSystem system;
    std::size_t redundant_removed = 0;
};

inline constexpr std::size_t kRowExplosionLimit = 100000;

namespace detail_fme {

// Row plus the set of original rows it combines, for Kohler's redundancy
// rule: after eliminating k variables, any derived row combining more than
// k + 1 original rows is implied by the others and can be dropped.
struct HistRow {
    LinearSystem::Row row;
    std::uint64_t ancestors = 0; // 0 = untracked (rule disabled)
};

inline std::size_t prune_hist(std::vector<HistRow>& rows) {
    std::vector<LinearSystem::Row> plain;
    plain.reserve(rows.size());
    for (auto& h : rows) plain.push_back(std::move(h.row));
    // keep ancestry aligned through canonicalize/dedupe by re-pruning manually
    const std::size_t before = plain.size();
    for (auto& r : plain) canonicalize(r);
    std::vector<HistRow> kept;
    std::map<std::vector<Rat>, std::size_t> best;
    for (std::size_t i = 0; i < plain.size(); ++i) {
        auto& r = plain[i];
        if (all_zero(r) && r.bound >= 0) continue;
        auto it = best.find(r.coeff);
        if (it == best.end()) {
            best.emplace(r.coeff, kept.size());
            kept.push_back(HistRow{std::move(r), rows[i].ancestors});
        } else if (r.bound < kept[it->second].row.bound) {
            kept[it->second].row.bound = std::move(r.bound);
            kept[it->second].ancestors = rows[i].ancestors;
        }
    }
    rows = std::move(kept);
    return before - rows.size();
}

// One elimination step on history-tracked rows. eliminated_so_far counts the
// variables removed before this step.
inline std::size_t eliminate_hist(std::vector<HistRow>& rows, std::vector<std::string>& vars,
                                  int j, std::size_t eliminated_so_far) {
    std::vector<const HistRow*> pos, neg, zero;
    for (const auto& r : rows) {
        const Rat& c = r.row.coeff[static_cast<std::size_t>(j)];
        if (c > 0) pos.push_back(&r);
        else if (c < 0) neg.push_back(&r);
        else zero.push_back(&r);
    }
    if (pos.size() * neg.size() + zero.size() > kRowExplosionLimit)
        throw std::runtime_error("fme_eliminate: intermediate row count would exceed "
                                 + std::to_string(kRowExplosionLimit));

    const std::size_t max_anc = eliminated_so_far + 2; // k+1 after this step
    auto strip = [&](const LinearSystem::Row& r) {
        LinearSystem::Row s;
        s.coeff.reserve(r.coeff.size() - 1);
        for (std::size_t i = 0; i < r.coeff.size(); ++i)
            if (static_cast<int>(i) != j) s.coeff.push_back(r.coeff[i]);
        s.bound = r.bound;
        return s;
    };
    std::vector<HistRow> next;
    next.reserve(zero.size() + pos.size() * neg.size());
    std::size_t kohler_dropped = 0;
    for (const auto* r : zero) next.push_back(HistRow{strip(r->row), r->ancestors});
    for (const auto* p : pos) {
        const Rat& cp = p->row.coeff[static_cast<std::size_t>(j)];
        for (const auto* q : neg) {
            const std::uint64_t anc = p->ancestors | q->ancestors;
            if (p->ancestors != 0 && q->ancestors != 0
                && static_cast<std::size_t>(std::popcount(anc)) > max_anc) {
                ++kohler_dropped;
                continue;
            }
            const Rat cq = -q->row.coeff[static_cast<std::size_t>(j)];
            LinearSystem::Row combined;
            combined.coeff.resize(vars.size());
            for (std::size_t i = 0; i < vars.size(); ++i)
                combined.coeff[i] = cq * p->row.coeff[i] + cp * q->row.coeff[i];
            combined.bound = cq * p->row.bound + cp * q->row.bound;
            next.push_back(HistRow{strip(combined), anc});
        }
    }
    vars.erase(vars.begin() + j);
    rows = std::move(next);
    return kohler_dropped + prune_hist(rows);
}

inline std::vector<HistRow> with_history(const LinearSystem& sys) {
    std::vector<HistRow> rows;
    rows.reserve(sys.rows.size());
    const bool track = sys.rows.size() <= 64;
    for (std::size_t i = 0; i < sys.rows.size(); ++i)
        rows.push_back(HistRow{sys.rows[i], track ? (std::uint64_t{1} << i) : 0});
    return rows;
}

} // namespace detail_fme

// Projects out the listed variables in sequence by pairwise combination of
// opposite-sign rows, with duplicate/dominated rows and Kohler-redundant rows
// pruned after each step.
inline ProjectionResult fme_eliminate_all(const LinearSystem& sys,
                                          const std::vector<std::string>& vars) {
    for (const auto& v : vars)
        if (sys.var_index(v) < 0)
            throw std::invalid_argument("fme_eliminate: unknown variable '" + v + "'");
    ProjectionResult out;
    out.system.variables = sys.variables;
    auto rows = detail_fme::with_history(sys);
    for (const auto& v : vars) {
        int j = 0;
        while (out.system.variables[static_cast<std::size_t>(j)] != v) ++j;
        out.redundant_removed +=
            detail_fme::eliminate_hist(rows, out.system.variables, j, out.eliminated.size());
        out.eliminated.push_back(v);
    }
    out.system.rows.clear();
    for (auto& h : rows) out.system.rows.push_back(std::move(h.row));
    return out;
}

// Single-variable projection.
inline ProjectionResult fme_eliminate(const LinearSystem& sys, const std::string& var) {
    return fme_eliminate_all(sys, {var});
}

struct OptimumResult {
    enum class Status { Value, Unbounded, Infeasible } status;
    Rat value; // meaningful only when status == Value
};

// Exact maximum of objective . x over the system, computed by adjoining the
// objective as a variable and eliminating everything else.
inline OptimumResult max_linear(const LinearSystem& sys, const std::vector<Rat>& objective) {
    if (objective.size() != sys.variables.size())
        throw std::invalid_argument("max_linear: objective width mismatch");
    LinearSystem work = sys;
    std::string sname = "_s";
    while (work.var_index(sname) >= 0) sname += "_";
    work.add_variable(sname);
    {
        std::vector<Rat> row(work.variables.size(), Rat(0));
        row.back() = 1;
        for (std::size_t i = 0; i < objective.size(); ++i) row[i] = -objective[i];
        work.add_row(row, Rat(0)); // s - obj.x <= 0
        for (auto& c : row) c = -c;
        work.add_row(row, Rat(0)); // obj.x - s <= 0
    }
    ProjectionResult proj = fme_eliminate_all(work, sys.variables);

    bool bounded = false, infeasible = false;
    Rat best;
    for (const auto& r : proj.system.rows) {
        const Rat& cs = r.coeff[0];
        if (cs > 0) {
            Rat ub = r.bound / cs;
            if (!bounded || ub < best) { bounded = true; best = ub; }
        } else if (cs == 0 && r.bound < 0) {
            infeasible = true;
        }
    }
    if (infeasible) return {OptimumResult::Status::Infeasible, Rat(0)};
    if (!bounded) return {OptimumResult::Status::Unbounded, Rat(0)};
    // Feasibility along s: lower bounds from negative rows must not cross.
    for (const auto& r : proj.system.rows) {
        const Rat& cs = r.coeff[0];
        if (cs < 0 && best < r.bound / cs) return {OptimumResult::Status::Infeasible, Rat(0)};
    }
    return {OptimumResult::Status::Value, best};
}

// Maximum of a sum of named variables.
inline OptimumResult max_sum_rate(const LinearSystem& sys,
                                  const std::vector<std::string>& objective_vars) {
    std::vector<Rat> obj(sys.variables.size(), Rat(0));
    for (const auto& v : objective_vars) {
        int i = sys.var_index(v);
        if (i < 0) throw std::invalid_argument("max_sum_rate: unknown variable '" + v + "'");
        obj[static_cast<std::size_t>(i)] = 1;
    }
    return max_linear(sys, obj);
}

// The six-row MAC system over (R0, R1, R2) with bounds rationalized from the
// closed-form values, exactly as computed.
inline LinearSystem mac_system_from_channel(const ChannelParams& ch,
                                            const PowerAllocation& alloc) {
    MacBounds mb = mac_sum_rate_closed_form(ch, alloc); // validates symmetry
    LinearSystem sys;
    sys.variables = {"R0", "R1", "R2"};
    auto row = [&](int r0, int r1, int r2, double bound) {
        sys.add_row({Rat(r0), Rat(r1), Rat(r2)}, rat_from_double(bound));
    };
    row(1, 0, 0, mb.r0_rx1);
    row(0, 1, 0, mb.r1_rx1);
    row(1, 1, 0, mb.r01_rx1);
    row(1, 0, 0, mb.r0_rx2);
    row(0, 0, 1, mb.r2_rx2);
    row(1, 0, 1, mb.r02_rx2);
    return sys;
}

// ---- text format ----

inline std::string format_row(const LinearSystem& sys, const LinearSystem::Row& r) {
    std::string out;
    bool any = false;
    for (std::size_t i = 0; i < r.coeff.size(); ++i) {
        if (r.coeff[i] == 0) continue;
        if (any) out += " + ";
        out += rat_to_string(r.coeff[i]) + "*" + sys.variables[i];
        any = true;
    }
    if (!any) out += "0*" + (sys.variables.empty() ? std::string("x") : sys.variables[0]);
    out += " <= " + rat_to_string(r.bound);
    return out;
}

inline std::string format_system(const LinearSystem& sys) {
    std::string out;
    for (const auto& r : sys.rows) out += format_row(sys, r) + "\n";
    return out;
}

// Parses the text format; blank lines and '#' comments are skipped. Errors
// carry 1-based line numbers.
inline LinearSystem parse_linear_system(const std::string& text) {
    LinearSystem sys;
    struct Term { Rat coeff; std::string var; };
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<std::pair<std::vector<Term>, Rat>> parsed;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto fail = [&](const std::string& msg) -> std::runtime_error {
            return std::runtime_error("line " + std::to_string(lineno) + ": " + msg);
        };
        // tokenize on whitespace
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        // split on "<="
        auto le = std::find(tok.begin(), tok.end(), "<=");
        if (le == tok.end()) throw fail("missing '<='");
        if (le + 1 == tok.end()) throw fail("missing bound after '<='");
        if (le + 2 != tok.end()) throw fail("trailing tokens after bound");
        Rat bound;
        try {
            bound = rat_parse(*(le + 1));
        } catch (const std::exception& e) {
            throw fail(e.what());
        }
        std::vector<Term> terms;
        bool expect_term = true;
        for (auto it = tok.begin(); it != le; ++it) {
            if (!expect_term) {
                if (*it != "+") throw fail("expected '+' between terms, got '" + *it + "'");
                expect_term = true;
                continue;
            }
            const auto star = it->find('*');
            if (star == std::string::npos)
                throw fail("expected <coeff>*<var>, got '" + *it + "'");
            const std::string coeff_str = it->substr(0, star);
            const std::string var = it->substr(star + 1);
            if (var.empty()) throw fail("empty variable name in '" + *it + "'");
            Rat coeff;
            try {
                coeff = rat_parse(coeff_str);
            } catch (const std::exception& e) {
                throw fail(e.what());
            }
            terms.push_back(Term{coeff, var});
            expect_term = false;
        }
        if (terms.empty()) throw fail("row has no terms");
        if (expect_term) throw fail("dangling '+'");
        for (const auto& t : terms) sys.add_variable(t.var);
        parsed.emplace_back(std::move(terms), std::move(bound));
    }
    for (auto& [terms, bound] : parsed) {
        std::vector<Rat> coeff(sys.variables.size(), Rat(0));
        for (auto& t : terms)
            coeff[static_cast<std::size_t>(sys.var_index(t.var))] += t.coeff;
        sys.add_row(std::move(coeff), std::move(bound));
    }
    return sys;
}

} // namespace icb
