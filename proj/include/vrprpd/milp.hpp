#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "instance.hpp"

namespace vrprpd {

/// Serial single-vehicle schedule length plus the farthest depot leg; an
/// upper bound on any optimal makespan.
inline double default_big_m(const Instance& inst) {
    double total = 0.0, far = 0.0;
    for (int c = 1; c <= inst.n; ++c) {
        total += 2.0 * inst.d(0, c) + inst.p(c);
        far = std::max(far, inst.d(0, c));
    }
    return total + far;
}

// Row-name prefix of each constraint family, in model order.
inline const std::vector<std::string>& milp_families() {
    static const std::vector<std::string> names{
        "service",  "depot",    "anchor",   "flow",     "noloop",  "visit",   "droptime", "picktime",
        "prec",     "depart",   "wait",     "prop",     "capinit", "capge",   "caple",    "capdrop",
        "cappick",  "mtz",      "ret",      "makespan"};
    return names;
}

struct MilpModel {
    std::string text;
    std::map<std::string, int> family_rows;  // rows written per family prefix
    int rows = 0;
};

namespace detail {

class LpWriter {
public:
    using Term = std::pair<double, std::string>;

    void row(const std::string& family, const std::string& suffix, const std::vector<Term>& terms,
             const std::string& sense, double rhs) {
        ++model.family_rows[family];
        ++model.rows;
        std::string line = " " + family + "_" + suffix + ":";
        int on_line = 0;
        bool first = true;
        for (const auto& [coef, var] : terms) {
            if (coef == 0.0) continue;
            if (on_line == 8) {
                body_ << line << '\n';
                line = "   ";
                on_line = 0;
            }
            line += first ? (coef < 0 ? " -" : " ") : (coef < 0 ? " - " : " + ");
            const double mag = coef < 0 ? -coef : coef;
            if (mag != 1.0) line += format_number(mag) + " ";
            line += var;
            first = false;
            ++on_line;
        }
        if (first) line += " 0 " + terms.front().second;
        body_ << line << ' ' << sense << ' ' << format_number(rhs) << '\n';
    }

    std::string body() const { return body_.str(); }

    MilpModel model;

private:
    std::ostringstream body_;
};

inline std::string var(const std::string& base, std::initializer_list<int> idx) {
    std::string s = base;
    for (int i : idx) s += "_" + std::to_string(i);
    return s;
}

}  // namespace detail

/// The arc-based model in CPLEX LP syntax. Locations are 0 (depot) to n,
/// vehicles 0 to m-1. Row names carry the family prefix from
/// milp_families(). Time propagation and the capacity links are written for
/// arcs into customers only: the depot has t_0_v = 0, so return arcs are
/// handled by the return-time rows.
inline MilpModel export_milp(const Instance& inst, double big_m) {
    using detail::var;
    const int n = inst.n, m = inst.m(), k = inst.k();
    const double M = big_m;
    detail::LpWriter w;

    for (int c = 1; c <= n; ++c) {
        std::vector<detail::LpWriter::Term> d, p;
        for (int v = 0; v < m; ++v) {
            d.emplace_back(1.0, var("del", {c, v}));
            p.emplace_back(1.0, var("pi", {c, v}));
        }
        w.row("service", "d_" + std::to_string(c), d, "=", 1);
        w.row("service", "p_" + std::to_string(c), p, "=", 1);
    }
    for (int v = 0; v < m; ++v) {
        std::vector<detail::LpWriter::Term> out, in;
        for (int c = 1; c <= n; ++c) {
            out.emplace_back(1.0, var("x", {0, c, v}));
            in.emplace_back(1.0, var("x", {c, 0, v}));
        }
        w.row("depot", "out_" + std::to_string(v), out, "=", 1);
        w.row("depot", "in_" + std::to_string(v), in, "=", 1);
    }
    for (int v = 0; v < m; ++v) {
        w.row("anchor", "t_" + std::to_string(v), {{1.0, var("t", {0, v})}}, "=", 0);
        w.row("anchor", "tdep_" + std::to_string(v), {{1.0, var("tdep", {0, v})}}, "=", 0);
    }
    for (int c = 1; c <= n; ++c) {
        for (int v = 0; v < m; ++v) {
            std::vector<detail::LpWriter::Term> in, out;
            for (int i = 0; i <= n; ++i) {
                in.emplace_back(1.0, var("x", {i, c, v}));
                out.emplace_back(1.0, var("x", {c, i, v}));
            }
            in.emplace_back(-1.0, var("y", {c, v}));
            out.emplace_back(-1.0, var("y", {c, v}));
            const std::string sfx = std::to_string(c) + "_" + std::to_string(v);
            w.row("flow", "in_" + sfx, in, "=", 0);
            w.row("flow", "out_" + sfx, out, "=", 0);
        }
    }
    for (int i = 0; i <= n; ++i)
        for (int v = 0; v < m; ++v)
            w.row("noloop", std::to_string(i) + "_" + std::to_string(v), {{1.0, var("x", {i, i, v})}}, "=", 0);
    for (int c = 1; c <= n; ++c) {
        for (int v = 0; v < m; ++v) {
            const std::string sfx = std::to_string(c) + "_" + std::to_string(v);
            w.row("visit", "d_" + sfx, {{1.0, var("del", {c, v})}, {-1.0, var("y", {c, v})}}, "<=", 0);
            w.row("visit", "p_" + sfx, {{1.0, var("pi", {c, v})}, {-1.0, var("y", {c, v})}}, "<=", 0);
        }
    }
    for (int c = 1; c <= n; ++c) {
        for (int v = 0; v < m; ++v) {
            const std::string sfx = std::to_string(c) + "_" + std::to_string(v);
            const std::string t = var("t", {c, v}), dl = var("del", {c, v}), td = "Tdrop_" + std::to_string(c);
            w.row("droptime", "lo_" + sfx, {{1.0, t}, {-1.0, td}, {M, dl}}, "<=", M);
            w.row("droptime", "hi_" + sfx, {{1.0, td}, {-1.0, t}, {M, dl}}, "<=", M);
        }
    }
    for (int c = 1; c <= n; ++c) {
        for (int v = 0; v < m; ++v) {
            const std::string sfx = std::to_string(c) + "_" + std::to_string(v);
            const std::string t = var("tdep", {c, v}), pk = var("pi", {c, v}), tp = "Tpick_" + std::to_string(c);
            w.row("picktime", "lo_" + sfx, {{1.0, t}, {-1.0, tp}, {M, pk}}, "<=", M);
            w.row("picktime", "hi_" + sfx, {{1.0, tp}, {-1.0, t}, {M, pk}}, "<=", M);
        }
    }
    for (int c = 1; c <= n; ++c)
        w.row("prec", std::to_string(c), {{1.0, "Tpick_" + std::to_string(c)}, {-1.0, "Tdrop_" + std::to_string(c)}},
              ">=", inst.p(c));
    for (int c = 1; c <= n; ++c)
        for (int v = 0; v < m; ++v)
            w.row("depart", std::to_string(c) + "_" + std::to_string(v),
                  {{1.0, var("tdep", {c, v})}, {-1.0, var("t", {c, v})}}, ">=", 0);
    for (int c = 1; c <= n; ++c)
        for (int v = 0; v < m; ++v)
            w.row("wait", std::to_string(c) + "_" + std::to_string(v),
                  {{1.0, var("tdep", {c, v})},
                   {-1.0, var("t", {c, v})},
                   {-inst.p(c), var("del", {c, v})},
                   {-inst.p(c), var("pi", {c, v})}},
                  ">=", -inst.p(c));
    for (int i = 0; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int v = 0; v < m; ++v)
                w.row("prop", std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(v),
                      {{1.0, var("t", {j, v})}, {-1.0, var("tdep", {i, v})}, {-M, var("x", {i, j, v})}}, ">=",
                      inst.d(i, j) - M);
    for (int v = 0; v < m; ++v) w.row("capinit", std::to_string(v), {{1.0, var("q", {0, v})}}, "=", k);
    for (int i = 0; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            for (int v = 0; v < m; ++v) {
                const std::string sfx = std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(v);
                const std::string qi = var("q", {i, v}), qj = var("q", {j, v}), dj = var("del", {j, v}),
                                  pj = var("pi", {j, v}), x = var("x", {i, j, v});
                w.row("capge", sfx, {{1.0, qj}, {-1.0, qi}, {1.0, dj}, {-1.0, pj}, {-M, x}}, ">=", -M);
                w.row("caple", sfx, {{1.0, qj}, {-1.0, qi}, {1.0, dj}, {-1.0, pj}, {M, x}}, "<=", M);
                w.row("capdrop", sfx, {{1.0, qi}, {-1.0, dj}, {-M, x}}, ">=", -M);
                w.row("cappick", sfx, {{1.0, qi}, {1.0, pj}, {M, x}}, "<=", k + M);
            }
        }
    }
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int v = 0; v < m; ++v)
                if (i != j)
                    w.row("mtz", std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(v),
                          {{1.0, var("u", {i, v})}, {-1.0, var("u", {j, v})}, {static_cast<double>(n), var("x", {i, j, v})}},
                          "<=", n - 1);
    for (int c = 1; c <= n; ++c)
        for (int v = 0; v < m; ++v)
            w.row("ret", std::to_string(c) + "_" + std::to_string(v),
                  {{1.0, var("tret", {v})}, {-1.0, var("tdep", {c, v})}, {-M, var("x", {c, 0, v})}}, ">=",
                  inst.d(c, 0) - M);
    for (int v = 0; v < m; ++v) w.row("makespan", std::to_string(v), {{1.0, "T"}, {-1.0, var("tret", {v})}}, ">=", 0);

    std::ostringstream out;
    out << "\\ VRP-RPD arc model: " << inst.label << " (n=" << n << ", m=" << m << ", k=" << k
        << ", M=" << format_number(M) << ")\n";
    out << "Minimize\n obj: T\nSubject To\n" << w.body();
    out << "Bounds\n";
    for (int i = 0; i <= n; ++i)
        for (int v = 0; v < m; ++v) out << " 0 <= " << var("q", {i, v}) << " <= " << k << '\n';
    for (int c = 1; c <= n; ++c)
        for (int v = 0; v < m; ++v) out << " 1 <= " << var("u", {c, v}) << " <= " << n << '\n';
    out << "Binaries\n";
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (int v = 0; v < m; ++v) out << ' ' << var("x", {i, j, v}) << '\n';
    for (int c = 1; c <= n; ++c)
        for (int v = 0; v < m; ++v)
            out << ' ' << var("y", {c, v}) << ' ' << var("del", {c, v}) << ' ' << var("pi", {c, v}) << '\n';
    out << "Generals\n";
    for (int c = 1; c <= n; ++c)
        for (int v = 0; v < m; ++v) out << ' ' << var("u", {c, v}) << '\n';
    out << "End\n";

    w.model.text = out.str();
    return w.model;
}

inline MilpModel export_milp(const Instance& inst) { return export_milp(inst, default_big_m(inst)); }

}  // namespace vrprpd
