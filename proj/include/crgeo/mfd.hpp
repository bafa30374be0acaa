#pragma once
// Plain-text manifold specification files (.mfd).
//
// A file declares one structure on one coordinate chart:
//
//     # comment lines start with '#'
//     manifold  para_sasakian_dim3
//     kind      apcm                 # "acm" or "apcm"
//     dimension 3
//     coords    x y z
//     domain    -0.9 0.9             # uniform box, or "domain z -0.5 0.5"
//
//     psi 0 0 = 1                    # sparse tensor entries; missing = 0
//     psi 2 0 = y                    # acm files use phi / xi / eta / g,
//     zeta 2  = 1                    # apcm files use psi / zeta / tau / g
//     tau 0   = -y
//     g 0 0   = y^2                  # one triangle suffices; g is mirrored
//
//     seed 42                        # optional sampling block
//     points 100
//     tol 1e-8
//
//     certify residual.K1 2.2e-16    # optional: residuals measured when the
//                                    # file was emitted by a generator
//
// Expressions use the library grammar (documented in docs/grammar.md):
// numbers, coordinate names, + - * / ^int, and exp/log/sin/cos/sinh/cosh/
// sqrt.  Every parse error carries the line and column of the offending
// token in its message (and the byte offset in ParseError::offset()).

#include <cctype>
#include <cstddef>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "crgeo/acm.hpp"
#include "crgeo/apcm.hpp"

namespace crgeo {

struct SamplingBlock {
    bool has_seed = false;
    unsigned long long seed = 0;
    bool has_points = false;
    int points = 0;
    bool has_tol = false;
    double tol = 0.0;
};

struct Certification {
    std::string id;  // report row id or label key measured at emission time
    double value = 0.0;
};

/// Parsed (or to-be-emitted) manifold file, independent of structure kind:
/// `field11` holds phi/psi, `field` holds xi/zeta, `oneform` holds eta/tau.
struct ManifoldSpec {
    std::string name;
    std::string kind;  // "acm" | "apcm"
    int dimension = 0;
    std::vector<std::string> coords;
    std::vector<double> lo, hi;
    MatE field11;
    VecE field;
    VecE oneform;
    MatE metric;
    SamplingBlock sampling;
    std::vector<Certification> certifications;
};

namespace detail {

struct LineCursor {
    const std::string& text;
    std::size_t line_start = 0;  // byte offset of current line
    int line_no = 0;             // 1-based
};

inline ParseError located(const std::string& msg, const std::string& text, std::size_t offset) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": " + msg,
                      offset);
}

inline bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

inline bool reserved_word(const std::string& s) {
    static const std::set<std::string> reserved = {"exp",  "log",  "sin", "cos",
                                                   "sinh", "cosh", "sqrt"};
    return reserved.count(s) > 0;
}

// One whitespace-separated token and the byte offset where it starts.
struct Token {
    std::string text;
    std::size_t offset = 0;
};

inline std::vector<Token> split_tokens(const std::string& line, std::size_t line_start) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        const std::size_t b = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        out.push_back({line.substr(b, i - b), line_start + b});
    }
    return out;
}

inline int parse_int_token(const Token& t, const std::string& text, const std::string& what) {
    std::size_t k = 0;
    if (k < t.text.size() && (t.text[k] == '+' || t.text[k] == '-')) ++k;
    if (k >= t.text.size()) throw located("expected " + what, text, t.offset);
    for (; k < t.text.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(t.text[k])))
            throw located("expected " + what + ", got '" + t.text + "'", text, t.offset);
    try {
        return std::stoi(t.text);
    } catch (const std::exception&) {
        throw located(what + " out of range: '" + t.text + "'", text, t.offset);
    }
}

inline double parse_num_token(const Token& t, const std::string& text, const std::string& what) {
    const char* begin = t.text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + t.text.size())
        throw located("expected " + what + ", got '" + t.text + "'", text, t.offset);
    return v;
}

}  // namespace detail

/// Parses the text of a .mfd file.  Throws ParseError with "line L, column C"
/// in the message (and the byte offset) on any malformed input.
inline ManifoldSpec parse_mfd(const std::string& text) {
    using detail::located;
    using detail::Token;

    ManifoldSpec spec;
    bool saw_name = false, saw_kind = false, saw_dim = false, saw_coords = false;
    bool saw_domain_all = false;
    std::set<std::string> domain_coords;
    std::set<std::string> tensor_entries;  // "obj i j" duplicates
    bool tensors_ready = false;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::size_t line_end = (eol == std::string::npos) ? text.size() : eol;
        std::string line = text.substr(pos, line_end - pos);
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::vector<Token> tok = detail::split_tokens(line, pos);
        const std::size_t next = (eol == std::string::npos) ? text.size() + 1 : eol + 1;

        if (tok.empty()) {
            pos = next;
            continue;
        }
        const std::string& head = tok[0].text;

        if (head == "manifold") {
            if (saw_name) throw located("duplicate 'manifold' line", text, tok[0].offset);
            if (tok.size() != 2) throw located("'manifold' takes one name", text, tok[0].offset);
            if (!detail::valid_identifier(tok[1].text))
                throw located("invalid manifold name '" + tok[1].text + "'", text,
                              tok[1].offset);
            spec.name = tok[1].text;
            saw_name = true;
        } else if (head == "kind") {
            if (saw_kind) throw located("duplicate 'kind' line", text, tok[0].offset);
            if (tok.size() != 2 || (tok[1].text != "acm" && tok[1].text != "apcm"))
                throw located("'kind' must be 'acm' or 'apcm'", text, tok[0].offset);
            spec.kind = tok[1].text;
            saw_kind = true;
        } else if (head == "dimension") {
            if (saw_dim) throw located("duplicate 'dimension' line", text, tok[0].offset);
            if (tok.size() != 2) throw located("'dimension' takes one integer", text,
                                               tok[0].offset);
            spec.dimension = detail::parse_int_token(tok[1], text, "dimension");
            if (spec.dimension < 1 || spec.dimension > kMaxDim)
                throw located("dimension must be between 1 and " + std::to_string(kMaxDim),
                              text, tok[1].offset);
            saw_dim = true;
        } else if (head == "coords") {
            if (saw_coords) throw located("duplicate 'coords' line", text, tok[0].offset);
            if (!saw_dim)
                throw located("'coords' needs 'dimension' declared first", text,
                              tok[0].offset);
            if (static_cast<int>(tok.size()) - 1 != spec.dimension)
                throw located("expected " + std::to_string(spec.dimension) +
                                  " coordinate names, got " + std::to_string(tok.size() - 1),
                              text, tok[0].offset);
            for (std::size_t k = 1; k < tok.size(); ++k) {
                const std::string& c = tok[k].text;
                if (!detail::valid_identifier(c))
                    throw located("invalid coordinate name '" + c + "'", text, tok[k].offset);
                if (detail::reserved_word(c))
                    throw located("coordinate name '" + c + "' is a reserved function name",
                                  text, tok[k].offset);
                for (const std::string& prev : spec.coords)
                    if (prev == c)
                        throw located("duplicate coordinate name '" + c + "'", text,
                                      tok[k].offset);
                spec.coords.push_back(c);
            }
            saw_coords = true;
        } else if (head == "domain") {
            if (!saw_coords)
                throw located("'domain' needs 'coords' declared first", text, tok[0].offset);
            if (spec.lo.empty()) {
                spec.lo.assign(static_cast<std::size_t>(spec.dimension), -1.0);
                spec.hi.assign(static_cast<std::size_t>(spec.dimension), 1.0);
            }
            if (tok.size() == 3) {
                if (saw_domain_all || !domain_coords.empty())
                    throw located("duplicate 'domain' line", text, tok[0].offset);
                const double lo = detail::parse_num_token(tok[1], text, "domain bound");
                const double hi = detail::parse_num_token(tok[2], text, "domain bound");
                if (!(lo < hi))
                    throw located("domain lower bound must be below upper bound", text,
                                  tok[1].offset);
                for (int i = 0; i < spec.dimension; ++i) {
                    spec.lo[static_cast<std::size_t>(i)] = lo;
                    spec.hi[static_cast<std::size_t>(i)] = hi;
                }
                saw_domain_all = true;
            } else if (tok.size() == 4) {
                if (saw_domain_all)
                    throw located("per-coordinate 'domain' after a uniform one", text,
                                  tok[0].offset);
                int ci = -1;
                for (int i = 0; i < spec.dimension; ++i)
                    if (spec.coords[static_cast<std::size_t>(i)] == tok[1].text) ci = i;
                if (ci < 0)
                    throw located("unknown coordinate '" + tok[1].text + "' in 'domain'",
                                  text, tok[1].offset);
                if (!domain_coords.insert(tok[1].text).second)
                    throw located("duplicate 'domain' for coordinate '" + tok[1].text + "'",
                                  text, tok[1].offset);
                const double lo = detail::parse_num_token(tok[2], text, "domain bound");
                const double hi = detail::parse_num_token(tok[3], text, "domain bound");
                if (!(lo < hi))
                    throw located("domain lower bound must be below upper bound", text,
                                  tok[2].offset);
                spec.lo[static_cast<std::size_t>(ci)] = lo;
                spec.hi[static_cast<std::size_t>(ci)] = hi;
            } else {
                throw located("'domain' takes 'lo hi' or 'coord lo hi'", text, tok[0].offset);
            }
        } else if (head == "seed" || head == "points" || head == "tol") {
            if (tok.size() != 2)
                throw located("'" + head + "' takes one value", text, tok[0].offset);
            if (head == "seed") {
                if (spec.sampling.has_seed)
                    throw located("duplicate 'seed' line", text, tok[0].offset);
                const int v = detail::parse_int_token(tok[1], text, "seed");
                if (v < 0) throw located("seed must be non-negative", text, tok[1].offset);
                spec.sampling.seed = static_cast<unsigned long long>(v);
                spec.sampling.has_seed = true;
            } else if (head == "points") {
                if (spec.sampling.has_points)
                    throw located("duplicate 'points' line", text, tok[0].offset);
                const int v = detail::parse_int_token(tok[1], text, "point count");
                if (v < 1) throw located("points must be positive", text, tok[1].offset);
                spec.sampling.points = v;
                spec.sampling.has_points = true;
            } else {
                if (spec.sampling.has_tol)
                    throw located("duplicate 'tol' line", text, tok[0].offset);
                const double v = detail::parse_num_token(tok[1], text, "tolerance");
                if (!(v > 0.0)) throw located("tol must be positive", text, tok[1].offset);
                spec.sampling.tol = v;
                spec.sampling.has_tol = true;
            }
        } else if (head == "certify") {
            if (tok.size() != 3)
                throw located("'certify' takes a check id and a value", text, tok[0].offset);
            spec.certifications.push_back(
                {tok[1].text, detail::parse_num_token(tok[2], text, "certified value")});
        } else if (head == "phi" || head == "psi" || head == "xi" || head == "zeta" ||
                   head == "eta" || head == "tau" || head == "g") {
            if (!saw_kind || !saw_dim || !saw_coords)
                throw located("'" + head +
                                  "' needs kind, dimension and coords declared first",
                              text, tok[0].offset);
            const bool acm = spec.kind == "acm";
            const std::string want11 = acm ? "phi" : "psi";
            const std::string want10 = acm ? "xi" : "zeta";
            const std::string want01 = acm ? "eta" : "tau";
            if (head != want11 && head != want10 && head != want01 && head != "g")
                throw located("field '" + head + "' is not valid for kind '" + spec.kind +
                                  "' (expected " + want11 + "/" + want10 + "/" + want01 +
                                  "/g)",
                              text, tok[0].offset);
            if (!tensors_ready) {
                const int d = spec.dimension;
                spec.field11 = zero_mat_e(d);
                spec.metric = zero_mat_e(d);
                spec.field = zero_vec_e(d);
                spec.oneform = zero_vec_e(d);
                tensors_ready = true;
            }
            const int rank = (head == want11 || head == "g") ? 2 : 1;
            // head idx... '=' expression
            if (static_cast<int>(tok.size()) < 1 + rank)
                throw located("expected '" + head + (rank == 2 ? " i j = expr'" : " k = expr'"),
                              text, tok[0].offset);
            int idx[2] = {0, 0};
            for (int k = 0; k < rank; ++k) {
                idx[k] = detail::parse_int_token(tok[static_cast<std::size_t>(1 + k)], text,
                                                 "component index");
                if (idx[k] < 0 || idx[k] >= spec.dimension)
                    throw located("component index " + std::to_string(idx[k]) +
                                      " out of range for dimension " +
                                      std::to_string(spec.dimension),
                                  text, tok[static_cast<std::size_t>(1 + k)].offset);
            }
            const std::string key =
                head + " " + std::to_string(idx[0]) + (rank == 2 ? " " + std::to_string(idx[1]) : "");
            if (!tensor_entries.insert(key).second)
                throw located("duplicate entry '" + key + "'", text, tok[0].offset);
            const Token& last_idx = tok[static_cast<std::size_t>(rank)];
            const std::size_t after_idx = last_idx.offset - pos + last_idx.text.size();
            const std::size_t eq_in_line = line.find('=', after_idx);
            if (eq_in_line == std::string::npos)
                throw located("expected '=' after the component indices", text,
                              pos + after_idx);
            for (std::size_t q = after_idx; q < eq_in_line; ++q)
                if (!std::isspace(static_cast<unsigned char>(line[q])))
                    throw located("unexpected text before '='", text, pos + q);
            const std::size_t expr_in_line = eq_in_line + 1;
            const std::size_t expr_off = pos + expr_in_line;
            const std::string expr_text =
                expr_in_line <= line.size() ? line.substr(expr_in_line) : std::string();
            Expr e;
            try {
                e = parse_expr(expr_text, spec.coords);
            } catch (const ParseError& pe) {
                throw located(std::string("in expression: ") + pe.what(), text,
                              expr_off + pe.offset());
            }
            if (head == want11)
                spec.field11[static_cast<std::size_t>(idx[0])][static_cast<std::size_t>(idx[1])] = e;
            else if (head == "g")
                spec.metric[static_cast<std::size_t>(idx[0])][static_cast<std::size_t>(idx[1])] = e;
            else if (head == want10)
                spec.field[static_cast<std::size_t>(idx[0])] = e;
            else
                spec.oneform[static_cast<std::size_t>(idx[0])] = e;
        } else {
            throw located("unknown directive '" + head + "'", text, tok[0].offset);
        }
        pos = next;
    }

    if (!saw_name) throw located("missing 'manifold' line", text, text.size());
    if (!saw_kind) throw located("missing 'kind' line", text, text.size());
    if (!saw_dim) throw located("missing 'dimension' line", text, text.size());
    if (!saw_coords) throw located("missing 'coords' line", text, text.size());
    if (!tensors_ready) {
        const int d = spec.dimension;
        spec.field11 = zero_mat_e(d);
        spec.metric = zero_mat_e(d);
        spec.field = zero_vec_e(d);
        spec.oneform = zero_vec_e(d);
    }
    if (spec.lo.empty()) {
        spec.lo.assign(static_cast<std::size_t>(spec.dimension), -1.0);
        spec.hi.assign(static_cast<std::size_t>(spec.dimension), 1.0);
    }
    // mirror the metric: entries given on one triangle fill the other
    for (int i = 0; i < spec.dimension; ++i)
        for (int j = 0; j < spec.dimension; ++j) {
            const bool has_ij = tensor_entries.count("g " + std::to_string(i) + " " +
                                                     std::to_string(j)) > 0;
            const bool has_ji = tensor_entries.count("g " + std::to_string(j) + " " +
                                                     std::to_string(i)) > 0;
            if (has_ij && !has_ji)
                spec.metric[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                    spec.metric[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    return spec;
}

namespace detail {

inline bool expr_is_zero(const Expr& e) {
    return e.empty() || (e.is_constant() && e.constant_value() == 0.0);
}

inline ChartManifold spec_chart(const ManifoldSpec& spec) {
    ChartManifold c = make_chart(spec.name, spec.coords);
    c.lo = spec.lo;
    c.hi = spec.hi;
    return c;
}

}  // namespace detail

/// Builds the almost contact structure declared by an "acm" spec.
inline ACMStructure to_acm(const ManifoldSpec& spec) {
    if (spec.kind != "acm")
        throw GateError("manifold '" + spec.name + "' has kind '" + spec.kind +
                        "', not 'acm'");
    ACMStructure s;
    s.chart = detail::spec_chart(spec);
    s.phi = spec.field11;
    s.xi = spec.field;
    s.eta = spec.oneform;
    s.g = spec.metric;
    return s;
}

/// Builds the almost paracontact structure declared by an "apcm" spec.
inline APCMStructure to_apcm(const ManifoldSpec& spec) {
    if (spec.kind != "apcm")
        throw GateError("manifold '" + spec.name + "' has kind '" + spec.kind +
                        "', not 'apcm'");
    APCMStructure s;
    s.chart = detail::spec_chart(spec);
    s.psi = spec.field11;
    s.zeta = spec.field;
    s.tau = spec.oneform;
    s.g = spec.metric;
    return s;
}

namespace detail {

inline ManifoldSpec spec_from_parts(const ChartManifold& chart, const std::string& kind,
                                    const MatE& f11, const VecE& f, const VecE& of,
                                    const MatE& g) {
    ManifoldSpec spec;
    spec.name = chart.name;
    spec.kind = kind;
    spec.dimension = chart.dim();
    spec.coords = chart.coords;
    spec.lo = chart.lo;
    spec.hi = chart.hi;
    spec.field11 = f11;
    spec.field = f;
    spec.oneform = of;
    spec.metric = g;
    return spec;
}

}  // namespace detail

inline ManifoldSpec from_acm(const ACMStructure& s) {
    return detail::spec_from_parts(s.chart, "acm", s.phi, s.xi, s.eta, s.g);
}

inline ManifoldSpec from_apcm(const APCMStructure& s) {
    return detail::spec_from_parts(s.chart, "apcm", s.psi, s.zeta, s.tau, s.g);
}

/// Deterministic canonical emission: header, tensor entries in row-major
/// order (metric upper triangle only), sampling block, certifications.
inline std::string emit_mfd(const ManifoldSpec& spec) {
    std::string out;
    out += "# manifold specification\n";
    out += "manifold " + spec.name + "\n";
    out += "kind " + spec.kind + "\n";
    out += "dimension " + std::to_string(spec.dimension) + "\n";
    out += "coords";
    for (const std::string& c : spec.coords) out += " " + c;
    out += "\n";
    bool uniform = true;
    for (std::size_t i = 0; i + 1 < spec.lo.size(); ++i)
        if (spec.lo[i] != spec.lo[i + 1] || spec.hi[i] != spec.hi[i + 1]) uniform = false;
    if (uniform) {
        out += "domain " + format_double(spec.lo[0]) + " " + format_double(spec.hi[0]) + "\n";
    } else {
        for (std::size_t i = 0; i < spec.lo.size(); ++i)
            out += "domain " + spec.coords[i] + " " + format_double(spec.lo[i]) + " " +
                   format_double(spec.hi[i]) + "\n";
    }
    out += "\n";

    const bool acm = spec.kind == "acm";
    const std::string n11 = acm ? "phi" : "psi";
    const std::string n10 = acm ? "xi" : "zeta";
    const std::string n01 = acm ? "eta" : "tau";
    const int d = spec.dimension;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const Expr& e = spec.field11[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (!detail::expr_is_zero(e))
                out += n11 + " " + std::to_string(i) + " " + std::to_string(j) + " = " +
                       to_string(e, spec.coords) + "\n";
        }
    for (int k = 0; k < d; ++k) {
        const Expr& e = spec.field[static_cast<std::size_t>(k)];
        if (!detail::expr_is_zero(e))
            out += n10 + " " + std::to_string(k) + " = " + to_string(e, spec.coords) + "\n";
    }
    for (int j = 0; j < d; ++j) {
        const Expr& e = spec.oneform[static_cast<std::size_t>(j)];
        if (!detail::expr_is_zero(e))
            out += n01 + " " + std::to_string(j) + " = " + to_string(e, spec.coords) + "\n";
    }
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            const Expr& e = spec.metric[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (!detail::expr_is_zero(e))
                out += "g " + std::to_string(i) + " " + std::to_string(j) + " = " +
                       to_string(e, spec.coords) + "\n";
        }

    if (spec.sampling.has_seed || spec.sampling.has_points || spec.sampling.has_tol) {
        out += "\n";
        if (spec.sampling.has_seed)
            out += "seed " + std::to_string(spec.sampling.seed) + "\n";
        if (spec.sampling.has_points)
            out += "points " + std::to_string(spec.sampling.points) + "\n";
        if (spec.sampling.has_tol) out += "tol " + format_double(spec.sampling.tol) + "\n";
    }
    if (!spec.certifications.empty()) {
        out += "\n";
        for (const Certification& c : spec.certifications)
            out += "certify " + c.id + " " + format_double(c.value) + "\n";
    }
    return out;
}

/// Reads and parses a .mfd file.  Throws IoError when the file cannot be
/// read, ParseError (with line/column) when it cannot be parsed.
inline ManifoldSpec load_mfd(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_mfd(buf.str());
}

/// Writes a spec to disk in canonical form.  Throws IoError on failure.
inline void save_mfd(const std::string& path, const ManifoldSpec& spec) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << emit_mfd(spec);
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace crgeo
