#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "functor.hpp"
#include "koszul.hpp"

namespace qpnkit {

using Json = nlohmann::json;

/* The session language: named declarations (field, ring, free, matrix,
 * module, map, target, sections), one per line, followed by commands that
 * report on them.  Everything is parsed and name-checked up front; running a
 * parsed script emits one JSON object per command. */

namespace script_detail {

struct Token {
    enum class Kind { ident, number, punct };
    Kind kind;
    std::string text;
    int line = 0;
    int col = 0;
};

inline std::vector<Token> lex_line(const std::string& text, int line)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char ch = text[i];
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            ++i;
            continue;
        }
        if (ch == '#')
            break;
        const int col = static_cast<int>(i) + 1;
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            out.push_back({Token::Kind::ident, text.substr(i, j - i), line, col});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            out.push_back({Token::Kind::number, text.substr(i, j - i), line, col});
            i = j;
            continue;
        }
        if (ch == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            out.push_back({Token::Kind::punct, "->", line, col});
            i += 2;
            continue;
        }
        if (ch == '.' && i + 1 < text.size() && text[i + 1] == '.') {
            out.push_back({Token::Kind::punct, "..", line, col});
            i += 2;
            continue;
        }
        if (std::string("()[],:+-*^/=").find(ch) != std::string::npos) {
            out.push_back({Token::Kind::punct, std::string(1, ch), line, col});
            ++i;
            continue;
        }
        throw ParseError(line, col, "a token");
    }
    return out;
}

class Cursor {
public:
    Cursor(std::vector<Token> toks, int line) : toks_(std::move(toks)), line_(line) {}

    bool at_end() const { return i_ >= toks_.size(); }

    const Token& peek() const
    {
        if (at_end())
            throw ParseError(line_, end_col(), "more of the statement");
        return toks_[i_];
    }

    Token take()
    {
        const Token& t = peek();
        ++i_;
        return t;
    }

    bool accept_punct(const std::string& p)
    {
        if (at_end() || toks_[i_].kind != Token::Kind::punct || toks_[i_].text != p)
            return false;
        ++i_;
        return true;
    }

    Token expect_punct(const std::string& p)
    {
        if (at_end() || toks_[i_].kind != Token::Kind::punct || toks_[i_].text != p)
            throw ParseError(line_, next_col(), "'" + p + "'");
        return toks_[i_++];
    }

    Token expect_ident(const std::string& what)
    {
        if (at_end() || toks_[i_].kind != Token::Kind::ident)
            throw ParseError(line_, next_col(), what);
        return toks_[i_++];
    }

    Token expect_number(const std::string& what)
    {
        if (at_end() || toks_[i_].kind != Token::Kind::number)
            throw ParseError(line_, next_col(), what);
        return toks_[i_++];
    }

    void expect_end()
    {
        if (!at_end())
            throw ParseError(line_, next_col(), "end of statement");
    }

    int line() const { return line_; }

    int next_col() const { return at_end() ? end_col() : toks_[i_].col; }

private:
    int end_col() const
    {
        if (toks_.empty())
            return 1;
        const Token& last = toks_.back();
        return last.col + static_cast<int>(last.text.size());
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
    int line_;
};

inline int parse_int(Cursor& c, const std::string& what)
{
    bool neg = c.accept_punct("-");
    Token t = c.expect_number(what);
    if (t.text.size() > 9)
        throw ParseError(t.line, t.col, "a smaller integer");
    int v = std::stoi(t.text);
    return neg ? -v : v;
}

/* Scalar literal: optionally signed integer, or integer/integer. */
template <Field F>
typename F::Elt parse_scalar(const F& f, Cursor& c)
{
    bool neg = c.accept_punct("-");
    Token t = c.expect_number("a scalar");
    if (t.text.size() > 18)
        throw ParseError(t.line, t.col, "a smaller scalar");
    typename F::Elt v = f.from_int(std::stoll(t.text));
    if (c.accept_punct("/")) {
        Token d = c.expect_number("a denominator");
        if (d.text.size() > 18)
            throw ParseError(d.line, d.col, "a smaller denominator");
        typename F::Elt den = f.from_int(std::stoll(d.text));
        if (f.is_zero(den))
            throw ParseError(d.line, d.col, "a nonzero denominator");
        v = f.div(v, den);
    }
    return neg ? f.neg(v) : v;
}

inline std::size_t parse_var_index(const Token& t, char letter, std::size_t nvars)
{
    const std::string want = std::string(1, letter) + "0.." + std::string(1, letter) +
                             std::to_string(nvars == 0 ? 0 : nvars - 1);
    if (t.text.size() < 2 || t.text[0] != letter)
        throw ParseError(t.line, t.col, "a variable " + want);
    for (std::size_t i = 1; i < t.text.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t.text[i])))
            throw ParseError(t.line, t.col, "a variable " + want);
    if (t.text.size() > 7)
        throw ParseError(t.line, t.col, "a variable " + want);
    std::size_t idx = std::stoul(t.text.substr(1));
    if (idx >= nvars)
        throw ParseError(t.line, t.col, "a variable " + want);
    return idx;
}

inline int parse_exponent(Cursor& c)
{
    Token t = c.expect_number("an exponent");
    if (t.text.size() > 4)
        throw ParseError(t.line, t.col, "a smaller exponent");
    return std::stoi(t.text);
}

/* Homogeneous polynomial in x0..x{nvars-1}: sum of terms, each a scalar
 * and/or '*'-joined powers of variables.  All nonzero terms must have one
 * total degree; `want_deg`, when given, pins it and `where` names the slot
 * for the error message. */
template <Field F>
HomPoly<F> parse_xpoly(const F& f, Cursor& c, std::size_t nvars, std::optional<int> want_deg,
                       const std::string& where)
{
    struct Term {
        typename F::Elt coeff;
        Monomial mono;
        int line, col;
    };
    std::vector<Term> terms;
    bool neg = c.accept_punct("-");
    for (;;) {
        const Token start = c.peek();
        typename F::Elt coeff = f.one();
        Monomial mono = mono_one(nvars);
        bool first = true;
        for (;;) {
            if (!first && !c.accept_punct("*"))
                break;
            const Token& atom = c.peek();
            if (atom.kind == Token::Kind::number) {
                if (!first)
                    throw ParseError(atom.line, atom.col, "a variable factor");
                typename F::Elt s = parse_scalar(f, c);
                coeff = f.mul(coeff, s);
            } else {
                Token v = c.expect_ident("a variable or scalar");
                std::size_t idx = parse_var_index(v, 'x', nvars);
                int e = c.accept_punct("^") ? parse_exponent(c) : 1;
                mono.e[idx] += static_cast<std::uint32_t>(e);
            }
            first = false;
        }
        if (first)
            throw ParseError(start.line, start.col, "a term");
        if (neg)
            coeff = f.neg(coeff);
        terms.push_back({coeff, std::move(mono), start.line, start.col});
        if (c.accept_punct("+"))
            neg = false;
        else if (c.accept_punct("-"))
            neg = true;
        else
            break;
    }

    std::optional<int> deg = want_deg;
    for (const Term& t : terms) {
        if (f.is_zero(t.coeff))
            continue;
        if (!deg)
            deg = t.mono.degree();
        else if (t.mono.degree() != *deg)
            throw ParseError(t.line, t.col, "a homogeneous entry of degree " +
                                                std::to_string(*deg) + where);
    }
    HomPoly<F> p = hp_zero<F>(nvars, deg.value_or(0));
    for (const Term& t : terms)
        hp_add_term(f, p, t.mono, t.coeff);
    return p;
}

/* Univariate polynomial in t, as a coefficient vector. */
template <Field F>
TElt<F> parse_tpoly(const F& f, Cursor& c)
{
    std::vector<typename F::Elt> coeffs;
    auto add_at = [&](std::size_t k, const typename F::Elt& v) {
        if (coeffs.size() <= k)
            coeffs.resize(k + 1, f.zero());
        coeffs[k] = f.add(coeffs[k], v);
    };
    bool neg = c.accept_punct("-");
    for (;;) {
        const Token start = c.peek();
        typename F::Elt coeff = f.one();
        std::size_t power = 0;
        bool first = true;
        for (;;) {
            if (!first && !c.accept_punct("*"))
                break;
            const Token& atom = c.peek();
            if (atom.kind == Token::Kind::number) {
                if (!first)
                    throw ParseError(atom.line, atom.col, "the variable t");
                coeff = f.mul(coeff, parse_scalar(f, c));
            } else {
                Token v = c.expect_ident("t or a scalar");
                if (v.text != "t")
                    throw ParseError(v.line, v.col, "the variable t");
                int e = c.accept_punct("^") ? parse_exponent(c) : 1;
                power += static_cast<std::size_t>(e);
            }
            first = false;
        }
        if (first)
            throw ParseError(start.line, start.col, "a term");
        add_at(power, neg ? f.neg(coeff) : coeff);
        if (c.accept_punct("+"))
            neg = false;
        else if (c.accept_punct("-"))
            neg = true;
        else
            break;
    }
    while (!coeffs.empty() && f.is_zero(coeffs.back()))
        coeffs.pop_back();
    return TElt<F>{std::move(coeffs)};
}

/* Element literal in the syntax of the given target ring. */
template <Field F>
TElt<F> parse_elem(const TargetRing<F>& r, Cursor& c)
{
    switch (r.kind) {
    case TargetKind::univariate:
        return parse_tpoly(r.coeff, c);
    case TargetKind::field:
        return TElt<F>{{parse_scalar(r.coeff, c)}};
    case TargetKind::findim: {
        c.expect_punct("(");
        TElt<F> e;
        e.c.push_back(parse_scalar(r.coeff, c));
        while (c.accept_punct(","))
            e.c.push_back(parse_scalar(r.coeff, c));
        Token close = c.expect_punct(")");
        if (e.c.size() != r.dim)
            throw ParseError(close.line, close.col,
                             std::to_string(r.dim) + " coordinates");
        return e;
    }
    }
    throw ParseError(c.line(), c.next_col(), "an element");
}

}  // namespace script_detail

/* One parsed command, with references resolved against the declarations. */
template <Field F>
struct Command {
    std::string verb;
    int line = 0;
    std::vector<std::string> names;
    std::vector<int> nums;
    std::vector<HomPoly<F>> polys;
    std::vector<TElt<F>> elems;            // base-change / descend images
    std::optional<TElt<F>> quot;           // descend quotient element
    std::vector<std::vector<TElt<F>>> rows;  // relation matrix literal
};

template <Field F>
struct Session {
    F field;
    std::string field_name;

    std::map<std::string, std::string> kinds;  // one namespace for all names
    std::map<std::string, std::size_t> rings;
    std::map<std::string, std::pair<std::string, GradedFree>> frees;  // ring, twists
    std::map<std::string, GradedModuleMap<F>> matrices;
    std::map<std::string, FPGradedModule<F>> modules;
    std::map<std::string, GradedModuleMap<F>> module_maps;
    std::map<std::string, TargetRing<F>> targets;
    std::map<std::string, SectionData<F>> sections;
    std::vector<Command<F>> commands;

    explicit Session(F f) : field(std::move(f)) {}
};

struct Script {
    std::variant<std::monostate, Session<Rationals>, Session<PrimeField>> session;
    std::vector<std::string> lines;  // canonical statements, in order
};

inline std::string render_script(const Script& s)
{
    std::string out;
    for (const std::string& line : s.lines) {
        out += line;
        out += '\n';
    }
    return out;
}

struct RunOptions {
    std::optional<DegreeWindow> window;    // overrides hilbert/exact windows
    std::optional<std::uint64_t> seed;     // reserved; every command is deterministic
};

namespace script_detail {

template <Field F>
void declare(Session<F>& s, const Token& name_tok, const std::string& kind)
{
    const std::string& name = name_tok.text;
    if (!name.empty() && name[0] == '_')
        throw ParseError(name_tok.line, name_tok.col, "a name not starting with '_'");
    if (s.kinds.count(name))
        throw NameError(name_tok.line, name, "name '" + name + "' is already bound");
    s.kinds[name] = kind;
}

template <Field F>
std::string expect_kind(Session<F>& s, const Token& name_tok, const std::string& kind)
{
    auto it = s.kinds.find(name_tok.text);
    if (it == s.kinds.end())
        throw NameError(name_tok.line, name_tok.text, "undeclared name '" + name_tok.text + "'");
    if (it->second != kind)
        throw NameError(name_tok.line, name_tok.text,
                        "'" + name_tok.text + "' is a " + it->second + ", expected a " + kind);
    return name_tok.text;
}

/* A name that may refer to a free module or a cokernel module. */
template <Field F>
std::string expect_module_like(Session<F>& s, const Token& name_tok)
{
    auto it = s.kinds.find(name_tok.text);
    if (it == s.kinds.end())
        throw NameError(name_tok.line, name_tok.text, "undeclared name '" + name_tok.text + "'");
    if (it->second != "module" && it->second != "free")
        throw NameError(name_tok.line, name_tok.text,
                        "'" + name_tok.text + "' is a " + it->second + ", expected a module");
    return name_tok.text;
}

template <Field F>
FPGradedModule<F> module_like(const Session<F>& s, const std::string& name)
{
    auto it = s.modules.find(name);
    if (it != s.modules.end())
        return it->second;
    const auto& fr = s.frees.at(name);
    return free_module<F>(s.rings.at(fr.first), fr.second);
}

template <Field F>
std::string render_elem(const TargetRing<F>& r, const TElt<F>& e)
{
    return t_to_string(r, e);
}

template <Field F>
std::string render_elem_list(const TargetRing<F>& r, const std::vector<TElt<F>>& es)
{
    std::string out = "(";
    for (std::size_t i = 0; i < es.size(); ++i) {
        if (i)
            out += ", ";
        out += render_elem(r, es[i]);
    }
    return out + ")";
}

template <Field F>
std::string render_rows(const TargetRing<F>& r, const std::vector<std::vector<TElt<F>>>& rows)
{
    std::string out = "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i)
            out += ", ";
        out += "[";
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            if (j)
                out += ", ";
            out += render_elem(r, rows[i][j]);
        }
        out += "]";
    }
    return out + "]";
}

/* Matrix literal [[entry, ...], ...]; the callback parses and renders one
 * entry at a fixed (row, col). */
template <class EntryFn>
std::string parse_matrix_literal(Cursor& c, std::size_t rows, std::size_t cols, EntryFn&& entry)
{
    std::string canon = "[";
    Token open = c.expect_punct("[");
    for (std::size_t i = 0; i < rows; ++i) {
        if (i) {
            c.expect_punct(",");
            canon += ", ";
        }
        c.expect_punct("[");
        canon += "[";
        for (std::size_t j = 0; j < cols; ++j) {
            if (j) {
                c.expect_punct(",");
                canon += ", ";
            }
            canon += entry(i, j);
        }
        c.expect_punct("]");
        canon += "]";
    }
    Token close = c.expect_punct("]");
    (void)open;
    (void)close;
    return canon + "]";
}

template <Field F>
void parse_declaration(Session<F>& s, Cursor& c, const std::string& verb,
                       std::vector<std::string>& lines)
{
    const F& f = s.field;

    if (verb == "ring") {
        Token name = c.expect_ident("a ring name");
        c.expect_punct("=");
        Token fld = c.expect_ident("the field name");
        expect_kind(s, fld, "field");
        c.expect_punct("[");
        Token first = c.expect_ident("x0");
        if (first.text != "x0")
            throw ParseError(first.line, first.col, "x0");
        c.expect_punct("..");
        Token last = c.expect_ident("the last variable");
        std::size_t nvars = parse_var_index(last, 'x', 10000) + 1;
        c.expect_punct("]");
        c.expect_end();
        declare(s, name, "ring");
        s.rings[name.text] = nvars;
        lines.push_back("ring " + name.text + " = " + fld.text + "[x0..x" +
                        std::to_string(nvars - 1) + "]");
        return;
    }

    if (verb == "free") {
        Token name = c.expect_ident("a module name");
        c.expect_punct("=");
        std::string ring;
        GradedFree twists;
        std::string canon;
        do {
            Token r = c.expect_ident("a ring name");
            expect_kind(s, r, "ring");
            if (ring.empty())
                ring = r.text;
            else if (ring != r.text)
                throw NameError(r.line, r.text, "summands must share one ring");
            c.expect_punct("(");
            int d = parse_int(c, "a twist");
            c.expect_punct(")");
            twists.twists.push_back(d);
            if (!canon.empty())
                canon += " + ";
            canon += ring + "(" + std::to_string(d) + ")";
        } while (c.accept_punct("+"));
        c.expect_end();
        declare(s, name, "free");
        s.frees[name.text] = {ring, twists};
        lines.push_back("free " + name.text + " = " + canon);
        return;
    }

    if (verb == "matrix" || verb == "map") {
        const bool between_modules = verb == "map";
        Token name = c.expect_ident("a name");
        c.expect_punct(":");
        Token src = c.expect_ident("a source name");
        c.expect_punct("->");
        Token dst = c.expect_ident("a target name");
        c.expect_punct("=");

        FPGradedModule<F> sm, dm;
        if (between_modules) {
            sm = module_like(s, expect_module_like(s, src));
            dm = module_like(s, expect_module_like(s, dst));
        } else {
            expect_kind(s, src, "free");
            expect_kind(s, dst, "free");
            const auto& a = s.frees.at(src.text);
            const auto& b = s.frees.at(dst.text);
            if (a.first != b.first)
                throw NameError(dst.line, dst.text, "source and target are over different rings");
            sm = free_module<F>(s.rings.at(a.first), a.second);
            dm = free_module<F>(s.rings.at(b.first), b.second);
        }
        if (sm.nvars != dm.nvars)
            throw NameError(dst.line, dst.text, "source and target are over different rings");

        GradedMatrix<F> m = gm_zero<F>(sm.nvars, sm.gens, dm.gens);
        std::string body = parse_matrix_literal(
            c, dm.gens.rank(), sm.gens.rank(), [&](std::size_t i, std::size_t j) {
                const int deg = dm.gens.twists[i] - sm.gens.twists[j];
                const std::string where =
                    " at row " + std::to_string(i) + ", col " + std::to_string(j);
                HomPoly<F> p = parse_xpoly(f, c, sm.nvars, deg, where);
                m.at(i, j) = p;
                return hp_to_string(f, p);
            });
        c.expect_end();
        declare(s, name, between_modules ? "map" : "matrix");
        auto built = make_map(f, std::move(sm), std::move(dm), std::move(m));
        if (between_modules)
            s.module_maps.emplace(name.text, std::move(built));
        else
            s.matrices.emplace(name.text, std::move(built));
        lines.push_back(verb + " " + name.text + " : " + src.text + " -> " + dst.text + " = " +
                        body);
        return;
    }

    if (verb == "module") {
        Token name = c.expect_ident("a module name");
        c.expect_punct("=");
        Token kw = c.expect_ident("coker");
        if (kw.text != "coker")
            throw ParseError(kw.line, kw.col, "coker");
        Token mat = c.expect_ident("a matrix name");
        expect_kind(s, mat, "matrix");
        c.expect_end();
        declare(s, name, "module");
        s.modules.emplace(name.text, cokernel(f, s.matrices.at(mat.text)));
        lines.push_back("module " + name.text + " = coker " + mat.text);
        return;
    }

    if (verb == "target") {
        Token name = c.expect_ident("a target name");
        c.expect_punct("=");
        Token head = c.expect_ident("the field name or algebra(...)");
        if (head.text == "algebra") {
            c.expect_punct("(");
            Token dt = c.expect_number("a dimension");
            if (dt.text.size() > 2)
                throw ParseError(dt.line, dt.col, "a smaller dimension");
            std::uint32_t dim = static_cast<std::uint32_t>(std::stoul(dt.text));
            if (dim == 0)
                throw ParseError(dt.line, dt.col, "a positive dimension");
            const std::size_t want =
                static_cast<std::size_t>(dim) * dim * dim + dim;  // structure then unit
            std::vector<typename F::Elt> consts;
            std::string canon = "algebra(" + std::to_string(dim);
            for (std::size_t i = 0; i < want; ++i) {
                c.expect_punct(",");
                consts.push_back(parse_scalar(f, c));
                canon += ", " + f.to_string(consts.back());
            }
            Token close = c.expect_punct(")");
            (void)close;
            c.expect_end();
            std::vector<typename F::Elt> structure(consts.begin(),
                                                   consts.begin() + static_cast<std::ptrdiff_t>(
                                                                        want - dim));
            std::vector<typename F::Elt> unit(consts.end() - static_cast<std::ptrdiff_t>(dim),
                                              consts.end());
            declare(s, name, "target");
            s.targets.emplace(name.text,
                              make_findim_target(f, dim, std::move(structure), std::move(unit)));
            lines.push_back("target " + name.text + " = " + canon + ")");
            return;
        }
        expect_kind(s, head, "field");
        if (c.accept_punct("[")) {
            Token var = c.expect_ident("t");
            if (var.text != "t")
                throw ParseError(var.line, var.col, "t");
            c.expect_punct("]");
            c.expect_end();
            declare(s, name, "target");
            s.targets.emplace(name.text, make_univariate_target(f));
            lines.push_back("target " + name.text + " = " + head.text + "[t]");
            return;
        }
        c.expect_end();
        declare(s, name, "target");
        s.targets.emplace(name.text, make_field_target(f));
        lines.push_back("target " + name.text + " = " + head.text);
        return;
    }

    if (verb == "sections") {
        Token name = c.expect_ident("a sections name");
        Token over = c.expect_ident("over");
        if (over.text != "over")
            throw ParseError(over.line, over.col, "over");
        Token tgt = c.expect_ident("a target name");
        expect_kind(s, tgt, "target");
        const TargetRing<F>& r = s.targets.at(tgt.text);
        c.expect_punct("=");
        c.expect_punct("(");
        std::vector<TElt<F>> elems;
        elems.push_back(parse_elem(r, c));
        while (c.accept_punct(","))
            elems.push_back(parse_elem(r, c));
        c.expect_punct(")");
        c.expect_end();
        declare(s, name, "sections");
        std::string canon = render_elem_list(r, elems);
        s.sections.emplace(name.text, make_sections(r, std::move(elems)));
        lines.push_back("sections " + name.text + " over " + tgt.text + " = " + canon);
        return;
    }

    throw ParseError(c.line(), 1, "a declaration or command keyword");
}

template <Field F>
void parse_command(Session<F>& s, Cursor& c, const std::string& verb,
                   std::vector<std::string>& lines)
{
    const F& f = s.field;
    Command<F> cmd;
    cmd.verb = verb;
    cmd.line = c.line();
    std::string canon = verb;

    auto take_int = [&](const char* what) {
        int v = parse_int(c, what);
        cmd.nums.push_back(v);
        canon += " " + std::to_string(v);
        return v;
    };
    auto take_name = [&](const std::string& n) {
        cmd.names.push_back(n);
        canon += " " + n;
    };

    if (verb == "monomials" || verb == "trunc") {
        take_int("a variable index bound");
        take_int(verb == "trunc" ? "a truncation degree" : "a monomial degree");
        if (verb == "trunc") {
            take_int("a twist");
            if (cmd.nums[0] < 0)
                throw ParseError(cmd.line, 1, "a nonnegative n");
            // later `exact` lines may consume the bound presentation
            s.kinds["_trunc_rel"] = "matrix";
            s.kinds["_trunc_inc"] = "matrix";
        } else if (cmd.nums[0] < 0) {
            throw ParseError(cmd.line, 1, "a nonnegative n");
        }
    } else if (verb == "hilbert") {
        take_name(expect_module_like(s, c.expect_ident("a module name")));
        take_int("a window low edge");
        take_int("a window high edge");
    } else if (verb == "exact") {
        while (!c.at_end() && c.peek().kind == Token::Kind::ident) {
            Token m = c.expect_ident("a matrix name");
            if (m.text[0] != '_')
                expect_kind(s, m, "matrix");
            else if (!s.kinds.count(m.text))
                throw NameError(m.line, m.text, "no truncation bound yet for '" + m.text + "'");
            take_name(m.text);
        }
        if (cmd.names.size() < 2)
            throw ParseError(c.line(), c.next_col(), "at least two matrix names");
        take_int("a window low edge");
        take_int("a window high edge");
    } else if (verb == "phi-extend") {
        int n = take_int("a variable index bound");
        take_int("a truncation degree");
        take_int("a twist");
        if (n < 0)
            throw ParseError(cmd.line, 1, "a nonnegative n");
        HomPoly<F> p = parse_xpoly(f, c, static_cast<std::size_t>(n) + 1, std::nullopt, "");
        canon += " " + hp_to_string(f, p);
        cmd.polys.push_back(std::move(p));
    } else if (verb == "sym") {
        take_name(expect_module_like(s, c.expect_ident("a module name")));
        int m = take_int("a power");
        if (m < 0)
            throw ParseError(cmd.line, 1, "a nonnegative power");
    } else if (verb == "good-epi" || verb == "reconstruct") {
        take_name(expect_kind(s, c.expect_ident("a sections name"), "sections"));
    } else if (verb == "eval") {
        take_name(expect_kind(s, c.expect_ident("a sections name"), "sections"));
        take_name(expect_module_like(s, c.expect_ident("a module name")));
    } else if (verb == "trunc-iso") {
        take_name(expect_kind(s, c.expect_ident("a sections name"), "sections"));
        take_int("a twist");
        take_int("a truncation degree");
    } else if (verb == "monoidal") {
        take_name(expect_kind(s, c.expect_ident("a sections name"), "sections"));
        take_name(expect_module_like(s, c.expect_ident("a module name")));
        take_name(expect_module_like(s, c.expect_ident("a module name")));
    } else if (verb == "relation") {
        const std::string sn = expect_kind(s, c.expect_ident("a sections name"), "sections");
        take_name(sn);
        const std::size_t nvars = s.sections.at(sn).n + 1;
        HomPoly<F> p = parse_xpoly(f, c, nvars, std::nullopt, "");
        canon += " " + hp_to_string(f, p);
        cmd.polys.push_back(std::move(p));
    } else if (verb == "base-change" || verb == "descend") {
        const std::string t1 = expect_kind(s, c.expect_ident("a target name"), "target");
        const std::string t2 = expect_kind(s, c.expect_ident("a target name"), "target");
        take_name(t1);
        take_name(t2);
        const TargetRing<F>& src = s.targets.at(t1);
        const TargetRing<F>& dst = s.targets.at(t2);

        c.expect_punct("(");
        std::size_t gen_count = src.kind == TargetKind::field      ? 0
                                : src.kind == TargetKind::univariate ? 1
                                                                     : src.dim;
        for (std::size_t i = 0; i < gen_count; ++i) {
            if (i)
                c.expect_punct(",");
            cmd.elems.push_back(parse_elem(dst, c));
        }
        c.expect_punct(")");
        canon += " " + render_elem_list(dst, cmd.elems);

        if (verb == "descend") {
            c.expect_punct("(");
            cmd.quot = parse_elem(src, c);
            c.expect_punct(")");
            canon += " (" + render_elem(src, *cmd.quot) + ")";
        }

        int r = take_int("a rank");
        if (r < 0)
            throw ParseError(cmd.line, 1, "a nonnegative rank");

        // relation rows, one per generator, all the same length
        Token open = c.expect_punct("[");
        std::optional<std::size_t> cols;
        for (int i = 0; i < r; ++i) {
            if (i)
                c.expect_punct(",");
            c.expect_punct("[");
            std::vector<TElt<F>> row;
            if (!c.accept_punct("]")) {
                row.push_back(parse_elem(src, c));
                while (c.accept_punct(","))
                    row.push_back(parse_elem(src, c));
                c.expect_punct("]");
            }
            if (cols && *cols != row.size())
                throw ParseError(c.line(), c.next_col(), "rows of equal length");
            cols = row.size();
            cmd.rows.push_back(std::move(row));
        }
        Token close = c.expect_punct("]");
        (void)open;
        (void)close;
        canon += " " + render_rows(src, cmd.rows);
    } else {
        throw ParseError(c.line(), 1, "a declaration or command keyword");
    }

    c.expect_end();
    lines.push_back(canon);
    s.commands.push_back(std::move(cmd));
}

template <Field F>
void parse_statement(Session<F>& s, Cursor& c, const std::string& verb,
                     std::vector<std::string>& lines)
{
    static const std::vector<std::string> decls = {"ring",   "free",   "matrix", "module",
                                                   "map",    "target", "sections"};
    for (const std::string& d : decls)
        if (verb == d) {
            parse_declaration(s, c, verb, lines);
            return;
        }
    parse_command(s, c, verb, lines);
}

template <Field F>
Json classify_json(const TargetRing<F>& r, const TModule<F>& m)
{
    if (r.kind == TargetKind::univariate) {
        UnivariateClass<F> cls = univariate_class(r, m);
        Json torsion = Json::array();
        for (const auto& p : cls.torsion)
            torsion.push_back(up_to_string(r.coeff, p));
        return Json{{"free_rank", cls.free_rank}, {"torsion", torsion}};
    }
    return Json{{"dimension", k_dimension(r, m)}};
}

template <Field F>
Json elem_list_json(const TargetRing<F>& r, const std::vector<TElt<F>>& es)
{
    Json out = Json::array();
    for (const auto& e : es)
        out.push_back(t_to_string(r, e));
    return out;
}

template <Field F>
Json run_command(Session<F>& s, const Command<F>& cmd, const RunOptions& opt)
{
    const F& f = s.field;
    Json out;
    out["command"] = cmd.verb;
    Json& in = out["inputs"];
    in = Json::object();

    auto window = [&](int lo, int hi) {
        DegreeWindow w = opt.window.value_or(DegreeWindow{lo, hi});
        in["window"] = Json::array({w.lo, w.hi});
        return w;
    };

    if (cmd.verb == "monomials") {
        const int n = cmd.nums[0], m = cmd.nums[1];
        in["n"] = n;
        in["m"] = m;
        Json v = Json::array();
        for (const Monomial& mono : enumerate_monomials(static_cast<std::size_t>(n) + 1, m))
            v.push_back(render_monomial(mono));
        out["value"] = std::move(v);
        return out;
    }

    if (cmd.verb == "hilbert") {
        in["module"] = cmd.names[0];
        const FPGradedModule<F> m = module_like(s, cmd.names[0]);
        DegreeWindow w = window(cmd.nums[0], cmd.nums[1]);
        Json v = Json::array();
        for (const auto& [k, dim] : hilbert_table(f, m, w))
            v.push_back(Json::array({k, static_cast<std::int64_t>(dim)}));
        out["value"] = std::move(v);
        return out;
    }

    if (cmd.verb == "exact") {
        in["maps"] = cmd.names;
        std::vector<GradedModuleMap<F>> chain;
        for (const std::string& n : cmd.names) {
            auto it = s.matrices.find(n);
            if (it == s.matrices.end())
                throw NameError(cmd.line, n, "no matrix bound to '" + n + "'");
            chain.push_back(it->second);
        }
        DegreeWindow w = window(cmd.nums[0], cmd.nums[1]);
        ExactnessReport rep = exactness_report(f, chain, w);
        out["verdict"] = rep.pass ? "exact" : "not_exact";
        Json table = Json::array();
        for (const PositionReport& pos : rep.positions)
            for (const DegreeVerdict& v : pos.rows)
                table.push_back(Json::array({pos.position, v.degree,
                                             static_cast<std::int64_t>(v.dim_middle),
                                             static_cast<std::int64_t>(v.dim_image),
                                             static_cast<std::int64_t>(v.dim_kernel),
                                             v.composite_zero ? 1 : 0}));
        Json witness{{"table", std::move(table)}};
        if (rep.first_failure)
            witness["first_failure"] =
                Json::array({rep.first_failure->first, rep.first_failure->second});
        out["witness"] = std::move(witness);
        return out;
    }

    if (cmd.verb == "trunc") {
        const int n = cmd.nums[0], a = cmd.nums[1], d = cmd.nums[2];
        in["n"] = n;
        in["a"] = a;
        in["d"] = d;
        TruncationPresentation<F> pres =
            truncation_presentation(f, static_cast<std::size_t>(n), a, d);
        auto src_free = free_module<F>(pres.nvars, pres.module.rels.source);
        auto gen_free = free_module<F>(pres.nvars, pres.module.gens);
        auto rel_map = make_map(f, src_free, gen_free, pres.module.rels);
        auto inc_map = make_map(f, gen_free, pres.ambient, pres.inclusion.matrix);
        s.matrices.insert_or_assign("_trunc_rel", std::move(rel_map));
        s.matrices.insert_or_assign("_trunc_inc", std::move(inc_map));
        out["value"] = Json{{"binds", Json::array({"_trunc_rel", "_trunc_inc"})},
                            {"gens", static_cast<std::int64_t>(pres.module.gens.rank())},
                            {"rels", static_cast<std::int64_t>(pres.module.rels.source.rank())}};
        return out;
    }

    if (cmd.verb == "phi-extend") {
        const int n = cmd.nums[0], a = cmd.nums[1], d = cmd.nums[2];
        const HomPoly<F>& mult = cmd.polys[0];
        in["n"] = n;
        in["a"] = a;
        in["d"] = d;
        in["multiplier"] = hp_to_string(f, mult);
        TruncationPresentation<F> pres =
            truncation_presentation(f, static_cast<std::size_t>(n), a, d);
        const int d2 = d + mult.deg;
        FPGradedModule<F> target =
            free_module<F>(pres.nvars, GradedFree{{d2}});
        SectionTuple<F> tuple;
        tuple.a = a;
        tuple.d = d;
        const auto basis = enumerate_monomials(pres.nvars, a + d2);
        for (const Monomial& p : pres.gen_labels) {
            HomPoly<F> prod = hp_mul(f, hp_monomial(f, p, f.one()), mult);
            std::vector<typename F::Elt> v(basis.size(), f.zero());
            for (std::size_t u = 0; u < basis.size(); ++u) {
                auto it = prod.terms.find(basis[u]);
                if (it != prod.terms.end())
                    v[u] = it->second;
            }
            tuple.values.push_back(std::move(v));
        }
        GradedModuleMap<F> phi = phi_extend(f, pres, target, tuple);
        out["value"] = Json{{"compatible", true},
                            {"gens", static_cast<std::int64_t>(pres.gen_labels.size())},
                            {"target_twist", d2}};
        (void)phi;
        return out;
    }

    if (cmd.verb == "sym") {
        in["module"] = cmd.names[0];
        in["power"] = cmd.nums[0];
        FPGradedModule<F> m = module_like(s, cmd.names[0]);
        FPGradedModule<F> sm = sym_module(f, m, cmd.nums[0]);
        out["value"] = Json{{"gens", static_cast<std::int64_t>(sm.gens.rank())},
                            {"rels", static_cast<std::int64_t>(sm.rels.source.rank())},
                            {"twists", sm.gens.twists}};
        return out;
    }

    if (cmd.verb == "good-epi") {
        in["sections"] = cmd.names[0];
        const SectionData<F>& sd = s.sections.at(cmd.names[0]);
        GoodEpiVerdict<F> v = check_good_epi(sd);
        if (v.good()) {
            out["verdict"] = "good";
            out["witness"] = Json{{"bezout", elem_list_json(sd.ring, v.bezout)}};
        } else if (!v.epi) {
            out["verdict"] = "not_epi";
            if (v.gcd_witness)
                out["witness"] = Json{{"gcd", up_to_string(sd.ring.coeff, *v.gcd_witness)}};
            else
                out["witness"] = Json{{"note", v.note}};
        } else {
            out["verdict"] = "not_middle_exact";
            Json w{{"syzygy", elem_list_json(sd.ring, v.syzygy_witness)}};
            if (!v.note.empty())
                w["note"] = v.note;
            out["witness"] = std::move(w);
        }
        return out;
    }

    if (cmd.verb == "eval") {
        in["sections"] = cmd.names[0];
        in["module"] = cmd.names[1];
        const SectionData<F>& sd = s.sections.at(cmd.names[0]);
        TModule<F> em = evaluate_object(sd, module_like(s, cmd.names[1]));
        out["value"] = classify_json(sd.ring, em);
        return out;
    }

    if (cmd.verb == "trunc-iso") {
        in["sections"] = cmd.names[0];
        in["d"] = cmd.nums[0];
        in["a"] = cmd.nums[1];
        const SectionData<F>& sd = s.sections.at(cmd.names[0]);
        out["verdict"] = check_truncation_iso(sd, cmd.nums[0], cmd.nums[1]) ? "iso" : "not_iso";
        return out;
    }

    if (cmd.verb == "monoidal") {
        in["sections"] = cmd.names[0];
        in["left"] = cmd.names[1];
        in["right"] = cmd.names[2];
        const SectionData<F>& sd = s.sections.at(cmd.names[0]);
        bool ok = check_monoidality(sd, module_like(s, cmd.names[1]), module_like(s, cmd.names[2]));
        out["verdict"] = ok ? "monoidal" : "not_monoidal";
        return out;
    }

    if (cmd.verb == "reconstruct") {
        in["sections"] = cmd.names[0];
        const SectionData<F>& sd = s.sections.at(cmd.names[0]);
        ChartMap<F> cm = reconstruct_morphism(sd);
        Json charts = Json::array();
        for (const Chart<F>& ch : cm.charts) {
            Json coords = Json::array();
            for (const auto& [num, den] : ch.coords)
                coords.push_back(
                    Json::array({t_to_string(sd.ring, num), t_to_string(sd.ring, den)}));
            charts.push_back(Json{{"index", static_cast<std::int64_t>(ch.index)},
                                  {"coords", std::move(coords)}});
        }
        out["value"] = Json{{"charts", std::move(charts)},
                            {"certificate", elem_list_json(sd.ring, cm.cover_certificate)}};
        return out;
    }

    if (cmd.verb == "relation") {
        in["sections"] = cmd.names[0];
        const SectionData<F>& sd = s.sections.at(cmd.names[0]);
        in["poly"] = hp_to_string(f, cmd.polys[0]);
        out["verdict"] = verify_relation(sd, cmd.polys[0]) ? "holds" : "fails";
        return out;
    }

    if (cmd.verb == "base-change" || cmd.verb == "descend") {
        const TargetRing<F>& src = s.targets.at(cmd.names[0]);
        const TargetRing<F>& dst = s.targets.at(cmd.names[1]);
        in["from"] = cmd.names[0];
        in["to"] = cmd.names[1];
        in["images"] = elem_list_json(dst, cmd.elems);
        const std::size_t rank = static_cast<std::size_t>(cmd.nums[0]);
        in["rank"] = cmd.nums[0];
        Json rel_json = Json::array();
        for (const auto& row : cmd.rows)
            rel_json.push_back(elem_list_json(src, row));
        in["relations"] = std::move(rel_json);

        TModule<F> m;
        m.rank = rank;
        const std::size_t cols = cmd.rows.empty() ? 0 : cmd.rows[0].size();
        m.rels = tm_zero(src, rank, cols);
        for (std::size_t i = 0; i < rank; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                m.rels.at(i, j) = cmd.rows[i][j];

        RingMap<F> rm = make_ring_map(src, dst, cmd.elems);
        if (cmd.verb == "base-change") {
            out["value"] = classify_json(dst, base_change(rm, m));
            return out;
        }

        /* descend: the algebra is the principal quotient by the given
         * element, acting on the module through multiplication; the section
         * on the other side is the quotient map, which exists exactly when
         * the image of the element dies in the destination. */
        in["quotient"] = t_to_string(src, *cmd.quot);
        TModule<F> carrier;
        carrier.rank = 1;
        carrier.rels = tm_zero(src, 1, 1);
        carrier.rels.at(0, 0) = *cmd.quot;
        AlgebraObject<F> alg =
            make_algebra(src, carrier, tm_identity(src, 1), tm_identity(src, 1));

        TModule<F> underlying;
        underlying.rank = rank;
        underlying.rels = tm_zero(src, rank, cols + rank);
        for (std::size_t i = 0; i < rank; ++i) {
            for (std::size_t j = 0; j < cols; ++j)
                underlying.rels.at(i, j) = cmd.rows[i][j];
            underlying.rels.at(i, cols + i) = *cmd.quot;
        }
        AModule<F> mod = make_amodule(src, alg, underlying, tm_identity(src, rank));
        out["value"] = classify_json(dst, descend_module(rm, alg, tm_identity(dst, 1), mod));
        return out;
    }

    throw Error(ErrorKind::usage_error, "unknown command '" + cmd.verb + "'");
}

inline bool passing_verdict(const std::string& v)
{
    return v == "exact" || v == "good" || v == "iso" || v == "monoidal" || v == "holds";
}

inline std::string strip_kind_prefix(const Error& e)
{
    std::string detail = e.what();
    const std::string prefix = std::string(to_string(e.kind())) + ": ";
    if (detail.compare(0, prefix.size(), prefix) == 0)
        detail = detail.substr(prefix.size());
    return detail;
}

template <Field F>
int run_session(Session<F>& s, std::ostream& os, const RunOptions& opt)
{
    bool any_fail = false;
    for (const Command<F>& cmd : s.commands) {
        Json out;
        try {
            out = run_command(s, cmd, opt);
        } catch (const Error& e) {
            Json err{{"kind", to_string(e.kind())}, {"detail", strip_kind_prefix(e)}};
            os << Json{{"error", std::move(err)}}.dump() << '\n';
            return 2;
        }
        os << out.dump() << '\n';
        if (out.contains("verdict") && !passing_verdict(out["verdict"].get<std::string>()))
            any_fail = true;
    }
    return any_fail ? 1 : 0;
}

}  // namespace script_detail

/* Serialized form of an error, as emitted on the report stream. */
inline Json error_json(const Error& e)
{
    Json err{{"kind", to_string(e.kind())}, {"detail", script_detail::strip_kind_prefix(e)}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
        err["line"] = pe->line;
        err["col"] = pe->col;
        err["expected"] = pe->expected;
    } else if (const auto* ne = dynamic_cast<const NameError*>(&e)) {
        err["line"] = ne->line;
        err["name"] = ne->name;
    }
    return Json{{"error", std::move(err)}};
}

inline Script parse_script(const std::string& text)
{
    using namespace script_detail;
    Script sc;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string raw =
            nl == std::string::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        ++line_no;
        std::vector<Token> toks = lex_line(raw, line_no);
        if (!toks.empty()) {
            Cursor c(std::move(toks), line_no);
            Token head = c.expect_ident("a declaration or command keyword");
            std::string verb = head.text;
            // hyphenated verbs arrive as ident '-' ident
            while (!c.at_end() && c.peek().kind == Token::Kind::punct && c.peek().text == "-") {
                Cursor probe = c;
                probe.take();
                if (probe.at_end() || probe.peek().kind != Token::Kind::ident)
                    break;
                c.take();
                verb += "-" + c.take().text;
            }

            if (verb == "field") {
                if (!std::holds_alternative<std::monostate>(sc.session))
                    throw ParseError(head.line, head.col,
                                     "at most one field declaration, before any other statement");
                Token name = c.expect_ident("a field name");
                if (name.text[0] == '_')
                    throw ParseError(name.line, name.col, "a name not starting with '_'");
                c.expect_punct("=");
                Token kind = c.expect_ident("Q or GF(p)");
                if (kind.text == "Q") {
                    c.expect_end();
                    Session<Rationals> s{Rationals{}};
                    s.field_name = name.text;
                    s.kinds[name.text] = "field";
                    sc.session = std::move(s);
                    sc.lines.push_back("field " + name.text + " = Q");
                } else if (kind.text == "GF") {
                    c.expect_punct("(");
                    Token p = c.expect_number("a prime");
                    if (p.text.size() > 9)
                        throw ParseError(p.line, p.col, "a smaller prime");
                    c.expect_punct(")");
                    c.expect_end();
                    std::optional<PrimeField> fld;
                    try {
                        fld.emplace(static_cast<std::uint32_t>(std::stoul(p.text)));
                    } catch (const Error&) {
                        throw ParseError(p.line, p.col, "a prime modulus");
                    }
                    Session<PrimeField> s{*fld};
                    s.field_name = name.text;
                    s.kinds[name.text] = "field";
                    sc.session = std::move(s);
                    sc.lines.push_back("field " + name.text + " = GF(" + p.text + ")");
                } else {
                    throw ParseError(kind.line, kind.col, "Q or GF(p)");
                }
            } else {
                // statements before any field declaration run over Q
                if (std::holds_alternative<std::monostate>(sc.session))
                    sc.session = Session<Rationals>{Rationals{}};
                std::visit(
                    [&](auto& sess) {
                        if constexpr (!std::is_same_v<std::decay_t<decltype(sess)>,
                                                      std::monostate>)
                            parse_statement(sess, c, verb, sc.lines);
                    },
                    sc.session);
            }
        }
        if (nl == std::string::npos)
            break;
        pos = nl + 1;
    }
    return sc;
}

/* Execute every command, one JSON object per line.  Exit status: 0 when all
 * verdicts pass, 1 when some verdict fails, 2 when a command errors out (the
 * error object is the last line of the stream). */
inline int run_script(Script& sc, std::ostream& os, const RunOptions& opt = {})
{
    return std::visit(
        [&](auto& sess) -> int {
            if constexpr (std::is_same_v<std::decay_t<decltype(sess)>, std::monostate>)
                return 0;
            else
                return script_detail::run_session(sess, os, opt);
        },
        sc.session);
}

}  // namespace qpnkit
