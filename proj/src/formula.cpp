#include "incept/formula.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

namespace incept {

bool Formula::operator==(const Formula& o) const {
  return kind == o.kind && name == o.name && var == o.var && args == o.args;
}

bool Formula::operator<(const Formula& o) const {
  auto key = [](const Formula& f) {
    return std::tie(f.kind, f.name, f.var);
  };
  if (key(*this) != key(o)) return key(*this) < key(o);
  return std::lexicographical_compare(args.begin(), args.end(), o.args.begin(),
                                      o.args.end());
}

Formula Formula::atom(std::string n, VarKind k) {
  Formula f;
  f.kind = Kind::Atom;
  f.name = std::move(n);
  f.var = k;
  return f;
}
Formula Formula::top() {
  Formula f;
  f.kind = Kind::Top;
  return f;
}
Formula Formula::bot() {
  Formula f;
  f.kind = Kind::Bot;
  return f;
}
Formula Formula::conj(Formula l, Formula r) {
  Formula f;
  f.kind = Kind::And;
  f.args = {std::move(l), std::move(r)};
  return f;
}
Formula Formula::disj(Formula l, Formula r) {
  Formula f;
  f.kind = Kind::Or;
  f.args = {std::move(l), std::move(r)};
  return f;
}
Formula Formula::conn(std::string n, std::vector<Formula> as) {
  Formula f;
  f.kind = Kind::Conn;
  f.name = std::move(n);
  f.args = std::move(as);
  return f;
}

namespace {

struct Lexer {
  const std::string& s;
  size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  bool eof() {
    skip();
    return i >= s.size();
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  bool tryTake(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  bool tryTakeLeq() {
    skip();
    if (i + 1 < s.size() && s[i] == '<' && s[i + 1] == '=') {
      i += 2;
      return true;
    }
    return false;
  }
  std::string tryIdent() {
    skip();
    size_t j = i;
    if (j >= s.size() || !std::islower((unsigned char)s[j])) return "";
    while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_' ||
                            s[j] == '.'))
      ++j;
    std::string r = s.substr(i, j - i);
    i = j;
    return r;
  }
};

struct Parser {
  Lexer lx;
  const Signature& sig;

  Parser(const std::string& text, const Signature& s) : lx{text}, sig(s) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, (int)lx.i);
  }

  Formula primary() {
    if (lx.tryTake('(')) {
      Formula f = formula();
      if (!lx.tryTake(')')) fail("expected ')'");
      return f;
    }
    int at = (int)lx.i;
    std::string id = lx.tryIdent();
    if (id.empty()) fail("expected a formula");
    if (id == "top") return Formula::top();
    if (id == "bot") return Formula::bot();
    if (lx.tryTake('(')) {
      std::vector<Formula> args;
      if (!lx.tryTake(')')) {
        do {
          args.push_back(formula());
        } while (lx.tryTake(','));
        if (!lx.tryTake(')')) fail("expected ')'");
      }
      if (id == "and" || id == "or") {
        if (args.size() != 2) throw ParseError(id + " takes 2 arguments", at);
        return id == "and" ? Formula::conj(args[0], args[1])
                           : Formula::disj(args[0], args[1]);
      }
      const ConnectiveSpec* c = sig.find(id);
      if (!c) throw ParseError("unknown connective " + id, at);
      if ((int)args.size() != c->arity)
        throw ParseError("connective " + id + " expects " +
                             std::to_string(c->arity) + " arguments",
                         at);
      return Formula::conn(id, std::move(args));
    }
    const ConnectiveSpec* c = sig.find(id);
    if (c) {
      if (c->arity != 0)
        throw ParseError("connective " + id + " used without arguments", at);
      return Formula::conn(id, {});
    }
    return Formula::atom(id);
  }

  // Infix chain, all binary connectives at one precedence, left associative.
  Formula formula() {
    Formula acc = primary();
    for (;;) {
      size_t save = lx.i;
      std::string id = lx.tryIdent();
      if (id.empty()) return acc;
      bool binary = id == "and" || id == "or";
      const ConnectiveSpec* c = binary ? nullptr : sig.find(id);
      if (!binary && (!c || c->arity != 2)) {
        lx.i = save;
        return acc;
      }
      Formula rhs = primary();
      if (id == "and")
        acc = Formula::conj(std::move(acc), std::move(rhs));
      else if (id == "or")
        acc = Formula::disj(std::move(acc), std::move(rhs));
      else
        acc = Formula::conn(id, {std::move(acc), std::move(rhs)});
    }
  }
};

bool isInfix(const Formula& f) {
  return f.kind == Formula::Kind::And || f.kind == Formula::Kind::Or ||
         (f.kind == Formula::Kind::Conn && f.args.size() == 2);
}

void printRec(const Formula& f, std::string& out, bool atomicCtx) {
  switch (f.kind) {
    case Formula::Kind::Atom:
      out += f.name;
      return;
    case Formula::Kind::Top:
      out += "top";
      return;
    case Formula::Kind::Bot:
      out += "bot";
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Conn: {
      if (isInfix(f)) {
        const char* name = f.kind == Formula::Kind::And  ? "and"
                           : f.kind == Formula::Kind::Or ? "or"
                                                         : f.name.c_str();
        if (atomicCtx) out += '(';
        printRec(f.args[0], out, true);
        out += ' ';
        out += name;
        out += ' ';
        printRec(f.args[1], out, true);
        if (atomicCtx) out += ')';
        return;
      }
      out += f.name;
      out += '(';
      for (size_t i = 0; i < f.args.size(); ++i) {
        if (i) out += ", ";
        printRec(f.args[i], out, false);
      }
      out += ')';
      return;
    }
  }
}

}  // namespace

Formula parse_formula(const std::string& text, const Signature& sig) {
  Parser p(text, sig);
  Formula f = p.formula();
  if (!p.lx.eof()) p.fail("trailing input");
  return f;
}

Inequality parse_inequality(const std::string& text, const Signature& sig) {
  Parser p(text, sig);
  Formula l = p.formula();
  if (!p.lx.tryTakeLeq()) p.fail("expected '<='");
  Formula r = p.formula();
  if (!p.lx.eof()) p.fail("trailing input");
  return Inequality{std::move(l), std::move(r)};
}

std::string print_formula(const Formula& f) {
  std::string out;
  printRec(f, out, false);
  return out;
}

std::string print_inequality(const Inequality& iq) {
  return print_formula(iq.lhs) + " <= " + print_formula(iq.rhs);
}

void collect_vars(const Formula& f, VarKind k, std::vector<std::string>& out) {
  if (f.kind == Formula::Kind::Atom) {
    if (f.var == k && std::find(out.begin(), out.end(), f.name) == out.end())
      out.push_back(f.name);
    return;
  }
  for (const auto& a : f.args) collect_vars(a, k, out);
}

std::vector<std::string> variables(const Formula& f, VarKind k) {
  std::vector<std::string> out;
  collect_vars(f, k, out);
  return out;
}

std::vector<std::string> variables(const Inequality& iq, VarKind k) {
  std::vector<std::string> out;
  collect_vars(iq.lhs, k, out);
  collect_vars(iq.rhs, k, out);
  return out;
}

void typecheck(const Formula& f, const Signature& sig) {
  if (f.kind == Formula::Kind::Conn) {
    const ConnectiveSpec* c = sig.find(f.name);
    if (!c) throw std::runtime_error("unknown connective " + f.name);
    if ((int)f.args.size() != c->arity)
      throw std::runtime_error("arity mismatch on " + f.name);
  }
  if ((f.kind == Formula::Kind::And || f.kind == Formula::Kind::Or) &&
      f.args.size() != 2)
    throw std::runtime_error("lattice connective arity");
  for (const auto& a : f.args) typecheck(a, sig);
}

}  // namespace incept
