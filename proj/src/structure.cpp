#include "incept/structure.hpp"

#include <cctype>
#include <functional>
#include <stdexcept>
#include <tuple>

namespace incept {

bool StructNode::operator==(const StructNode& o) const {
  if (kind != o.kind || name != o.name || args.size() != o.args.size())
    return false;
  if (kind == Kind::Fml) return fml == o.fml;
  if (kind != Kind::FVar && kind != Kind::AtomVar && kind != Kind::FApp &&
      fsort != o.fsort)
    return false;
  return args == o.args;
}

bool DSequent::operator<(const DSequent& o) const {
  return print_dsequent(*this) < print_dsequent(o);
}

StructNode StructNode::formula(Formula f) {
  StructNode n;
  n.kind = Kind::Fml;
  n.fml = std::move(f);
  return n;
}
StructNode StructNode::sconn(std::string nm, bool fs, std::vector<StructNode> as) {
  StructNode n;
  n.kind = Kind::SConn;
  n.name = std::move(nm);
  n.fsort = fs;
  n.args = std::move(as);
  return n;
}
StructNode StructNode::stop() {
  StructNode n;
  n.kind = Kind::STop;
  n.fsort = true;
  return n;
}
StructNode StructNode::sbot() {
  StructNode n;
  n.kind = Kind::SBot;
  n.fsort = false;
  return n;
}
StructNode StructNode::param(std::string id, bool fs) {
  StructNode n;
  n.kind = Kind::Param;
  n.name = std::move(id);
  n.fsort = fs;
  return n;
}
StructNode StructNode::svar(std::string nm, bool fs) {
  StructNode n;
  n.kind = Kind::SVar;
  n.name = std::move(nm);
  n.fsort = fs;
  return n;
}
StructNode StructNode::fvar(std::string nm) {
  StructNode n;
  n.kind = Kind::FVar;
  n.name = std::move(nm);
  return n;
}
StructNode StructNode::atomvar(std::string nm) {
  StructNode n;
  n.kind = Kind::AtomVar;
  n.name = std::move(nm);
  return n;
}
StructNode StructNode::fapp(std::string ctor, std::vector<StructNode> as) {
  StructNode n;
  n.kind = Kind::FApp;
  n.name = std::move(ctor);
  n.args = std::move(as);
  return n;
}

bool StructNode::isConcrete() const {
  switch (kind) {
    case Kind::SVar:
    case Kind::FVar:
    case Kind::AtomVar:
    case Kind::FApp:
      return false;
    default:
      for (const auto& a : args)
        if (!a.isConcrete()) return false;
      return true;
  }
}

const StructNode* node_at(const DSequent& s, const OccPath& p) {
  const StructNode* cur = p.inAnte ? &s.ante : &s.succ;
  for (int ix : p.path) {
    if (ix < 0 || ix >= (int)cur->args.size()) return nullptr;
    cur = &cur->args[ix];
  }
  return cur;
}

DSequent replace_at(const DSequent& s, const OccPath& p, const StructNode& n) {
  DSequent out = s;
  StructNode* cur = p.inAnte ? &out.ante : &out.succ;
  for (int ix : p.path) cur = &cur->args[ix];
  *cur = n;
  return out;
}

bool precedent_position(const DSequent& s, const OccPath& p) {
  bool pos = p.inAnte;
  const StructNode* cur = p.inAnte ? &s.ante : &s.succ;
  for (int ix : p.path) {
    const StructNode& child = cur->args[ix];
    bool flips = child.fsort != cur->fsort;
    // formula leaves take the surrounding sort; treat them as same-sort
    if (child.kind == StructNode::Kind::Fml || cur->kind == StructNode::Kind::FApp)
      flips = false;
    if (flips) pos = !pos;
    cur = &child;
  }
  return pos;
}

std::vector<Diagnostic> check_sorts(const DSequent& s, const Signature& sig) {
  std::vector<Diagnostic> diags;
  std::function<void(const StructNode&, bool, std::string)> walk =
      [&](const StructNode& n, bool fsort, std::string path) {
        switch (n.kind) {
          case StructNode::Kind::Fml:
            typecheck(n.fml, sig);
            return;
          case StructNode::Kind::STop:
            if (!fsort) diags.push_back({path, "^top at succedent sort"});
            return;
          case StructNode::Kind::SBot:
            if (fsort) diags.push_back({path, "!bot at antecedent sort"});
            return;
          case StructNode::Kind::Param:
          case StructNode::Kind::SVar:
            if (n.fsort != fsort) diags.push_back({path, "sort clash at " + n.name});
            return;
          case StructNode::Kind::FVar:
          case StructNode::Kind::AtomVar:
          case StructNode::Kind::FApp:
            return;
          case StructNode::Kind::SConn: {
            const ConnectiveSpec* c = sig.find(n.name);
            if (!c) {
              diags.push_back({path, "unknown structural connective " + n.name});
              return;
            }
            if ((c->family == Family::F) != n.fsort || n.fsort != fsort) {
              diags.push_back({path, "structural sort clash at " + n.name});
              return;
            }
            if ((int)n.args.size() != c->arity) {
              diags.push_back({path, "arity mismatch at " + n.name});
              return;
            }
            for (int i = 0; i < c->arity; ++i)
              walk(n.args[i], c->orderType[i] == Tone::Pos ? fsort : !fsort,
                   path + "." + std::to_string(i + 1));
            return;
          }
        }
      };
  walk(s.ante, true, "ante");
  walk(s.succ, false, "succ");
  return diags;
}

namespace {

void printS(const StructNode& n, std::string& out) {
  switch (n.kind) {
    case StructNode::Kind::Fml:
      out += print_formula(n.fml);
      return;
    case StructNode::Kind::STop:
      out += "^top";
      return;
    case StructNode::Kind::SBot:
      out += "!bot";
      return;
    case StructNode::Kind::Param:
      out += "#" + n.name;
      return;
    case StructNode::Kind::SVar:
      out += n.name;
      return;
    case StructNode::Kind::FVar:
      out += "?" + n.name;
      return;
    case StructNode::Kind::AtomVar:
      out += "?@" + n.name;
      return;
    case StructNode::Kind::FApp: {
      out += "?" + n.name + "(";
      for (size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        printS(n.args[i], out);
      }
      out += ")";
      return;
    }
    case StructNode::Kind::SConn: {
      out += n.fsort ? '^' : '!';
      out += n.name;
      out += '(';
      for (size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        printS(n.args[i], out);
      }
      out += ')';
      return;
    }
  }
}

struct SParser {
  const std::string& s;
  const Signature& sig;
  size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  [[noreturn]] void fail(const std::string& m) { throw ParseError(m, (int)i); }
  bool take(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  StructNode node(bool fsort) {
    skip();
    if (take('#')) {
      size_t j = i;
      while (j < s.size() && (std::isalnum((unsigned char)s[j]))) ++j;
      if (j == i) fail("expected parameter id");
      std::string id = s.substr(i, j - i);
      i = j;
      return StructNode::param(id, fsort);
    }
    if (i < s.size() && (s[i] == '^' || s[i] == '!')) {
      bool hat = s[i] == '^';
      ++i;
      size_t j = i;
      if (j >= s.size() || !std::islower((unsigned char)s[j]))
        fail("expected connective name");
      while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_' ||
                              s[j] == '.'))
        ++j;
      std::string name = s.substr(i, j - i);
      i = j;
      if (name == "top" && hat) return StructNode::stop();
      if (name == "bot" && !hat) return StructNode::sbot();
      const ConnectiveSpec* c = sig.find(name);
      if (!c) fail("unknown connective " + name);
      if ((c->family == Family::F) != hat)
        fail("sort marker clashes with family of " + name);
      if (hat != fsort) fail("structure for " + name + " on the wrong side");
      std::vector<StructNode> args;
      if (c->arity > 0) {
        if (!take('(')) fail("expected '('");
        for (int k = 0; k < c->arity; ++k) {
          if (k && !take(',')) fail("expected ','");
          bool argSort = c->orderType[k] == Tone::Pos ? fsort : !fsort;
          args.push_back(node(argSort));
        }
        if (!take(')')) fail("expected ')'");
      } else if (take('(')) {
        if (!take(')')) fail("expected ')'");
      }
      return StructNode::sconn(name, hat, std::move(args));
    }
    // a formula leaf: scan a balanced chunk up to ',' / ')' / '|' at depth 0
    skip();
    size_t j = i;
    int depth = 0;
    while (j < s.size()) {
      char c = s[j];
      if (c == '(') ++depth;
      if (c == ')') {
        if (depth == 0) break;
        --depth;
      }
      if (depth == 0 && (c == ',' || c == '|')) break;
      ++j;
    }
    std::string chunk = s.substr(i, j - i);
    if (chunk.empty()) fail("expected a structure");
    Formula f = parse_formula(chunk, sig);
    i = j;
    return StructNode::formula(std::move(f));
  }
};

}  // namespace

std::string print_struct(const StructNode& n) {
  std::string out;
  printS(n, out);
  return out;
}

std::string print_dsequent(const DSequent& s) {
  return print_struct(s.ante) + " |- " + print_struct(s.succ);
}

StructNode parse_struct(const std::string& text, const Signature& sig, bool fsort) {
  SParser p{text, sig};
  StructNode n = p.node(fsort);
  p.skip();
  if (p.i != text.size()) p.fail("trailing input");
  return n;
}

DSequent parse_dsequent(const std::string& text, const Signature& sig) {
  SParser p{text, sig};
  DSequent s;
  s.ante = p.node(true);
  p.skip();
  if (!(p.take('|') && p.take('-'))) p.fail("expected '|-'");
  s.succ = p.node(false);
  p.skip();
  if (p.i != text.size()) p.fail("trailing input");
  return s;
}

Formula structure_to_formula(const StructNode& n, const Signature& sig) {
  switch (n.kind) {
    case StructNode::Kind::Fml:
      return n.fml;
    case StructNode::Kind::STop:
      return Formula::top();
    case StructNode::Kind::SBot:
      return Formula::bot();
    case StructNode::Kind::SConn: {
      std::vector<Formula> args;
      for (const auto& a : n.args) args.push_back(structure_to_formula(a, sig));
      return Formula::conn(n.name, std::move(args));
    }
    default:
      throw std::runtime_error("structure has no formula reading: " +
                               print_struct(n));
  }
}

StructNode schema_from_mstruct(const MStruct& m) {
  switch (m.kind) {
    case MStruct::Kind::Var:
      return StructNode::svar(m.name, m.fsort);
    case MStruct::Kind::STop:
      return StructNode::stop();
    case MStruct::Kind::SBot:
      return StructNode::sbot();
    case MStruct::Kind::SConn: {
      std::vector<StructNode> args;
      for (const auto& a : m.args) args.push_back(schema_from_mstruct(a));
      return StructNode::sconn(m.name, m.fsort, std::move(args));
    }
  }
  throw std::runtime_error("unreachable");
}

}  // namespace incept
