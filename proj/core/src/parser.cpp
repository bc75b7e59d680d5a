// Part of the CatEff project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "cateff/syntax.hpp"

namespace cateff {

namespace {

struct Token {
  enum class Kind { Ident, Punct, End };
  Kind kind;
  std::string text;
  int line;
  int col;
};

auto is_ident_start(unsigned char c) -> bool {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

auto is_ident_char(unsigned char c) -> bool {
  return is_ident_start(c) || c == '\'' || c == '^';
}

class Lexer {
 public:
  Lexer(std::string_view src, std::string_view file) : src_(src), file_(file) {}

  auto run() -> std::vector<Token> {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= src_.size()) break;
      int line = line_;
      int col = col_;
      unsigned char c = src_[pos_];
      if (is_ident_start(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               is_ident_char(static_cast<unsigned char>(src_[pos_]))) {
          advance();
        }
        std::string text(src_.substr(start, pos_ - start));
        if (text.rfind("fun^", 0) == 0) {
          // `fun^g` starts a lambda graded by g.
          reset_to(start + 4, line, col + 4);
          out.push_back({Token::Kind::Ident, "fun", line, col});
          out.push_back({Token::Kind::Punct, "^", line, col + 3});
          continue;
        }
        out.push_back({Token::Kind::Ident, std::move(text), line, col});
        continue;
      }
      static const char* two[] = {"->", "~>", "=>", "<-"};
      bool matched = false;
      for (const char* p : two) {
        if (src_.substr(pos_, 2) == p) {
          out.push_back({Token::Kind::Punct, p, line, col});
          advance();
          advance();
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::string_view("(){}[],;:.|*+@=<>^").find(static_cast<char>(c)) !=
          std::string_view::npos) {
        out.push_back({Token::Kind::Punct, std::string(1, static_cast<char>(c)),
                       line, col});
        advance();
        continue;
      }
      std::ostringstream msg;
      msg << file_ << ":" << line << ":" << col << ": unexpected character '"
          << static_cast<char>(c) << "'";
      fail(ErrorKind::SyntaxError, msg.str());
    }
    out.push_back({Token::Kind::End, "", line_, col_});
    return out;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++pos_;
  }

  void reset_to(std::size_t pos, int line, int col) {
    pos_ = pos;
    line_ = line;
    col_ = col;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (src_.substr(pos_, 2) == "/*") {
        while (pos_ < src_.size() && src_.substr(pos_, 2) != "*/") advance();
        if (pos_ < src_.size()) {
          advance();
          advance();
        }
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::string_view file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string> kReserved = {
    "val", "let",    "in",   "do",   "split", "as",     "case",
    "of",  "inl",    "inr",  "handle", "with", "weaken", "fun"};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string_view file)
      : toks_(std::move(tokens)), file_(file) {}

  auto run() -> Theory {
    while (!at_end()) {
      const std::string& kw = peek().text;
      if (kw == "category") {
        parse_category();
      } else if (kw == "functor") {
        parse_functor();
      } else if (kw == "signature") {
        parse_signature();
      } else if (kw == "type") {
        parse_alias();
      } else if (kw == "handler") {
        parse_handler();
      } else if (kw == "program") {
        parse_program();
      } else {
        error("expected a declaration, found '" + kw + "'");
      }
    }
    return std::move(theory_);
  }

 private:
  // Tokens and diagnostics.

  auto peek(std::size_t ahead = 0) const -> const Token& {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  auto at_end() const -> bool { return peek().kind == Token::Kind::End; }
  auto is(std::string_view text) const -> bool {
    return peek().kind != Token::Kind::End && peek().text == text;
  }
  auto accept(std::string_view text) -> bool {
    if (!is(text)) return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view text) {
    if (!accept(text)) {
      error("expected '" + std::string(text) + "', found " + describe(peek()));
    }
  }
  auto ident() -> std::string {
    if (peek().kind != Token::Kind::Ident) {
      error("expected a name, found " + describe(peek()));
    }
    return toks_[pos_++].text;
  }
  auto binder() -> std::string {
    std::string name = ident();
    if (kReserved.count(name) != 0) {
      --pos_;
      error("'" + name + "' is reserved");
    }
    return name;
  }
  static auto describe(const Token& t) -> std::string {
    if (t.kind == Token::Kind::End) return "end of input";
    return "'" + t.text + "'";
  }
  auto where() const -> std::string {
    std::ostringstream s;
    s << file_ << ":" << peek().line << ":" << peek().col << ": ";
    return s.str();
  }
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::SyntaxError, where() + msg);
  }
  [[noreturn]] void unbound(const std::string& what) const {
    fail(ErrorKind::UnboundName, where() + what);
  }

  // Grading paths.

  auto path_element() -> std::string {
    if (accept("<")) {
      std::string a = ident();
      expect(",");
      std::string b = ident();
      expect(">");
      return pair_generator_name(a, b);
    }
    std::string name = ident();
    if (kReserved.count(name) != 0) {
      --pos_;
      error("expected a generator, found '" + name + "'");
    }
    return name;
  }

  auto path_spec() -> PathSpec {
    PathSpec spec;
    if (accept("id")) {
      if (accept("[")) {
        spec.identity = ident();
        expect("]");
      }
      return spec;
    }
    spec.generators.push_back(path_element());
    while (accept(".")) spec.generators.push_back(path_element());
    return spec;
  }

  auto morphism() -> Morphism {
    if (category_ == nullptr) error("grades are not allowed here");
    PathSpec spec = path_spec();
    if (spec.generators.empty() && !spec.identity) {
      error("identities in terms need an object: id[a]");
    }
    return category_->resolve(spec);
  }

  auto object() -> Object {
    std::string name = ident();
    auto obj = category_->find_object(name);
    if (!obj) {
      --pos_;
      fail(ErrorKind::UnknownObject, where() + "unknown object '" + name +
                                         "' in category " +
                                         category_->name());
    }
    return *obj;
  }

  // Declarations.

  void parse_category() {
    expect("category");
    std::string name = ident();
    if (accept("=")) {
      expect("pair_completion");
      expect("(");
      std::string base = ident();
      expect(")");
      expect(";");
      auto cat = theory_.category(base);
      if (!cat) unbound("unknown category '" + base + "'");
      theory_.categories.push_back(pair_completion(*cat, name));
      return;
    }
    CategoryPresentation p;
    p.name = name;
    expect("{");
    while (!accept("}")) {
      if (accept("objects")) {
        p.objects.push_back(ident());
        while (accept(",")) p.objects.push_back(ident());
      } else if (accept("gen")) {
        GeneratorDecl g;
        g.name = ident();
        expect(":");
        g.dom = ident();
        expect("->");
        g.cod = ident();
        p.generators.push_back(g);
      } else if (accept("rule")) {
        RuleDecl r;
        PathSpec lhs = path_spec();
        if (lhs.generators.empty()) error("rule left-hand side is empty");
        r.lhs = lhs.generators;
        expect("=");
        r.rhs = path_spec();
        p.rules.push_back(r);
      } else if (accept("wide")) {
        p.wide.push_back(ident());
        while (accept(",")) p.wide.push_back(ident());
      } else {
        error("expected objects, gen, rule or wide, found " +
              describe(peek()));
      }
      expect(";");
    }
    theory_.categories.push_back(build_category(p));
  }

  auto category_named(const std::string& name)
      -> std::shared_ptr<const GradingCategory> {
    auto cat = theory_.category(name);
    if (!cat) unbound("unknown category '" + name + "'");
    return cat;
  }

  void parse_functor() {
    expect("functor");
    FunctorPresentation p;
    p.name = ident();
    expect(":");
    auto source = category_named(ident());
    expect("->");
    auto target = category_named(ident());
    expect("{");
    while (!accept("}")) {
      if (accept("obj")) {
        std::string a = ident();
        expect("=>");
        p.objects.push_back({a, ident()});
      } else if (accept("gen")) {
        std::string g = path_element();
        expect("=>");
        p.generators.push_back({g, path_spec()});
      } else {
        error("expected obj or gen, found " + describe(peek()));
      }
      expect(";");
    }
    theory_.functors.push_back(build_functor(p, source, target));
  }

  auto signature_named(const std::string& name)
      -> std::shared_ptr<const GradedSignature> {
    auto sig = theory_.signature(name);
    if (!sig) unbound("unknown signature '" + name + "'");
    return sig;
  }

  void parse_signature() {
    expect("signature");
    std::string name = ident();
    expect("over");
    auto cat = category_named(ident());
    category_ = cat.get();
    std::vector<OpDecl> ops;
    expect("{");
    while (!accept("}")) {
      expect("op");
      OpDecl op;
      op.name = ident();
      expect(":");
      op.param = type();
      expect("~>");
      op.arity = type();
      expect("@");
      op.grade = morphism();
      expect(";");
      ops.push_back(std::move(op));
    }
    category_ = nullptr;
    theory_.signatures.push_back(build_signature(name, cat, std::move(ops)));
  }

  void parse_alias() {
    expect("type");
    std::string name = ident();
    expect("=");
    category_ = nullptr;
    TypePtr t = type();
    expect(";");
    aliases_[name] = t;
    theory_.type_aliases.push_back({name, t});
  }

  void parse_handler() {
    expect("handler");
    auto h = std::make_shared<HandlerDecl>();
    h->name = ident();
    if (theory_.handler(h->name)) {
      fail(ErrorKind::DuplicateName, where() + "handler '" + h->name +
                                         "' declared twice");
    }
    expect("over");
    h->source = signature_named(ident());
    expect("to");
    h->target = signature_named(ident());
    expect("via");
    std::string fname = ident();
    h->functor = theory_.functor(fname);
    if (!h->functor) unbound("unknown functor '" + fname + "'");
    if (h->functor->source_ptr() != h->source->category_ptr() ||
        h->functor->target_ptr() != h->target->category_ptr()) {
      fail(ErrorKind::SignatureMismatch,
           where() + "functor " + fname + " does not map " +
               h->source->category().name() + " to " +
               h->target->category().name());
    }
    expect("at");
    category_ = &h->source->category();
    h->at = object();
    expect(":");
    h->handled = type();
    expect("=>");
    h->result = type();
    expect("{");
    bool has_return = false;
    while (!accept("}")) {
      if (accept("return")) {
        if (has_return) error("second return clause");
        has_return = true;
        h->return_var = binder();
        expect("=>");
        h->return_body = comp_in(h->target);
      } else {
        expect("op");
        Clause c;
        c.op = ident();
        if (h->source->find(c.op) == nullptr) {
          --pos_;
          unbound("operation '" + c.op + "' is not in " + h->source->name());
        }
        expect("(");
        c.param = binder();
        expect(")");
        expect(",");
        c.resume = binder();
        if (accept("@")) {
          category_ = &h->source->category();
          c.k = morphism();
        }
        expect("=>");
        c.body = comp_in(h->target);
        h->clauses.push_back(std::move(c));
      }
      expect(";");
    }
    if (!has_return) error("handler " + h->name + " has no return clause");
    category_ = nullptr;
    theory_.handlers.push_back(h);
  }

  void parse_program() {
    expect("program");
    Program p;
    p.name = ident();
    if (theory_.program(p.name) != nullptr) {
      fail(ErrorKind::DuplicateName,
           where() + "program '" + p.name + "' declared twice");
    }
    expect("over");
    p.signature = signature_named(ident());
    category_ = &p.signature->category();
    expect(":");
    p.type = type();
    expect("@");
    p.grade = morphism();
    expect("{");
    p.body = comp_in(p.signature);
    expect("}");
    category_ = nullptr;
    theory_.programs.push_back(std::move(p));
  }

  // Types.

  auto type() -> TypePtr {
    TypePtr t = sum_type();
    if (accept("->")) {
      TypePtr r = type();
      expect("@");
      return Type::arrow(t, r, morphism());
    }
    return t;
  }

  auto sum_type() -> TypePtr {
    TypePtr t = prod_type();
    while (accept("+")) t = Type::sum(t, prod_type());
    return t;
  }

  auto prod_type() -> TypePtr {
    TypePtr t = atom_type();
    while (accept("*")) t = Type::prod(t, atom_type());
    return t;
  }

  auto atom_type() -> TypePtr {
    if (accept("(")) {
      TypePtr t = type();
      expect(")");
      return t;
    }
    std::string name = ident();
    if (name == "1") return Type::unit();
    auto it = aliases_.find(name);
    if (it == aliases_.end()) {
      --pos_;
      unbound("unknown type '" + name + "'");
    }
    return it->second;
  }

  // Terms.

  auto comp_in(const std::shared_ptr<const GradedSignature>& sig) -> CompPtr {
    const GradedSignature* saved = sig_;
    const GradingCategory* saved_cat = category_;
    sig_ = sig.get();
    category_ = &sig->category();
    CompPtr c = comp();
    sig_ = saved;
    category_ = saved_cat;
    return c;
  }

  // Name of the handler closing the `handle` at the current position.
  auto lookahead_handler() const -> std::string {
    int depth = 1;
    for (std::size_t i = pos_; i < toks_.size(); ++i) {
      if (toks_[i].kind != Token::Kind::Ident) continue;
      if (toks_[i].text == "handle") ++depth;
      if (toks_[i].text == "with" && --depth == 0) {
        if (i + 1 < toks_.size() && toks_[i + 1].kind == Token::Kind::Ident) {
          return toks_[i + 1].text;
        }
        break;
      }
    }
    error("'handle' without a matching 'with'");
  }

  auto comp() -> CompPtr {
    if (accept("val")) {
      Object a = object();
      return val(a, value());
    }
    if (accept("let")) {
      std::string x = binder();
      expect("<-");
      CompPtr m = comp();
      expect("in");
      return let(x, m, comp());
    }
    if (accept("do")) {
      std::string op = ident();
      if (sig_->find(op) == nullptr) {
        --pos_;
        unbound("operation '" + op + "' is not in " + sig_->name());
      }
      expect("(");
      ValuePtr v = value();
      expect(")");
      return op_call(op, v);
    }
    if (accept("split")) {
      ValuePtr v = value();
      expect("as");
      expect("(");
      std::string x = binder();
      expect(",");
      std::string y = binder();
      expect(")");
      expect("in");
      return split(v, x, y, comp());
    }
    if (accept("case")) {
      ValuePtr v = value();
      expect("of");
      expect("inl");
      std::string x = binder();
      expect("=>");
      CompPtr l = comp();
      expect("|");
      expect("inr");
      std::string y = binder();
      expect("=>");
      return case_of(v, x, l, y, comp());
    }
    if (accept("handle")) {
      std::string name = lookahead_handler();
      HandlerPtr h = theory_.handler(name);
      if (!h) unbound("unknown handler '" + name + "'");
      CompPtr m = comp_in(h->source);
      expect("with");
      ident();
      return handle(m, h);
    }
    if (accept("weaken")) {
      Morphism g = morphism();
      expect("{");
      CompPtr m = comp();
      expect("}");
      return weaken(g, m, morphism());
    }
    if (is("(")) {
      std::size_t saved = pos_;
      try {
        ValuePtr f = value();
        return app(f, value());
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SyntaxError) throw;
        pos_ = saved;
      }
      expect("(");
      CompPtr c = comp();
      expect(")");
      return c;
    }
    ValuePtr f = value();
    return app(f, value());
  }

  auto value() -> ValuePtr {
    if (accept("inl")) {
      ValuePtr v = value();
      expect(":");
      return inl(v, type());
    }
    if (accept("inr")) {
      ValuePtr v = value();
      expect(":");
      return inr(v, type());
    }
    if (accept("fun")) {
      expect("^");
      Morphism g = morphism();
      expect("(");
      std::string x = binder();
      expect(":");
      TypePtr t = type();
      expect(")");
      expect("=>");
      return lam(g, x, t, comp());
    }
    if (accept("(")) {
      if (accept(")")) return star();
      ValuePtr v = value();
      if (accept(",")) {
        ValuePtr w = value();
        expect(")");
        return pair(v, w);
      }
      expect(")");
      return v;
    }
    if (peek().kind == Token::Kind::Ident && kReserved.count(peek().text) == 0) {
      return var(ident());
    }
    error("expected a value, found " + describe(peek()));
  }

  std::vector<Token> toks_;
  std::string_view file_;
  std::size_t pos_ = 0;
  Theory theory_;
  std::map<std::string, TypePtr> aliases_;
  const GradedSignature* sig_ = nullptr;
  const GradingCategory* category_ = nullptr;
};

}  // namespace

auto parse_theory(std::string_view source, std::string_view filename)
    -> Theory {
  Lexer lexer(source, filename);
  Parser parser(lexer.run(), filename);
  return parser.run();
}

auto parse_file(const std::string& path) -> Theory {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::SyntaxError, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_theory(buf.str(), path);
}

}  // namespace cateff
