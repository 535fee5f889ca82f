#pragma once

// Protocol source syntax:
//
//   global := "end" | recvar | "rec" recvar "." global | prefix ";" global | branch
//   prefix := ident "->" ident ":" "<" ident ("," ident)* ">"
//   branch := ident "->" ident ":" "{" arm ("," arm)* "}"
//   arm    := ident ":" global
//
// "//" starts a comment running to end of line. A multi-sort payload is one
// composite sort named by the comma-joined segments.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ast.hpp"

namespace mpst {

// 1-based, inclusive on both ends.
struct SourceSpan {
  int start_line = 1;
  int start_col = 1;
  int end_line = 1;
  int end_col = 1;
};

enum class ParseErrorCode {
  Syntax,
  DuplicateLabel,
  SelfCommunication,
  UnboundRecVar,
  UnguardedRecursion,
};

class ParseError : public Error {
 public:
  ParseError(ParseErrorCode code, SourceSpan span, std::string message,
             std::vector<std::string> expected = {})
      : Error(message.empty() ? "parse error" : message),
        code_(code),
        span_(span),
        message_(message.empty() ? "parse error" : std::move(message)),
        expected_(std::move(expected)) {}

  ParseErrorCode code() const noexcept { return code_; }
  const SourceSpan& span() const noexcept { return span_; }
  const std::string& message() const noexcept { return message_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  ParseErrorCode code_;
  SourceSpan span_;
  std::string message_;
  std::vector<std::string> expected_;
};

namespace detail {

enum class TokKind { Ident, KwEnd, KwRec, Arrow, Colon, Semi, Dot, Comma, Lt, Gt, LBrace, RBrace, Eof };

struct Token {
  TokKind kind;
  std::string text;
  SourceSpan span;
};

inline const char* tok_name(TokKind k) {
  switch (k) {
    case TokKind::Ident: return "identifier";
    case TokKind::KwEnd: return "'end'";
    case TokKind::KwRec: return "'rec'";
    case TokKind::Arrow: return "'->'";
    case TokKind::Colon: return "':'";
    case TokKind::Semi: return "';'";
    case TokKind::Dot: return "'.'";
    case TokKind::Comma: return "','";
    case TokKind::Lt: return "'<'";
    case TokKind::Gt: return "'>'";
    case TokKind::LBrace: return "'{'";
    case TokKind::RBrace: return "'}'";
    case TokKind::Eof: return "end of input";
  }
  return "?";
}

inline std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto bump = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      bump(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') bump(1);
      continue;
    }
    SourceSpan span{line, col, line, col};
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = i;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        bump(1);
      std::string word(text.substr(start, i - start));
      span.end_line = line;
      span.end_col = col - 1;
      TokKind kind = word == "end"   ? TokKind::KwEnd
                     : word == "rec" ? TokKind::KwRec
                                     : TokKind::Ident;
      out.push_back({kind, std::move(word), span});
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      span.end_col = col + 1;
      out.push_back({TokKind::Arrow, "->", span});
      bump(2);
      continue;
    }
    TokKind kind;
    switch (c) {
      case ':': kind = TokKind::Colon; break;
      case ';': kind = TokKind::Semi; break;
      case '.': kind = TokKind::Dot; break;
      case ',': kind = TokKind::Comma; break;
      case '<': kind = TokKind::Lt; break;
      case '>': kind = TokKind::Gt; break;
      case '{': kind = TokKind::LBrace; break;
      case '}': kind = TokKind::RBrace; break;
      default:
        throw ParseError(ParseErrorCode::Syntax, span,
                         std::string("unexpected character '") + c + "'",
                         {"identifier", "'end'", "'rec'"});
    }
    out.push_back({kind, std::string(1, c), span});
    bump(1);
  }
  out.push_back({TokKind::Eof, "", {line, col, line, col}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  GlobalType parse() {
    GlobalType g = parse_global();
    expect(TokKind::Eof);
    return g;
  }

 private:
  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  Token advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  Token expect(TokKind kind) {
    if (peek().kind != kind)
      throw ParseError(ParseErrorCode::Syntax, peek().span,
                       std::string("expected ") + tok_name(kind) + ", found " +
                           tok_name(peek().kind),
                       {tok_name(kind)});
    return advance();
  }

  bool in_scope(const std::string& name) const {
    return std::find(scopes_.rbegin(), scopes_.rend(), name) != scopes_.rend();
  }

  GlobalType parse_global() {
    switch (peek().kind) {
      case TokKind::KwEnd:
        advance();
        return GlobalType::end();
      case TokKind::KwRec: {
        advance();
        Token name = expect(TokKind::Ident);
        expect(TokKind::Dot);
        scopes_.push_back(name.text);
        GlobalType body = parse_global();
        scopes_.pop_back();
        try {
          return GlobalType::rec(RecVar(name.text), std::move(body));
        } catch (const FormationError&) {
          throw ParseError(ParseErrorCode::UnguardedRecursion, name.span,
                           "recursion variable '" + name.text +
                               "' is unguarded; a communication must precede it");
        }
      }
      case TokKind::Ident:
        if (peek(1).kind == TokKind::Arrow) return parse_communication();
        {
          Token var = advance();
          if (!in_scope(var.text))
            throw ParseError(ParseErrorCode::UnboundRecVar, var.span,
                             "recursion variable '" + var.text + "' is not bound here");
          return GlobalType::var(RecVar(var.text));
        }
      default:
        throw ParseError(ParseErrorCode::Syntax, peek().span,
                         std::string("expected a global type, found ") + tok_name(peek().kind),
                         {"'end'", "'rec'", "identifier"});
    }
  }

  GlobalType parse_communication() {
    Token sender = expect(TokKind::Ident);
    expect(TokKind::Arrow);
    Token receiver = expect(TokKind::Ident);
    if (receiver.text == sender.text)
      throw ParseError(ParseErrorCode::SelfCommunication, receiver.span,
                       "participant '" + sender.text + "' talks to itself");
    expect(TokKind::Colon);
    if (peek().kind == TokKind::Lt) {
      advance();
      std::string sort = expect(TokKind::Ident).text;
      while (peek().kind == TokKind::Comma) {
        advance();
        sort += ',';
        sort += expect(TokKind::Ident).text;
      }
      expect(TokKind::Gt);
      expect(TokKind::Semi);
      GlobalType cont = parse_global();
      return GlobalType::seq(
          Prefix(Participant(sender.text), Participant(receiver.text), ValueSort(sort)),
          std::move(cont));
    }
    if (peek().kind == TokKind::LBrace) {
      advance();
      std::vector<GlobalType::Arm> arms;
      std::set<std::string> seen;
      while (true) {
        Token label = expect(TokKind::Ident);
        if (!seen.insert(label.text).second)
          throw ParseError(ParseErrorCode::DuplicateLabel, label.span,
                           "duplicate label '" + label.text + "' in branch");
        expect(TokKind::Colon);
        arms.push_back({Label(label.text), parse_global()});
        if (peek().kind == TokKind::Comma) {
          advance();
          continue;
        }
        break;
      }
      expect(TokKind::RBrace);
      return GlobalType::branch(Participant(sender.text), Participant(receiver.text),
                                std::move(arms));
    }
    throw ParseError(ParseErrorCode::Syntax, peek().span,
                     std::string("expected a payload or branch, found ") + tok_name(peek().kind),
                     {"'<'", "'{'"});
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::vector<std::string> scopes_;
};

}  // namespace detail

inline GlobalType parse_global(std::string_view text) { return detail::Parser(text).parse(); }

// Single-line canonical form; parse_global(print_global(g)) == g. Branch arms
// keep their source order.
inline std::string print_global(const GlobalType& g) {
  switch (g.kind()) {
    case GlobalType::Kind::End:
      return "end";
    case GlobalType::Kind::Var:
      return g.rec_var().name();
    case GlobalType::Kind::Rec:
      return "rec " + g.rec_var().name() + " . " + print_global(g.body());
    case GlobalType::Kind::Seq:
      return g.head().sender().name() + " -> " + g.head().receiver().name() + " : <" +
             payload_name(g.head().payload()) + "> ; " + print_global(g.continuation());
    case GlobalType::Kind::Branch: {
      std::string out = g.sender().name() + " -> " + g.receiver().name() + " : { ";
      bool first = true;
      for (const auto& arm : g.arms()) {
        if (!first) out += ", ";
        first = false;
        out += arm.label.name() + ": " + print_global(arm.body);
      }
      return out + " }";
    }
  }
  return {};
}

inline std::string print_local(const LocalType& t) {
  switch (t.kind()) {
    case LocalType::Kind::End:
      return "end";
    case LocalType::Kind::Var:
      return t.rec_var().name();
    case LocalType::Kind::Rec:
      return "rec " + t.rec_var().name() + " . " + print_local(t.body());
    case LocalType::Kind::Send:
      return t.peer().name() + "!<" + t.sort().name() + ">; " + print_local(t.continuation());
    case LocalType::Kind::Recv:
      return t.peer().name() + "?<" + t.sort().name() + ">; " + print_local(t.continuation());
    case LocalType::Kind::Select:
    case LocalType::Kind::Offer: {
      std::string out = t.peer().name() + (t.kind() == LocalType::Kind::Select ? " ⊕ {" : " & {");
      bool first = true;
      for (const auto& arm : t.arms()) {
        if (!first) out += ", ";
        first = false;
        out += arm.label.name() + ": " + print_local(arm.body);
      }
      return out + "}";
    }
  }
  return {};
}

}  // namespace mpst
