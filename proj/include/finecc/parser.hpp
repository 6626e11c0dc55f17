#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "finecc/lexer.hpp"
#include "finecc/schema.hpp"

namespace finecc {

namespace detail {

inline std::vector<std::string> parse_ident_list(TokenCursor& cur) {
  std::vector<std::string> out;
  out.push_back(cur.expect_ident("field name").text);
  while (cur.accept(",")) out.push_back(cur.expect_ident("field name").text);
  return out;
}

inline FieldType parse_type(TokenCursor& cur) {
  const Token& t = cur.expect_ident("type");
  if (t.text == "int") return {BaseType::Int, {}};
  if (t.text == "bool") return {BaseType::Bool, {}};
  if (t.text == "float") return {BaseType::Float, {}};
  if (t.text == "string") return {BaseType::String, {}};
  if (t.text == "ref") return {BaseType::Ref, cur.expect_ident("class name").text};
  throw Error(ErrorKind::Syntax, "unknown type '" + t.text + "'", t.pos);
}

inline Statement parse_statement(TokenCursor& cur) {
  SourcePos pos = cur.peek().pos;
  // An identifier followed by ':=' is an assignment even if it spells a
  // keyword.
  if (cur.peek().kind == TokenKind::Ident && cur.is(":=", 1)) {
    Assign a;
    a.target = cur.expect_ident().text;
    cur.expect(":=");
    cur.expect("expr");
    cur.expect("(");
    if (!cur.is(")")) a.reads = parse_ident_list(cur);
    cur.expect(")");
    cur.expect(";");
    return {std::move(a), pos};
  }
  if (cur.accept("use")) {
    cur.expect("(");
    Use u{parse_ident_list(cur)};
    cur.expect(")");
    cur.expect(";");
    return {std::move(u), pos};
  }
  if (cur.accept("send")) {
    std::string first = cur.expect_ident("method name").text;
    if (cur.accept(".")) {
      std::string method = cur.expect_ident("method name").text;
      cur.expect("to");
      cur.expect("self");
      cur.expect(";");
      return {PrefixedSend{std::move(first), std::move(method)}, pos};
    }
    cur.expect("to");
    std::string target = cur.expect_ident("'self' or field name").text;
    cur.expect(";");
    if (target == "self") return {SelfSend{std::move(first)}, pos};
    return {FieldSend{std::move(target), std::move(first)}, pos};
  }
  cur.fail("expected statement");
}

inline MethodDef parse_method(TokenCursor& cur) {
  MethodDef m;
  m.pos = cur.expect("method").pos;
  m.name = cur.expect_ident("method name").text;
  cur.expect("{");
  while (!cur.is("}")) {
    if (cur.at_end()) cur.fail("expected '}'");
    m.body.push_back(parse_statement(cur));
  }
  cur.expect("}");
  return m;
}

inline ClassDef parse_class(TokenCursor& cur) {
  ClassDef c;
  c.pos = cur.expect("class").pos;
  c.name = cur.expect_ident("class name").text;
  if (cur.accept("inherits")) {
    c.supers.push_back(cur.expect_ident("class name").text);
    while (cur.accept(",")) c.supers.push_back(cur.expect_ident("class name").text);
  }
  cur.expect("{");
  if (cur.accept("fields")) {
    cur.expect("{");
    while (!cur.is("}")) {
      FieldDecl f;
      const Token& name = cur.expect_ident("field name");
      f.name = name.text;
      f.pos = name.pos;
      cur.expect(":");
      f.type = parse_type(cur);
      cur.expect(";");
      c.own_fields.push_back(std::move(f));
    }
    cur.expect("}");
  }
  while (cur.is("method")) c.own_methods.push_back(parse_method(cur));
  cur.expect("}");
  return c;
}

inline std::string_view type_keyword(BaseType b) {
  switch (b) {
    case BaseType::Int: return "int";
    case BaseType::Bool: return "bool";
    case BaseType::Float: return "float";
    case BaseType::String: return "string";
    case BaseType::Ref: return "ref";
  }
  return "int";
}

inline std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

}  // namespace detail

// Parses and validates schema source. Throws Error with a source position.
inline ClassModel parse_schema(std::string_view text) {
  TokenCursor cur(tokenize(text));
  std::vector<ClassDef> classes;
  while (!cur.at_end()) classes.push_back(detail::parse_class(cur));
  return ClassModel::build(std::move(classes));
}

inline std::string print_statement(const Statement& st) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Assign>) {
          return s.target + " := expr(" + detail::join_names(s.reads) + ");";
        } else if constexpr (std::is_same_v<T, Use>) {
          return "use(" + detail::join_names(s.reads) + ");";
        } else if constexpr (std::is_same_v<T, SelfSend>) {
          return "send " + s.method + " to self;";
        } else if constexpr (std::is_same_v<T, PrefixedSend>) {
          return "send " + s.ancestor + "." + s.method + " to self;";
        } else {
          return "send " + s.method + " to " + s.field + ";";
        }
      },
      st.kind);
}

// Canonical source for a model; parse_schema(print_schema(m)) == m.
inline std::string print_schema(const ClassModel& model) {
  std::string out;
  bool first_class = true;
  for (const auto& c : model.classes()) {
    if (!first_class) out += '\n';
    first_class = false;
    out += "class " + c.name;
    if (!c.supers.empty()) out += " inherits " + detail::join_names(c.supers);
    out += " {\n";
    if (!c.own_fields.empty()) {
      out += "  fields {\n";
      for (const auto& f : c.own_fields) {
        out += "    " + f.name + ": " + std::string(detail::type_keyword(f.type.base));
        if (f.type.base == BaseType::Ref) out += " " + f.type.ref_class;
        out += ";\n";
      }
      out += "  }\n";
    }
    for (const auto& m : c.own_methods) {
      out += "  method " + m.name + " {";
      if (m.body.empty()) {
        out += " }\n";
        continue;
      }
      out += '\n';
      for (const auto& st : m.body) out += "    " + print_statement(st) + "\n";
      out += "  }\n";
    }
    out += "}\n";
  }
  return out;
}

}  // namespace finecc
