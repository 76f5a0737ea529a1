//===- Parser.cpp - .mir recursive-descent parser --------------------------===//

#include "wamic/TextIO.hpp"
#include "wamic/Verifier.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace wamic {

namespace {

enum class Tok {
  Eof,
  Ident,    // bare identifier
  Percent,  // %name
  At,       // @name
  Caret,    // ^name
  Int,      // integer literal (possibly hex)
  Float,    // float literal
  Str,      // "..."
  LBrace,
  RBrace,
  LParen,
  RParen,
  Less,
  Greater,
  LBracket,
  RBracket,
  Comma,
  Equal,
  Colon,
  Arrow,
  Dot,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;   // identifier payload / raw literal text
  int64_t intVal = 0;
  bool isHex = false;
  double floatVal = 0;
  int line = 1, col = 1;
};

class Lexer {
public:
  Lexer(const std::string &src, std::string file)
      : src_(src), file_(std::move(file)) {}

  Token next() {
    skipWs();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::Eof;
      return t;
    }
    char c = src_[pos_];
    auto punct = [&](Tok k) {
      advance();
      t.kind = k;
      return t;
    };
    switch (c) {
    case '{':
      return punct(Tok::LBrace);
    case '}':
      return punct(Tok::RBrace);
    case '(':
      return punct(Tok::LParen);
    case ')':
      return punct(Tok::RParen);
    case '<':
      return punct(Tok::Less);
    case '>':
      return punct(Tok::Greater);
    case '[':
      return punct(Tok::LBracket);
    case ']':
      return punct(Tok::RBracket);
    case ',':
      return punct(Tok::Comma);
    case '=':
      return punct(Tok::Equal);
    case ':':
      return punct(Tok::Colon);
    case '.':
      return punct(Tok::Dot);
    default:
      break;
    }
    if (c == '-') {
      if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        advance();
        advance();
        t.kind = Tok::Arrow;
        return t;
      }
      if (pos_ + 1 < src_.size() && std::isdigit((unsigned char)src_[pos_ + 1]))
        return lexNumber(t);
      t.kind = Tok::Eof;
      error_ = "unexpected '-'";
      return t;
    }
    if (c == '%' || c == '@' || c == '^') {
      advance();
      t.kind = c == '%' ? Tok::Percent : c == '@' ? Tok::At : Tok::Caret;
      t.text = lexIdentText();
      if (t.text.empty())
        error_ = "expected identifier after sigil";
      return t;
    }
    if (c == '"') {
      advance();
      t.kind = Tok::Str;
      while (pos_ < src_.size() && src_[pos_] != '"') {
        t.text += src_[pos_];
        advance();
      }
      if (pos_ < src_.size())
        advance();
      else
        error_ = "unterminated string";
      return t;
    }
    if (std::isdigit((unsigned char)c))
      return lexNumber(t);
    if (std::isalpha((unsigned char)c) || c == '_') {
      t.kind = Tok::Ident;
      t.text = lexIdentText();
      return t;
    }
    error_ = std::string("unexpected character '") + c + "'";
    t.kind = Tok::Eof;
    return t;
  }

  const std::string &error() const { return error_; }
  const std::string &file() const { return file_; }

private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skipWs() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n')
          advance();
      } else if (std::isspace((unsigned char)c)) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string lexIdentText() {
    std::string s;
    while (pos_ < src_.size() &&
           (std::isalnum((unsigned char)src_[pos_]) || src_[pos_] == '_')) {
      s += src_[pos_];
      advance();
    }
    return s;
  }

  Token lexNumber(Token &t) {
    std::string s;
    if (src_[pos_] == '-') {
      s += '-';
      advance();
    }
    if (pos_ + 1 < src_.size() && src_[pos_] == '0' &&
        (src_[pos_ + 1] == 'x' || src_[pos_ + 1] == 'X')) {
      advance();
      advance();
      std::string hex;
      while (pos_ < src_.size() && std::isxdigit((unsigned char)src_[pos_])) {
        hex += src_[pos_];
        advance();
      }
      t.kind = Tok::Int;
      t.isHex = true;
      t.intVal = static_cast<int64_t>(strtoull(hex.c_str(), nullptr, 16));
      if (s == "-")
        t.intVal = -t.intVal;
      return t;
    }
    bool isFloat = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isdigit((unsigned char)c)) {
        s += c;
        advance();
      } else if (c == '.' || c == 'e' || c == 'E') {
        isFloat = true;
        s += c;
        advance();
        if ((c == 'e' || c == 'E') && pos_ < src_.size() &&
            (src_[pos_] == '+' || src_[pos_] == '-')) {
          s += src_[pos_];
          advance();
        }
      } else {
        break;
      }
    }
    if (isFloat) {
      t.kind = Tok::Float;
      t.floatVal = strtod(s.c_str(), nullptr);
      t.text = s;
    } else {
      t.kind = Tok::Int;
      t.intVal = strtoll(s.c_str(), nullptr, 10);
    }
    return t;
  }

  const std::string &src_;
  std::string file_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  std::string error_;
};

//===----------------------------------------------------------------------===//
// Parser
//===----------------------------------------------------------------------===//

class Parser {
public:
  Parser(const std::string &text, const std::string &file)
      : lexer_(text, file) {
    tok_ = lexer_.next();
    peek_ = lexer_.next();
    peek2_ = lexer_.next();
  }

  ParseResult run() {
    IrModule module;
    parseModuleBody(module);
    ParseResult result;
    if (!diags_.empty()) {
      result.diags = std::move(diags_);
      return result;
    }
    DiagList verify = verifyModule(module);
    if (!verify.empty()) {
      result.diags = std::move(verify);
      return result;
    }
    result.module = std::move(module);
    return result;
  }

private:
  Lexer lexer_;
  Token tok_, peek_, peek2_;
  DiagList diags_;
  bool fatal_ = false;

  Function *fn_ = nullptr;
  std::unordered_map<std::string, ValueId> valueNames_;

  SourceSpan here() const {
    SourceSpan s;
    s.file = lexer_.file();
    s.line = tok_.line;
    s.column = tok_.col;
    s.length = static_cast<int>(tok_.text.size());
    return s;
  }

  void error(const std::string &msg) {
    if (fatal_)
      return;
    diags_.push_back(diag("SyntaxError", msg, here()));
    fatal_ = true;
  }

  void bump() {
    if (!lexer_.error().empty() && !fatal_) {
      diags_.push_back(diag("SyntaxError", lexer_.error(), here()));
      fatal_ = true;
    }
    tok_ = peek_;
    peek_ = peek2_;
    peek2_ = lexer_.next();
  }

  bool at(Tok k) const { return tok_.kind == k; }
  bool atIdent(const char *s) const {
    return tok_.kind == Tok::Ident && tok_.text == s;
  }

  bool expect(Tok k, const char *what) {
    if (!at(k)) {
      error(std::string("expected ") + what);
      return false;
    }
    bump();
    return true;
  }

  std::string expectIdent(const char *what) {
    if (!at(Tok::Ident)) {
      error(std::string("expected ") + what);
      return "";
    }
    std::string s = tok_.text;
    bump();
    return s;
  }

  //===------------------------------------------------------------------===//
  // Types
  //===------------------------------------------------------------------===//

  std::optional<TypeKind> scalarKind(const std::string &name) {
    if (name == "i32")
      return TypeKind::I32;
    if (name == "i64")
      return TypeKind::I64;
    if (name == "f32")
      return TypeKind::F32;
    if (name == "f64")
      return TypeKind::F64;
    if (name == "index")
      return TypeKind::Index;
    return std::nullopt;
  }

  TypeDesc parseType() {
    if (at(Tok::LParen))
      return parseContSigType(); // bare "(..) -> (..)" only inside cont<>
    std::string name = expectIdent("type");
    if (fatal_)
      return TypeDesc::i32();
    if (auto k = scalarKind(name))
      return TypeDesc::scalar(*k);
    if (name == "funcref")
      return TypeDesc::funcRef();
    if (name == "memref") {
      if (!expect(Tok::Less, "'<'"))
        return TypeDesc::i32();
      // Shape idents lex as one token, e.g. "i32x4x4".
      std::string spec = expectIdent("memref shape");
      TypeKind elem;
      size_t at = 0;
      if (spec.rfind("i32x", 0) == 0) {
        elem = TypeKind::I32;
        at = 4;
      } else if (spec.rfind("i64x", 0) == 0) {
        elem = TypeKind::I64;
        at = 4;
      } else if (spec.rfind("f32x", 0) == 0) {
        elem = TypeKind::F32;
        at = 4;
      } else if (spec.rfind("f64x", 0) == 0) {
        elem = TypeKind::F64;
        at = 4;
      } else {
        error("memref element must be i32/i64/f32/f64");
        return TypeDesc::i32();
      }
      std::vector<int64_t> shape;
      std::string digits;
      for (size_t i = at; i <= spec.size(); ++i) {
        if (i == spec.size() || spec[i] == 'x') {
          if (digits.empty()) {
            error("malformed memref shape");
            return TypeDesc::i32();
          }
          shape.push_back(strtoll(digits.c_str(), nullptr, 10));
          digits.clear();
        } else if (std::isdigit((unsigned char)spec[i])) {
          digits += spec[i];
        } else {
          error("malformed memref shape");
          return TypeDesc::i32();
        }
      }
      if (!expect(Tok::Greater, "'>'"))
        return TypeDesc::i32();
      return TypeDesc::memRef(std::move(shape), elem);
    }
    if (name == "local") {
      if (!expect(Tok::Less, "'<'"))
        return TypeDesc::i32();
      TypeDesc inner = parseType();
      expect(Tok::Greater, "'>'");
      if (inner.kind == TypeKind::Local) {
        error("local may not wrap local");
        return TypeDesc::i32();
      }
      return TypeDesc::local(inner);
    }
    if (name == "cont") {
      if (!expect(Tok::Less, "'<'"))
        return TypeDesc::i32();
      TypeDesc t;
      if (at(Tok::At)) {
        t = TypeDesc::contRefNamed(tok_.text);
        bump();
      } else {
        t = parseContSigType();
      }
      expect(Tok::Greater, "'>'");
      return t;
    }
    error("unknown type '" + name + "'");
    return TypeDesc::i32();
  }

  TypeDesc parseContSigType() {
    std::vector<TypeDesc> params, results;
    parseTypeList(params);
    expect(Tok::Arrow, "'->'");
    parseTypeList(results);
    return TypeDesc::contRefSig(std::move(params), std::move(results));
  }

  void parseTypeList(std::vector<TypeDesc> &out) {
    if (!expect(Tok::LParen, "'('"))
      return;
    while (!at(Tok::RParen) && !fatal_) {
      out.push_back(parseType());
      if (at(Tok::Comma))
        bump();
      else
        break;
    }
    expect(Tok::RParen, "')'");
  }

  //===------------------------------------------------------------------===//
  // Attributes
  //===------------------------------------------------------------------===//

  std::vector<uint8_t> decodeHexBytes(const std::string &text) {
    std::vector<uint8_t> bytes;
    size_t start = 0;
    if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0)
      start = 2;
    if ((text.size() - start) % 2 != 0) {
      error("hex byte string must have even length");
      return bytes;
    }
    auto nib = [&](char c) -> int {
      if (c >= '0' && c <= '9')
        return c - '0';
      if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
      if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
      error("invalid hex digit in byte string");
      return 0;
    };
    for (size_t i = start; i + 1 < text.size(); i += 2)
      bytes.push_back(static_cast<uint8_t>(nib(text[i]) * 16 +
                                           nib(text[i + 1])));
    return bytes;
  }

  AttrValue parseDense() {
    // dense<"0x...."> | dense<[elems] : scalartype>
    expect(Tok::Less, "'<'");
    if (at(Tok::Str)) {
      std::string text = tok_.text;
      bump();
      expect(Tok::Greater, "'>'");
      return AttrValue::bytesAttr(decodeHexBytes(text));
    }
    if (!expect(Tok::LBracket, "'[' or string"))
      return AttrValue::bytesAttr({});
    struct Elem {
      bool isFloat;
      int64_t i;
      double f;
    };
    std::vector<Elem> elems;
    while (!at(Tok::RBracket) && !fatal_) {
      if (at(Tok::Int)) {
        elems.push_back({false, tok_.intVal, 0});
        bump();
      } else if (at(Tok::Float)) {
        elems.push_back({true, 0, tok_.floatVal});
        bump();
      } else {
        error("expected numeric dense element");
        break;
      }
      if (at(Tok::Comma))
        bump();
    }
    expect(Tok::RBracket, "']'");
    expect(Tok::Colon, "':' element type");
    TypeDesc elem = parseType();
    expect(Tok::Greater, "'>'");
    std::vector<uint8_t> bytes;
    auto appendLe = [&bytes](uint64_t v, int width) {
      for (int i = 0; i < width; ++i)
        bytes.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
    };
    for (const Elem &e : elems) {
      switch (elem.kind) {
      case TypeKind::I32:
      case TypeKind::Index:
        appendLe(static_cast<uint64_t>(static_cast<uint32_t>(e.isFloat
                                                                 ? (int64_t)e.f
                                                                 : e.i)),
                 4);
        break;
      case TypeKind::I64:
        appendLe(static_cast<uint64_t>(e.isFloat ? (int64_t)e.f : e.i), 8);
        break;
      case TypeKind::F32: {
        float f = e.isFloat ? (float)e.f : (float)e.i;
        uint32_t b;
        std::memcpy(&b, &f, 4);
        appendLe(b, 4);
        break;
      }
      case TypeKind::F64: {
        double d = e.isFloat ? e.f : (double)e.i;
        uint64_t b;
        std::memcpy(&b, &d, 8);
        appendLe(b, 8);
        break;
      }
      default:
        error("dense element type must be scalar");
        break;
      }
    }
    return AttrValue::bytesAttr(std::move(bytes));
  }

  AttrValue parseAttrValue() {
    if (at(Tok::At)) {
      std::string s = tok_.text;
      bump();
      return AttrValue::symbolAttr(std::move(s));
    }
    if (at(Tok::LParen)) {
      std::vector<TypeDesc> types;
      parseTypeList(types);
      return AttrValue::typeListAttr(std::move(types));
    }
    if (at(Tok::Int)) {
      int64_t v = tok_.intVal;
      bool hex = tok_.isHex;
      bump();
      TypeKind t = TypeKind::I32;
      if (at(Tok::Colon)) {
        bump();
        TypeDesc td = parseType();
        t = td.kind;
      }
      if (t == TypeKind::F32 || t == TypeKind::F64) {
        if (hex) // exact bit pattern
          return AttrValue::floatBitsAttr(static_cast<uint64_t>(v), t);
        return AttrValue::floatAttr(static_cast<double>(v), t);
      }
      return AttrValue::intAttr(v, t);
    }
    if (at(Tok::Float)) {
      double v = tok_.floatVal;
      bump();
      TypeKind t = TypeKind::F64;
      if (at(Tok::Colon)) {
        bump();
        TypeDesc td = parseType();
        t = td.kind;
      }
      return AttrValue::floatAttr(v, t);
    }
    if (atIdent("dense"))
      return bump(), parseDense();
    // Fall back to a type literal.
    TypeDesc t = parseType();
    return AttrValue::typeAttr(std::move(t));
  }

  void parseAttrDict(std::vector<NamedAttr> &attrs) {
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace) && !fatal_) {
      std::string key = expectIdent("attribute name");
      expect(Tok::Equal, "'='");
      attrs.emplace_back(key, parseAttrValue());
      if (at(Tok::Comma))
        bump();
      else
        break;
    }
    expect(Tok::RBrace, "'}'");
  }

  //===------------------------------------------------------------------===//
  // Values
  //===------------------------------------------------------------------===//

  ValueId defineValue(const std::string &name, TypeDesc type,
                      bool allowShadow = false) {
    if (valueNames_.count(name) && !allowShadow) {
      error("redefinition of value %" + name);
      return kNoValue;
    }
    ValueId v = fn_->newValue(std::move(type));
    valueNames_[name] = v;
    return v;
  }

  ValueId lookupValue(const std::string &name) {
    auto it = valueNames_.find(name);
    if (it == valueNames_.end()) {
      error("use of undefined value %" + name);
      return kNoValue;
    }
    return it->second;
  }

  //===------------------------------------------------------------------===//
  // Operations and blocks
  //===------------------------------------------------------------------===//

  std::unique_ptr<Operation> parseOp(std::vector<std::string> resultNames) {
    SourceSpan span = here();
    std::string dialect = expectIdent("dialect name");
    expect(Tok::Dot, "'.'");
    std::string opName = expectIdent("operation name");
    auto op = makeOp(dialect, opName);
    op->span = span;

    if (at(Tok::At)) {
      op->setAttr("sym", AttrValue::symbolAttr(tok_.text));
      bump();
    }

    std::vector<std::string> operandNames;
    bool sawSuccessor = false;
    while ((at(Tok::Percent) || at(Tok::Caret)) && !fatal_) {
      if (at(Tok::Percent)) {
        if (sawSuccessor)
          error("operands must precede successors");
        operandNames.push_back(tok_.text);
      } else {
        op->successors.push_back(tok_.text);
        sawSuccessor = true;
      }
      bump();
      if (at(Tok::Comma))
        bump();
      else
        break;
    }

    if (at(Tok::LBrace) && peek_.kind != Tok::Caret)
      parseAttrDict(op->attrs);

    while (at(Tok::LBrace) && peek_.kind == Tok::Caret && !fatal_) {
      op->regions.emplace_back();
      parseRegion(op->regions.back());
    }

    std::vector<TypeDesc> operandTypes, resultTypes;
    if (at(Tok::Colon)) {
      bump();
      parseTypeList(operandTypes);
      expect(Tok::Arrow, "'->'");
      parseTypeList(resultTypes);
    }

    if (operandTypes.size() != operandNames.size())
      error("operand count does not match the type signature");
    if (resultTypes.size() != resultNames.size())
      error("result count does not match the type signature");
    if (fatal_)
      return op;

    for (size_t i = 0; i < operandNames.size(); ++i) {
      ValueId v = lookupValue(operandNames[i]);
      if (v == kNoValue)
        return op;
      if (fn_->typeOf(v) != operandTypes[i]) {
        error("operand %" + operandNames[i] + " has type " +
              fn_->typeOf(v).str() + ", annotation says " +
              operandTypes[i].str());
        return op;
      }
      op->operands.push_back(v);
    }
    for (size_t i = 0; i < resultNames.size(); ++i) {
      ValueId v = defineValue(resultNames[i], resultTypes[i]);
      if (v == kNoValue)
        return op;
      op->results.push_back(v);
    }
    return op;
  }

  void parseBlockBody(Block &block) {
    while (!at(Tok::RBrace) && !at(Tok::Caret) && !at(Tok::Eof) && !fatal_) {
      std::vector<std::string> resultNames;
      if (at(Tok::Percent)) {
        while (at(Tok::Percent) && !fatal_) {
          resultNames.push_back(tok_.text);
          bump();
          if (at(Tok::Comma))
            bump();
          else
            break;
        }
        expect(Tok::Equal, "'='");
      }
      block.ops.push_back(parseOp(std::move(resultNames)));
    }
  }

  void parseBlockHeader(Block &block, bool bindArgs) {
    block.label = tok_.text;
    bump(); // caret id
    if (at(Tok::LParen)) {
      bump();
      while (!at(Tok::RParen) && !fatal_) {
        if (!at(Tok::Percent)) {
          error("expected block argument");
          break;
        }
        std::string name = tok_.text;
        bump();
        expect(Tok::Colon, "':'");
        TypeDesc t = parseType();
        if (bindArgs) {
          // Sibling regions may reuse block-argument names (the printer
          // renumbers uniquely, so shadowing only occurs in source).
          ValueId v = defineValue(name, std::move(t), /*allowShadow=*/true);
          block.args.push_back(v);
        }
        if (at(Tok::Comma))
          bump();
        else
          break;
      }
      expect(Tok::RParen, "')'");
    }
    expect(Tok::Colon, "':'");
  }

  void parseRegion(Region &region) {
    expect(Tok::LBrace, "'{'");
    while (at(Tok::Caret) && !fatal_) {
      region.blocks.emplace_back();
      Block &block = region.blocks.back();
      parseBlockHeader(block, /*bindArgs=*/true);
      parseBlockBody(block);
    }
    expect(Tok::RBrace, "'}'");
  }

  //===------------------------------------------------------------------===//
  // Functions and the module
  //===------------------------------------------------------------------===//

  void parseFunction(IrModule &module, FuncDialect dialect) {
    Function fn;
    fn.dialect = dialect;
    fn.span = here();
    bump(); // func keyword ident
    expect(Tok::Dot, "'.'");
    expectIdent("'func'");
    if (!at(Tok::At)) {
      error("expected function name");
      return;
    }
    fn.name = tok_.text;
    bump();

    fn_ = &fn;
    valueNames_.clear();

    std::vector<std::string> paramNames;
    expect(Tok::LParen, "'('");
    while (!at(Tok::RParen) && !fatal_) {
      if (!at(Tok::Percent)) {
        error("expected parameter name");
        break;
      }
      paramNames.push_back(tok_.text);
      bump();
      expect(Tok::Colon, "':'");
      fn.paramTypes.push_back(parseType());
      if (at(Tok::Comma))
        bump();
      else
        break;
    }
    expect(Tok::RParen, "')'");
    if (at(Tok::Arrow)) {
      bump();
      parseTypeList(fn.resultTypes);
    }
    if (atIdent("attributes")) {
      bump();
      std::vector<NamedAttr> attrs;
      parseAttrDict(attrs);
      for (const auto &[key, value] : attrs)
        if (key == "export" && value.kind == AttrKind::Int)
          fn.exported = value.intVal != 0;
    }

    expect(Tok::LBrace, "'{'");
    if (at(Tok::RBrace)) {
      // Empty body still owns an entry block holding the parameters.
      fn.body.blocks.emplace_back();
      Block &entry = fn.body.blocks.back();
      entry.label = "entry";
      for (size_t i = 0; i < paramNames.size(); ++i)
        entry.args.push_back(defineValue(paramNames[i], fn.paramTypes[i]));
    }
    bool first = true;
    while ((at(Tok::Caret) || (first && !at(Tok::RBrace))) && !fatal_) {
      fn.body.blocks.emplace_back();
      Block &block = fn.body.blocks.back();
      if (at(Tok::Caret)) {
        // The entry block's arguments are the function parameters; bind them
        // from the signature names instead of a redeclaration.
        parseBlockHeader(block, /*bindArgs=*/!first);
      } else {
        block.label = "entry";
      }
      if (first) {
        for (size_t i = 0; i < paramNames.size(); ++i) {
          ValueId v = defineValue(paramNames[i], fn.paramTypes[i]);
          block.args.push_back(v);
        }
      }
      parseBlockBody(block);
      first = false;
    }
    expect(Tok::RBrace, "'}'");

    fn_ = nullptr;
    module.functions.push_back(std::move(fn));
  }

  void parseModuleBody(IrModule &module) {
    if (!atIdent("module")) {
      error("expected 'module'");
      return;
    }
    bump();
    if (atIdent("attributes")) {
      bump();
      std::vector<NamedAttr> attrs;
      parseAttrDict(attrs);
      for (const auto &[key, value] : attrs) {
        if (key == "level" && value.kind == AttrKind::Symbol) {
          if (auto lvl = levelFromName(value.symbol))
            module.level = *lvl;
          else
            error("unknown module level '" + value.symbol + "'");
        }
      }
    }
    expect(Tok::LBrace, "'{'");

    Function moduleScope; // module-level ops carry no values
    while (!at(Tok::RBrace) && !at(Tok::Eof) && !fatal_) {
      // "<dialect>.func @..." starts a function definition; everything else
      // is a module-level operation.
      if (at(Tok::Ident) && peek_.kind == Tok::Dot &&
          peek2_.kind == Tok::Ident && peek2_.text == "func" &&
          (tok_.text == "func" || tok_.text == "ssawasm" ||
           tok_.text == "wasm")) {
        FuncDialect fd = tok_.text == "func"      ? FuncDialect::Func
                         : tok_.text == "ssawasm" ? FuncDialect::SsaWasm
                                                  : FuncDialect::Wasm;
        parseFunction(module, fd);
        continue;
      }
      fn_ = &moduleScope;
      module.ops.push_back(parseOp({}));
      fn_ = nullptr;
    }
    expect(Tok::RBrace, "'}'");
  }
};

} // namespace

ParseResult parseModule(const std::string &text, const std::string &fileName) {
  Parser p(text, fileName);
  return p.run();
}

ParseResult parseFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.diags.push_back(diag("FileError", "cannot open '" + path + "'"));
    return r;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseModule(ss.str(), path);
}

} // namespace wamic
