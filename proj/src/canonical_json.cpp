#include "hdp/canonical_json.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

namespace hdp::json {

namespace {

constexpr int kMaxDepth = 512;
constexpr double kMaxSafeInteger = 9007199254740992.0;  // 2^53

[[noreturn]] void fail(Errc code, const std::string& detail) { throw Error(code, detail); }

// Decodes one code point of strict UTF-8; returns U+FFFD and advances one byte
// on bad input when lenient (used by the comparator, which must not throw).
uint32_t decode_utf8(std::string_view s, size_t& i, bool lenient) {
  const auto bad = [&](const char* why) -> uint32_t {
    if (lenient) {
      ++i;
      return 0xFFFD;
    }
    fail(Errc::MalformedJson, std::string("invalid UTF-8: ") + why);
  };
  uint8_t b0 = static_cast<uint8_t>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len;
  uint32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return bad("bad leading byte");
  }
  if (i + len > s.size()) return bad("truncated sequence");
  for (int k = 1; k < len; ++k) {
    uint8_t b = static_cast<uint8_t>(s[i + k]);
    if ((b & 0xC0) != 0x80) return bad("bad continuation byte");
    cp = (cp << 6) | (b & 0x3F);
  }
  // overlong / out-of-range / surrogate code points
  static constexpr uint32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len]) return bad("overlong sequence");
  if (cp > 0x10FFFF) return bad("code point above U+10FFFF");
  if (cp >= 0xD800 && cp <= 0xDFFF) {
    if (lenient) {
      i += len;
      return 0xFFFD;
    }
    fail(Errc::UnpairedSurrogate, "surrogate code point in UTF-8 data");
  }
  i += len;
  return cp;
}

void append_utf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Next UTF-16 code unit of a UTF-8 string; `pending` carries the low
// surrogate of a supplementary-plane character across calls.
uint32_t next_utf16_unit(std::string_view s, size_t& i, uint32_t& pending) {
  if (pending != 0) {
    uint32_t u = pending;
    pending = 0;
    return u;
  }
  uint32_t cp = decode_utf8(s, i, /*lenient=*/true);
  if (cp >= 0x10000) {
    cp -= 0x10000;
    pending = 0xDC00 + (cp & 0x3FF);
    return 0xD800 + (cp >> 10);
  }
  return cp;
}

void serialize_string(std::string& out, std::string_view s) {
  out += '"';
  size_t i = 0;
  while (i < s.size()) {
    uint8_t b = static_cast<uint8_t>(s[i]);
    if (b < 0x20) {
      switch (b) {
        case 0x08: out += "\\b"; break;
        case 0x09: out += "\\t"; break;
        case 0x0A: out += "\\n"; break;
        case 0x0C: out += "\\f"; break;
        case 0x0D: out += "\\r"; break;
        default: {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", b);
          out += buf;
        }
      }
      ++i;
    } else if (b == '"') {
      out += "\\\"";
      ++i;
    } else if (b == '\\') {
      out += "\\\\";
      ++i;
    } else if (b < 0x80) {
      out += static_cast<char>(b);
      ++i;
    } else {
      size_t start = i;
      decode_utf8(s, i, /*lenient=*/false);  // validates; throws on bad data
      out.append(s.substr(start, i - start));
    }
  }
  out += '"';
}

void serialize(std::string& out, const Value& v) {
  if (v.is_null()) {
    out += "null";
  } else if (v.is_bool()) {
    out += v.as_bool() ? "true" : "false";
  } else if (v.is_number()) {
    out += number_to_string(v.as_number());
  } else if (v.is_string()) {
    serialize_string(out, v.as_string());
  } else if (v.is_array()) {
    out += '[';
    bool first = true;
    for (const Value& e : v.as_array()) {
      if (!first) out += ',';
      first = false;
      serialize(out, e);
    }
    out += ']';
  } else {
    out += '{';
    bool first = true;
    for (const auto& [key, val] : v.as_object()) {
      if (!first) out += ',';
      first = false;
      serialize_string(out, key);
      out += ':';
      serialize(out, val);
    }
    out += '}';
  }
}

struct Parser {
  std::string_view s;
  size_t pos = 0;
  int depth = 0;

  [[noreturn]] void err(const std::string& why) {
    fail(Errc::MalformedJson, why + " at offset " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < s.size()) {
      char c = s[pos];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos;
      } else {
        break;
      }
    }
  }

  char peek() {
    if (pos >= s.size()) err("unexpected end of input");
    return s[pos];
  }

  void expect(char c) {
    if (pos >= s.size() || s[pos] != c) err(std::string("expected '") + c + "'");
    ++pos;
  }

  bool consume_literal(std::string_view lit) {
    if (s.substr(pos, lit.size()) == lit) {
      pos += lit.size();
      return true;
    }
    return false;
  }

  Value parse_value() {
    if (++depth > kMaxDepth) err("nesting too deep");
    skip_ws();
    char c = peek();
    Value v = [&]() -> Value {
      switch (c) {
        case '{': return parse_object();
        case '[': return parse_array();
        case '"': return Value(parse_string());
        case 't':
          if (consume_literal("true")) return Value(true);
          err("invalid literal");
        case 'f':
          if (consume_literal("false")) return Value(false);
          err("invalid literal");
        case 'n':
          if (consume_literal("null")) return Value(nullptr);
          err("invalid literal");
        default: return parse_number();
      }
    }();
    --depth;
    return v;
  }

  Value parse_object() {
    expect('{');
    Object obj;
    skip_ws();
    if (peek() == '}') {
      ++pos;
      return Value(std::move(obj));
    }
    while (true) {
      skip_ws();
      if (peek() != '"') err("expected object key");
      std::string key = parse_string();
      skip_ws();
      expect(':');
      Value val = parse_value();
      if (!obj.emplace(std::move(key), std::move(val)).second) {
        fail(Errc::DuplicateKey, "duplicate object key at offset " + std::to_string(pos));
      }
      skip_ws();
      char c = peek();
      if (c == ',') {
        ++pos;
      } else if (c == '}') {
        ++pos;
        return Value(std::move(obj));
      } else {
        err("expected ',' or '}'");
      }
    }
  }

  Value parse_array() {
    expect('[');
    Array arr;
    skip_ws();
    if (peek() == ']') {
      ++pos;
      return Value(std::move(arr));
    }
    while (true) {
      arr.push_back(parse_value());
      skip_ws();
      char c = peek();
      if (c == ',') {
        ++pos;
      } else if (c == ']') {
        ++pos;
        return Value(std::move(arr));
      } else {
        err("expected ',' or ']'");
      }
    }
  }

  uint32_t parse_hex4() {
    if (pos + 4 > s.size()) err("truncated \\u escape");
    uint32_t v = 0;
    for (int k = 0; k < 4; ++k) {
      char c = s[pos + k];
      v <<= 4;
      if (c >= '0' && c <= '9') {
        v |= static_cast<uint32_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        v |= static_cast<uint32_t>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        v |= static_cast<uint32_t>(c - 'A' + 10);
      } else {
        err("bad hex digit in \\u escape");
      }
    }
    pos += 4;
    return v;
  }

  std::string parse_string() {
    expect('"');
    std::string out;
    while (true) {
      if (pos >= s.size()) err("unterminated string");
      uint8_t b = static_cast<uint8_t>(s[pos]);
      if (b == '"') {
        ++pos;
        return out;
      }
      if (b < 0x20) err("raw control character in string");
      if (b == '\\') {
        ++pos;
        if (pos >= s.size()) err("truncated escape");
        char e = s[pos++];
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case '/': out += '/'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 't': out += '\t'; break;
          case 'u': {
            uint32_t u = parse_hex4();
            if (u >= 0xD800 && u <= 0xDBFF) {
              // high surrogate: a low-surrogate escape must follow
              if (pos + 2 > s.size() || s[pos] != '\\' || s[pos + 1] != 'u') {
                fail(Errc::UnpairedSurrogate, "high surrogate not followed by low surrogate");
              }
              pos += 2;
              uint32_t lo = parse_hex4();
              if (lo < 0xDC00 || lo > 0xDFFF) {
                fail(Errc::UnpairedSurrogate, "high surrogate not followed by low surrogate");
              }
              append_utf8(out, 0x10000 + ((u - 0xD800) << 10) + (lo - 0xDC00));
            } else if (u >= 0xDC00 && u <= 0xDFFF) {
              fail(Errc::UnpairedSurrogate, "lone low surrogate escape");
            } else {
              append_utf8(out, u);
            }
            break;
          }
          default: err("invalid escape character");
        }
      } else if (b < 0x80) {
        out += static_cast<char>(b);
        ++pos;
      } else {
        size_t start = pos;
        decode_utf8(s, pos, /*lenient=*/false);
        out.append(s.substr(start, pos - start));
      }
    }
  }

  Value parse_number() {
    size_t start = pos;
    if (pos < s.size() && s[pos] == '-') ++pos;
    // int part: 0, or nonzero digit followed by digits
    if (pos >= s.size()) err("truncated number");
    if (s[pos] == '0') {
      ++pos;
    } else if (s[pos] >= '1' && s[pos] <= '9') {
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    } else {
      err("invalid number");
    }
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      if (pos >= s.size() || s[pos] < '0' || s[pos] > '9') err("invalid number");
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    }
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
      ++pos;
      if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
      if (pos >= s.size() || s[pos] < '0' || s[pos] > '9') err("invalid number");
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data() + start, s.data() + pos, value);
    if (ec == std::errc::result_out_of_range) err("number out of double range");
    if (ec != std::errc() || ptr != s.data() + pos) err("invalid number");
    return Value(value);
  }
};

}  // namespace

bool Utf16Less::operator()(std::string_view a, std::string_view b) const noexcept {
  size_t ia = 0, ib = 0;
  uint32_t pa = 0, pb = 0;
  while (true) {
    bool ea = ia >= a.size() && pa == 0;
    bool eb = ib >= b.size() && pb == 0;
    if (ea || eb) return ea && !eb;
    uint32_t ua = next_utf16_unit(a, ia, pa);
    uint32_t ub = next_utf16_unit(b, ib, pb);
    if (ua != ub) return ua < ub;
  }
}

Value::Value(double d) : data_(d) {
  if (!std::isfinite(d)) throw Error(Errc::NonFiniteNumber, "number must be finite");
}

Value::Value(int64_t v) : data_(static_cast<double>(v)) {
  if (v > static_cast<int64_t>(kMaxSafeInteger) || v < -static_cast<int64_t>(kMaxSafeInteger)) {
    throw Error(Errc::IntegerOutOfRange, "integer magnitude exceeds 2^53");
  }
}

bool Value::as_bool() const {
  if (!is_bool()) throw Error(Errc::WrongFieldType, "expected boolean");
  return std::get<bool>(data_);
}

double Value::as_number() const {
  if (!is_number()) throw Error(Errc::WrongFieldType, "expected number");
  return std::get<double>(data_);
}

const std::string& Value::as_string() const {
  if (!is_string()) throw Error(Errc::WrongFieldType, "expected string");
  return std::get<std::string>(data_);
}

const Array& Value::as_array() const {
  if (!is_array()) throw Error(Errc::WrongFieldType, "expected array");
  return std::get<Array>(data_);
}

Array& Value::as_array() {
  if (!is_array()) throw Error(Errc::WrongFieldType, "expected array");
  return std::get<Array>(data_);
}

const Object& Value::as_object() const {
  if (!is_object()) throw Error(Errc::WrongFieldType, "expected object");
  return std::get<Object>(data_);
}

Object& Value::as_object() {
  if (!is_object()) throw Error(Errc::WrongFieldType, "expected object");
  return std::get<Object>(data_);
}

std::string number_to_string(double value) {
  if (!std::isfinite(value)) throw Error(Errc::NonFiniteNumber, "number must be finite");
  if (value == 0.0) return "0";  // covers -0 per ECMAScript
  std::string out;
  if (std::signbit(value)) {
    out += '-';
    value = -value;
  }
  // Shortest round-trip digits via scientific to_chars, reformatted with the
  // ECMAScript Number::toString(10) layout rules.
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
  std::string_view sv(buf, static_cast<size_t>(res.ptr - buf));
  size_t epos = sv.find('e');
  std::string digits;
  digits += sv[0];
  if (epos > 1 && sv[1] == '.') digits.append(sv.substr(2, epos - 2));
  int exp10 = 0;
  const char* ebeg = sv.data() + epos + 1;
  if (*ebeg == '+') ++ebeg;  // from_chars rejects an explicit plus
  std::from_chars(ebeg, sv.data() + sv.size(), exp10);
  const int k = static_cast<int>(digits.size());
  const int n = exp10 + 1;  // decimal point position relative to digits
  if (k <= n && n <= 21) {
    out += digits;
    out.append(static_cast<size_t>(n - k), '0');
  } else if (0 < n && n <= 21) {
    out += digits.substr(0, static_cast<size_t>(n));
    out += '.';
    out += digits.substr(static_cast<size_t>(n));
  } else if (-6 < n && n <= 0) {
    out += "0.";
    out.append(static_cast<size_t>(-n), '0');
    out += digits;
  } else {
    if (k == 1) {
      out += digits;
    } else {
      out += digits[0];
      out += '.';
      out += digits.substr(1);
    }
    out += 'e';
    int e = n - 1;
    out += e < 0 ? '-' : '+';
    out += std::to_string(e < 0 ? -e : e);
  }
  return out;
}

std::string canonicalize(const Value& value) {
  std::string out;
  serialize(out, value);
  return out;
}

Value parse(std::string_view bytes) {
  Parser p{bytes};
  Value v = p.parse_value();
  p.skip_ws();
  if (p.pos != bytes.size()) p.err("trailing data after JSON value");
  return v;
}

namespace {

void pretty(std::string& out, const Value& v, int indent, int level) {
  const std::string pad(static_cast<size_t>(indent) * (level + 1), ' ');
  const std::string close_pad(static_cast<size_t>(indent) * level, ' ');
  if (v.is_array()) {
    const Array& arr = v.as_array();
    if (arr.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (size_t i = 0; i < arr.size(); ++i) {
      out += pad;
      pretty(out, arr[i], indent, level + 1);
      if (i + 1 < arr.size()) out += ',';
      out += '\n';
    }
    out += close_pad;
    out += ']';
  } else if (v.is_object()) {
    const Object& obj = v.as_object();
    if (obj.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    size_t i = 0;
    for (const auto& [key, val] : obj) {
      out += pad;
      serialize_string(out, key);
      out += ": ";
      pretty(out, val, indent, level + 1);
      if (++i < obj.size()) out += ',';
      out += '\n';
    }
    out += close_pad;
    out += '}';
  } else {
    serialize(out, v);
  }
}

}  // namespace

std::string dump_pretty(const Value& value, int indent) {
  std::string out;
  pretty(out, value, indent, 0);
  return out;
}

}  // namespace hdp::json
