#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hdp/errors.hpp"

namespace hdp::json {

// Object key order required by RFC 8785: ascending UTF-16 code units of the
// key. Differs from byte order for keys mixing U+E000..U+FFFF with
// supplementary-plane characters.
struct Utf16Less {
  bool operator()(std::string_view a, std::string_view b) const noexcept;
  using is_transparent = void;
};

class Value;
using Array = std::vector<Value>;
using Object = std::map<std::string, Value, Utf16Less>;

// A JSON value: null, boolean, finite IEEE-754 double, UTF-8 string, array,
// or object with unique keys.
class Value {
 public:
  Value() noexcept : data_(nullptr) {}
  Value(std::nullptr_t) noexcept : data_(nullptr) {}
  Value(bool b) noexcept : data_(b) {}
  Value(double d);     // throws NonFiniteNumber
  Value(int i) : Value(static_cast<double>(i)) {}
  Value(int64_t v);    // throws IntegerOutOfRange beyond 2^53
  Value(const char* s) : data_(std::string(s)) {}
  Value(std::string s) noexcept : data_(std::move(s)) {}
  Value(std::string_view s) : data_(std::string(s)) {}
  Value(Array a) noexcept : data_(std::move(a)) {}
  Value(Object o) noexcept : data_(std::move(o)) {}

  bool is_null() const noexcept { return std::holds_alternative<std::nullptr_t>(data_); }
  bool is_bool() const noexcept { return std::holds_alternative<bool>(data_); }
  bool is_number() const noexcept { return std::holds_alternative<double>(data_); }
  bool is_string() const noexcept { return std::holds_alternative<std::string>(data_); }
  bool is_array() const noexcept { return std::holds_alternative<Array>(data_); }
  bool is_object() const noexcept { return std::holds_alternative<Object>(data_); }

  bool as_bool() const;
  double as_number() const;
  const std::string& as_string() const;
  const Array& as_array() const;
  Array& as_array();
  const Object& as_object() const;
  Object& as_object();

  friend bool operator==(const Value&, const Value&) = default;

 private:
  std::variant<std::nullptr_t, bool, double, std::string, Array, Object> data_;
};

// Serializes per RFC 8785: sorted keys, ECMAScript number form, minimal
// escaping, UTF-8, no whitespace. Pure; equal values give identical bytes.
std::string canonicalize(const Value& value);

// Strict RFC 8259 parse of UTF-8 bytes. Duplicate object keys, unpaired
// surrogates, non-finite numbers and trailing input are all errors.
Value parse(std::string_view bytes);

// ECMAScript Number::toString(10) for finite doubles ("1e+21", "0.000001", ...).
std::string number_to_string(double value);

// Indented rendering for human output; same escaping, canonical key order.
std::string dump_pretty(const Value& value, int indent = 2);

}  // namespace hdp::json
