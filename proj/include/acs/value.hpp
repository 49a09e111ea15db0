#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "acs/printer.hpp"

namespace acs {

class Value;

struct RecordValue {
  std::string record_name;
  std::vector<std::string> field_names;
  std::vector<Value> fields;
};

enum class ValueKind {
  Int,
  Float,
  Bool,
  String,
  Null,
  Array,
  Record,
  // Sentinel for a snapshot expression whose evaluation failed; it compares
  // equal only to itself and satisfies no predicate.
  Unavailable,
};

class Value {
 public:
  ValueKind kind = ValueKind::Null;
  std::int64_t i = 0;
  double f = 0.0;
  bool b = false;
  std::string s;
  std::shared_ptr<std::vector<Value>> array;
  std::shared_ptr<RecordValue> record;

  static Value make_int(std::int64_t v) {
    Value r;
    r.kind = ValueKind::Int;
    r.i = v;
    return r;
  }
  static Value make_float(double v) {
    Value r;
    r.kind = ValueKind::Float;
    r.f = v;
    return r;
  }
  static Value make_bool(bool v) {
    Value r;
    r.kind = ValueKind::Bool;
    r.b = v;
    return r;
  }
  static Value make_string(std::string v) {
    Value r;
    r.kind = ValueKind::String;
    r.s = std::move(v);
    return r;
  }
  static Value make_null() { return Value{}; }
  static Value make_array(std::vector<Value> elems) {
    Value r;
    r.kind = ValueKind::Array;
    r.array = std::make_shared<std::vector<Value>>(std::move(elems));
    return r;
  }
  static Value make_record(std::shared_ptr<RecordValue> rec) {
    Value r;
    r.kind = ValueKind::Record;
    r.record = std::move(rec);
    return r;
  }
  static Value make_unavailable() {
    Value r;
    r.kind = ValueKind::Unavailable;
    return r;
  }
};

// Structural equality. Floats compare by numeric value except that NaN
// equals NaN (keeps equality an equivalence relation for snapshot
// comparison); +0.0 and -0.0 are equal.
inline bool values_equal(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ValueKind::Int: return a.i == b.i;
    case ValueKind::Float:
      if (std::isnan(a.f) && std::isnan(b.f)) return true;
      return a.f == b.f;
    case ValueKind::Bool: return a.b == b.b;
    case ValueKind::String: return a.s == b.s;
    case ValueKind::Null: return true;
    case ValueKind::Array: {
      const auto& x = *a.array;
      const auto& y = *b.array;
      if (x.size() != y.size()) return false;
      for (size_t i = 0; i < x.size(); ++i)
        if (!values_equal(x[i], y[i])) return false;
      return true;
    }
    case ValueKind::Record: {
      const auto& x = *a.record;
      const auto& y = *b.record;
      if (x.record_name != y.record_name) return false;
      for (size_t i = 0; i < x.fields.size(); ++i)
        if (!values_equal(x.fields[i], y.fields[i])) return false;
      return true;
    }
    case ValueKind::Unavailable: return true;
  }
  return false;
}

inline std::string value_to_string(const Value& v) {
  switch (v.kind) {
    case ValueKind::Int: return format_int(v.i);
    case ValueKind::Float: return format_float(v.f);
    case ValueKind::Bool: return v.b ? "true" : "false";
    case ValueKind::String: {
      std::string out = "\"";
      for (char c : v.s) {
        switch (c) {
          case '\n': out += "\\n"; break;
          case '\t': out += "\\t"; break;
          case '\\': out += "\\\\"; break;
          case '"': out += "\\\""; break;
          default: out += c;
        }
      }
      out += '"';
      return out;
    }
    case ValueKind::Null: return "null";
    case ValueKind::Array: {
      std::string out = "[";
      for (size_t i = 0; i < v.array->size(); ++i) {
        if (i) out += ", ";
        out += value_to_string((*v.array)[i]);
      }
      return out + "]";
    }
    case ValueKind::Record: {
      std::string out = v.record->record_name + "{";
      for (size_t i = 0; i < v.record->fields.size(); ++i) {
        if (i) out += ", ";
        out += v.record->field_names[i] + ": " +
               value_to_string(v.record->fields[i]);
      }
      return out + "}";
    }
    case ValueKind::Unavailable: return "<unavailable>";
  }
  return "";
}

}  // namespace acs
