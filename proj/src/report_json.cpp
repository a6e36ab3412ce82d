#include "condot/report_json.hpp"

#include <cmath>
#include <cstdio>

namespace condot {

ReportValue ReportValue::object() {
  ReportValue v;
  v.kind_ = Kind::Object;
  return v;
}

ReportValue ReportValue::array() {
  ReportValue v;
  v.kind_ = Kind::Array;
  return v;
}

ReportValue& ReportValue::operator[](const std::string& key) {
  kind_ = Kind::Object;
  return fields_[key];
}

void ReportValue::push_back(ReportValue v) {
  kind_ = Kind::Array;
  items_.push_back(std::move(v));
}

std::string ReportValue::format_double(double d) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  std::string s(buf);
  // Bare integers still need to read as floating point on the way back in.
  if (s.find_first_of(".eE") == std::string::npos && std::isfinite(d)) s += ".0";
  return s;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
}

void indent_to(std::string& out, int indent, int depth) {
  if (indent <= 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent) * depth, ' ');
}

}  // namespace

void ReportValue::write(std::string& out, int indent, int depth) const {
  switch (kind_) {
    case Kind::Null:
      out += "null";
      break;
    case Kind::Bool:
      out += bool_ ? "true" : "false";
      break;
    case Kind::Int:
      out += std::to_string(int_);
      break;
    case Kind::Double:
      out += format_double(double_);
      break;
    case Kind::String:
      write_escaped(out, string_);
      break;
    case Kind::Array: {
      if (items_.empty()) {
        out += "[]";
        break;
      }
      out += '[';
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i > 0) out += ',';
        indent_to(out, indent, depth + 1);
        items_[i].write(out, indent, depth + 1);
      }
      indent_to(out, indent, depth);
      out += ']';
      break;
    }
    case Kind::Object: {
      if (fields_.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : fields_) {
        if (!first) out += ',';
        first = false;
        indent_to(out, indent, depth + 1);
        write_escaped(out, key);
        out += indent > 0 ? ": " : ":";
        value.write(out, indent, depth + 1);
      }
      indent_to(out, indent, depth);
      out += '}';
      break;
    }
  }
}

std::string ReportValue::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += '\n';
  return out;
}

}  // namespace condot
