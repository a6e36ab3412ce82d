#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace condot {

// Minimal JSON value for report emission. Object keys are kept sorted and
// doubles print with 17 significant digits, so identical runs produce
// byte-identical reports and serialized weights survive a round trip
// bit-exactly. Input parsing uses nlohmann::json; this type is output-only.
class ReportValue {
public:
  ReportValue() : kind_(Kind::Null) {}
  ReportValue(bool b) : kind_(Kind::Bool), bool_(b) {}
  ReportValue(double d) : kind_(Kind::Double), double_(d) {}
  ReportValue(int i) : kind_(Kind::Int), int_(i) {}
  ReportValue(long long i) : kind_(Kind::Int), int_(i) {}
  ReportValue(std::uint64_t i) : kind_(Kind::Int), int_(static_cast<long long>(i)) {}
  ReportValue(const char* s) : kind_(Kind::String), string_(s) {}
  ReportValue(std::string s) : kind_(Kind::String), string_(std::move(s)) {}

  static ReportValue object();
  static ReportValue array();

  ReportValue& operator[](const std::string& key);            // object access
  void push_back(ReportValue v);                              // array append

  std::string dump(int indent = 2) const;

  // 17 significant digits; round-trips any finite double.
  static std::string format_double(double d);

private:
  enum class Kind { Null, Bool, Int, Double, String, Array, Object };

  void write(std::string& out, int indent, int depth) const;

  Kind kind_;
  bool bool_ = false;
  long long int_ = 0;
  double double_ = 0.0;
  std::string string_;
  std::vector<ReportValue> items_;
  std::map<std::string, ReportValue> fields_;
};

}  // namespace condot
