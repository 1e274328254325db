#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace kinex {

// Shortest decimal string that parses back to exactly `value`.
// Non-finite values are written as "nan", "inf" and "-inf".
std::string format_double(double value);

// Minimal streaming JSON writer. Numbers go through format_double so every
// emitted document is byte-stable for identical inputs. Non-finite numbers
// are written as null.
class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& out, int indent = 2) : out_(out), indent_(indent) {}

  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view name);

  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& null();

  // Arrays of numbers are written on a single line.
  JsonWriter& number_array(const std::vector<double>& values);

 private:
  struct Frame {
    bool is_object;
    bool empty = true;
  };

  void before_value();
  void newline();
  void write_string(std::string_view s);

  std::ostream& out_;
  int indent_;
  std::vector<Frame> stack_;
  bool pending_key_ = false;
};

}  // namespace kinex
