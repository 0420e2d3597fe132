#ifndef MINISY_VALUE_HPP
#define MINISY_VALUE_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <variant>

#include "minisy/sort.hpp"

namespace minisy {

using Integer = boost::multiprecision::cpp_int;

/** A string value: a sequence of unicode code points. */
using CodePoints = std::u32string;

/** Decode UTF-8 bytes into code points; invalid sequences throw. */
CodePoints utf8_decode(const std::string& bytes);
/** Encode code points back to UTF-8 bytes. */
std::string utf8_encode(const CodePoints& cps);

/** A fixed-width bitvector value; bits is reduced modulo 2^width. */
struct BitVec {
  uint32_t width;
  Integer bits;

  BitVec(uint32_t w, Integer b);
  bool operator==(const BitVec& o) const {
    return width == o.width && bits == o.bits;
  }
};

/** A ground value of one of the supported theories. */
class Value {
 public:
  Value() : d_v(Integer(0)) {}
  explicit Value(Integer i) : d_v(std::move(i)) {}
  explicit Value(bool b) : d_v(b) {}
  explicit Value(CodePoints s) : d_v(std::move(s)) {}
  explicit Value(BitVec bv) : d_v(std::move(bv)) {}

  static Value of_int(long i) { return Value(Integer(i)); }
  static Value of_string(const std::string& utf8) {
    return Value(utf8_decode(utf8));
  }

  bool is_int() const { return std::holds_alternative<Integer>(d_v); }
  bool is_bool() const { return std::holds_alternative<bool>(d_v); }
  bool is_string() const { return std::holds_alternative<CodePoints>(d_v); }
  bool is_bitvec() const { return std::holds_alternative<BitVec>(d_v); }

  const Integer& as_int() const { return std::get<Integer>(d_v); }
  bool as_bool() const { return std::get<bool>(d_v); }
  const CodePoints& as_string() const { return std::get<CodePoints>(d_v); }
  const BitVec& as_bitvec() const { return std::get<BitVec>(d_v); }

  Sort sort() const;

  bool operator==(const Value& o) const { return d_v == o.d_v; }
  bool operator!=(const Value& o) const { return !(*this == o); }

  size_t hash() const;

  /** SMT-LIB literal syntax: 7, (- 7), true, "ab""c", #b0101. */
  std::string str() const;

 private:
  std::variant<Integer, bool, CodePoints, BitVec> d_v;
};

struct ValueHash {
  size_t operator()(const Value& v) const { return v.hash(); }
};

}  // namespace minisy

#endif
