#include "minisy/value.hpp"

#include <boost/functional/hash.hpp>

namespace minisy {

CodePoints utf8_decode(const std::string& bytes) {
  CodePoints out;
  size_t i = 0;
  const size_t n = bytes.size();
  while (i < n) {
    unsigned char c = bytes[i];
    char32_t cp = 0;
    int extra = 0;
    if (c < 0x80) {
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      extra = 3;
    } else {
      throw std::runtime_error("invalid UTF-8 byte in string literal");
    }
    if (i + extra >= n) throw std::runtime_error("truncated UTF-8 sequence");
    for (int k = 1; k <= extra; ++k) {
      unsigned char cc = bytes[i + k];
      if ((cc & 0xC0) != 0x80)
        throw std::runtime_error("invalid UTF-8 continuation byte");
      cp = (cp << 6) | (cc & 0x3F);
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string utf8_encode(const CodePoints& cps) {
  std::string out;
  for (char32_t cp : cps) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

BitVec::BitVec(uint32_t w, Integer b) : width(w), bits(std::move(b)) {
  if (width < 1) throw SortError("BitVec width must be >= 1");
  Integer mask = (Integer(1) << width) - 1;
  bits &= mask;
  if (bits < 0) bits += (Integer(1) << width);
}

Sort Value::sort() const {
  if (is_int()) return Sort::int_sort();
  if (is_bool()) return Sort::bool_sort();
  if (is_string()) return Sort::string_sort();
  return Sort::bitvec(as_bitvec().width);
}

size_t Value::hash() const {
  size_t seed = d_v.index();
  if (is_int()) {
    boost::hash_combine(seed, boost::hash<Integer>()(as_int()));
  } else if (is_bool()) {
    boost::hash_combine(seed, as_bool() ? 1u : 0u);
  } else if (is_string()) {
    boost::hash_combine(seed, std::hash<std::u32string>()(as_string()));
  } else {
    boost::hash_combine(seed, as_bitvec().width);
    boost::hash_combine(seed, boost::hash<Integer>()(as_bitvec().bits));
  }
  return seed;
}

std::string Value::str() const {
  if (is_int()) {
    if (as_int() < 0) return "(- " + Integer(-as_int()).str() + ")";
    return as_int().str();
  }
  if (is_bool()) return as_bool() ? "true" : "false";
  if (is_string()) {
    std::string body = utf8_encode(as_string());
    std::string out = "\"";
    for (char c : body) {
      out.push_back(c);
      if (c == '"') out.push_back('"');
    }
    out.push_back('"');
    return out;
  }
  const BitVec& bv = as_bitvec();
  std::string out = "#b";
  for (uint32_t i = bv.width; i-- > 0;) {
    out.push_back(bit_test(bv.bits, i) ? '1' : '0');
  }
  return out;
}

std::string Sort::str() const {
  switch (d_kind) {
    case Kind::Int: return "Int";
    case Kind::Bool: return "Bool";
    case Kind::String: return "String";
    case Kind::BitVec: return "(_ BitVec " + std::to_string(d_width) + ")";
    case Kind::Datatype: return d_name;
  }
  return "?";
}

}  // namespace minisy
