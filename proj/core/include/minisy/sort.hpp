#ifndef MINISY_SORT_HPP
#define MINISY_SORT_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace minisy {

/** Error thrown when a term or value fails its sort constraints. */
class SortError : public std::runtime_error {
 public:
  explicit SortError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * A theory sort: Int, Bool, String, fixed-width BitVec, or a named
 * datatype introduced by a grammar embedding.
 */
class Sort {
 public:
  enum class Kind { Int, Bool, String, BitVec, Datatype };

  Sort() : d_kind(Kind::Int), d_width(0) {}

  static Sort int_sort() { return Sort(Kind::Int, 0, {}); }
  static Sort bool_sort() { return Sort(Kind::Bool, 0, {}); }
  static Sort string_sort() { return Sort(Kind::String, 0, {}); }
  static Sort bitvec(uint32_t width) {
    if (width < 1) throw SortError("BitVec width must be >= 1");
    return Sort(Kind::BitVec, width, {});
  }
  static Sort datatype(std::string name) {
    return Sort(Kind::Datatype, 0, std::move(name));
  }

  Kind kind() const { return d_kind; }
  bool is_int() const { return d_kind == Kind::Int; }
  bool is_bool() const { return d_kind == Kind::Bool; }
  bool is_string() const { return d_kind == Kind::String; }
  bool is_bitvec() const { return d_kind == Kind::BitVec; }
  bool is_datatype() const { return d_kind == Kind::Datatype; }

  uint32_t bv_width() const { return d_width; }
  const std::string& datatype_name() const { return d_name; }

  bool operator==(const Sort& o) const {
    return d_kind == o.d_kind && d_width == o.d_width && d_name == o.d_name;
  }
  bool operator!=(const Sort& o) const { return !(*this == o); }

  std::string str() const;

 private:
  Sort(Kind k, uint32_t w, std::string n)
      : d_kind(k), d_width(w), d_name(std::move(n)) {}

  Kind d_kind;
  uint32_t d_width;
  std::string d_name;
};

struct SortHash {
  size_t operator()(const Sort& s) const {
    size_t h = static_cast<size_t>(s.kind());
    h = h * 31 + s.bv_width();
    h = h * 31 + std::hash<std::string>()(s.datatype_name());
    return h;
  }
};

}  // namespace minisy

#endif
