#include "minisy/term.hpp"

#include <boost/functional/hash.hpp>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <unordered_set>

namespace minisy {

struct TermData {
  Term::Kind kind;
  Op op = Op::Add;       // valid for Apply
  std::string sym;       // variable / call name
  Value val;             // valid for Constant
  std::vector<Term> children;
  Sort sort;
  size_t hash = 0;
  size_t size = 1;
};

namespace {

struct OpInfo {
  const char* name;
  int min_arity;
  int max_arity;  // -1 for unbounded
  bool commutative;
  bool associative;
};

const OpInfo& op_info(Op op) {
  static const std::map<Op, OpInfo> table = {
      {Op::Add, {"+", 2, -1, true, true}},
      {Op::Sub, {"-", 2, 2, false, false}},
      {Op::Neg, {"-", 1, 1, false, false}},
      {Op::Mul, {"*", 2, 2, false, false}},
      {Op::Ite, {"ite", 3, 3, false, false}},
      {Op::Eq, {"=", 2, 2, true, false}},
      {Op::Le, {"<=", 2, 2, false, false}},
      {Op::Lt, {"<", 2, 2, false, false}},
      {Op::Ge, {">=", 2, 2, false, false}},
      {Op::Gt, {">", 2, 2, false, false}},
      {Op::And, {"and", 2, -1, true, true}},
      {Op::Or, {"or", 2, -1, true, true}},
      {Op::Not, {"not", 1, 1, false, false}},
      {Op::Implies, {"=>", 2, 2, false, false}},
      {Op::StrConcat, {"str.++", 2, -1, false, true}},
      {Op::StrLen, {"str.len", 1, 1, false, false}},
      {Op::StrSubstr, {"str.substr", 3, 3, false, false}},
      {Op::StrIndexof, {"str.indexof", 3, 3, false, false}},
      {Op::StrAt, {"str.at", 2, 2, false, false}},
      {Op::StrContains, {"str.contains", 2, 2, false, false}},
      {Op::StrReplace, {"str.replace", 3, 3, false, false}},
      {Op::StrToInt, {"str.to_int", 1, 1, false, false}},
      {Op::IntToStr, {"int.to_str", 1, 1, false, false}},
      {Op::BvAdd, {"bvadd", 2, 2, true, true}},
      {Op::BvSub, {"bvsub", 2, 2, false, false}},
      {Op::BvAnd, {"bvand", 2, 2, true, true}},
      {Op::BvOr, {"bvor", 2, 2, true, true}},
      {Op::BvXor, {"bvxor", 2, 2, true, true}},
      {Op::BvNot, {"bvnot", 1, 1, false, false}},
      {Op::BvNeg, {"bvneg", 1, 1, false, false}},
      {Op::BvShl, {"bvshl", 2, 2, false, false}},
      {Op::BvLshr, {"bvlshr", 2, 2, false, false}},
      {Op::BvUlt, {"bvult", 2, 2, false, false}},
      {Op::BvUle, {"bvule", 2, 2, false, false}},
  };
  return table.at(op);
}

[[noreturn]] void sort_fail(Op op, const std::vector<Term>& children,
                            const std::string& why) {
  std::ostringstream os;
  os << "ill-sorted application of " << op_info(op).name << ": " << why
     << " in (" << op_info(op).name;
  for (const Term& c : children) os << " " << c.str();
  os << ")";
  throw SortError(os.str());
}

void require(bool ok, Op op, const std::vector<Term>& ch,
             const std::string& why) {
  if (!ok) sort_fail(op, ch, why);
}

/** Computes the result sort, validating child sorts against the table. */
Sort check_application(Op op, const std::vector<Term>& ch) {
  const OpInfo& info = op_info(op);
  int n = static_cast<int>(ch.size());
  require(n >= info.min_arity && (info.max_arity < 0 || n <= info.max_arity),
          op, ch, "wrong arity");
  auto all = [&](Sort::Kind k) {
    for (const Term& c : ch)
      if (c.sort().kind() != k) return false;
    return true;
  };
  switch (op) {
    case Op::Add:
    case Op::Sub:
      require(all(Sort::Kind::Int), op, ch, "expects Int operands");
      return Sort::int_sort();
    case Op::Neg:
      require(all(Sort::Kind::Int), op, ch, "expects an Int operand");
      return Sort::int_sort();
    case Op::Mul:
      require(all(Sort::Kind::Int), op, ch, "expects Int operands");
      require(ch[0].is_constant() || ch[1].is_constant(), op, ch,
              "one factor must be an integer literal (linear terms only)");
      return Sort::int_sort();
    case Op::Ite:
      require(ch[0].sort().is_bool(), op, ch, "condition must be Bool");
      require(ch[1].sort() == ch[2].sort(), op, ch, "branch sorts differ");
      return ch[1].sort();
    case Op::Eq:
      require(ch[0].sort() == ch[1].sort(), op, ch, "operand sorts differ");
      return Sort::bool_sort();
    case Op::Le:
    case Op::Lt:
    case Op::Ge:
    case Op::Gt:
      require(all(Sort::Kind::Int), op, ch, "expects Int operands");
      return Sort::bool_sort();
    case Op::And:
    case Op::Or:
    case Op::Not:
    case Op::Implies:
      require(all(Sort::Kind::Bool), op, ch, "expects Bool operands");
      return Sort::bool_sort();
    case Op::StrConcat:
      require(all(Sort::Kind::String), op, ch, "expects String operands");
      return Sort::string_sort();
    case Op::StrLen:
      require(all(Sort::Kind::String), op, ch, "expects a String operand");
      return Sort::int_sort();
    case Op::StrSubstr:
      require(ch[0].sort().is_string() && ch[1].sort().is_int() &&
                  ch[2].sort().is_int(),
              op, ch, "expects (String Int Int)");
      return Sort::string_sort();
    case Op::StrIndexof:
      require(ch[0].sort().is_string() && ch[1].sort().is_string() &&
                  ch[2].sort().is_int(),
              op, ch, "expects (String String Int)");
      return Sort::int_sort();
    case Op::StrAt:
      require(ch[0].sort().is_string() && ch[1].sort().is_int(), op, ch,
              "expects (String Int)");
      return Sort::string_sort();
    case Op::StrContains:
      require(all(Sort::Kind::String), op, ch, "expects String operands");
      return Sort::bool_sort();
    case Op::StrReplace:
      require(all(Sort::Kind::String), op, ch, "expects String operands");
      return Sort::string_sort();
    case Op::StrToInt:
      require(all(Sort::Kind::String), op, ch, "expects a String operand");
      return Sort::int_sort();
    case Op::IntToStr:
      require(all(Sort::Kind::Int), op, ch, "expects an Int operand");
      return Sort::string_sort();
    case Op::BvAdd:
    case Op::BvSub:
    case Op::BvAnd:
    case Op::BvOr:
    case Op::BvXor:
    case Op::BvShl:
    case Op::BvLshr:
      require(ch[0].sort().is_bitvec() && ch[0].sort() == ch[1].sort(), op, ch,
              "expects BitVec operands of equal width");
      return ch[0].sort();
    case Op::BvNot:
    case Op::BvNeg:
      require(ch[0].sort().is_bitvec(), op, ch, "expects a BitVec operand");
      return ch[0].sort();
    case Op::BvUlt:
    case Op::BvUle:
      require(ch[0].sort().is_bitvec() && ch[0].sort() == ch[1].sort(), op, ch,
              "expects BitVec operands of equal width");
      return Sort::bool_sort();
  }
  throw SortError("unknown operator");
}

size_t structural_hash(const TermData& d) {
  size_t seed = static_cast<size_t>(d.kind);
  switch (d.kind) {
    case Term::Kind::Constant:
      boost::hash_combine(seed, d.val.hash());
      break;
    case Term::Kind::Variable:
      boost::hash_combine(seed, std::hash<std::string>()(d.sym));
      boost::hash_combine(seed, SortHash()(d.sort));
      break;
    case Term::Kind::Apply:
      boost::hash_combine(seed, static_cast<size_t>(d.op));
      for (const Term& c : d.children) boost::hash_combine(seed, c.hash());
      break;
    case Term::Kind::Call:
      boost::hash_combine(seed, std::hash<std::string>()(d.sym));
      for (const Term& c : d.children) boost::hash_combine(seed, c.hash());
      break;
  }
  return seed;
}

bool structural_eq(const TermData& a, const TermData& b) {
  if (a.kind != b.kind || a.sort != b.sort) return false;
  switch (a.kind) {
    case Term::Kind::Constant:
      return a.val == b.val;
    case Term::Kind::Variable:
      return a.sym == b.sym;
    case Term::Kind::Apply:
      if (a.op != b.op) return false;
      break;
    case Term::Kind::Call:
      if (a.sym != b.sym) return false;
      break;
  }
  return a.children == b.children;  // handle (pointer) equality
}

/**
 * The intern table. Terms are immutable and live for the process; the
 * table mutex is the only synchronization needed for cross-thread use.
 */
class TermManager {
 public:
  static TermManager& instance() {
    static TermManager mgr;
    return mgr;
  }

  const TermData* intern(TermData&& d) {
    d.hash = structural_hash(d);
    d.size = 1;
    for (const Term& c : d.children) d.size += c.tree_size();
    std::lock_guard<std::mutex> lock(d_mutex);
    auto it = d_table.find(&d);
    if (it != d_table.end()) return *it;
    auto* node = new TermData(std::move(d));
    d_table.insert(node);
    d_storage.emplace_back(node);
    return node;
  }

 private:
  struct Hash {
    size_t operator()(const TermData* d) const { return d->hash; }
  };
  struct Eq {
    bool operator()(const TermData* a, const TermData* b) const {
      return a->hash == b->hash && structural_eq(*a, *b);
    }
  };
  std::mutex d_mutex;
  std::unordered_set<const TermData*, Hash, Eq> d_table;
  std::vector<std::unique_ptr<const TermData>> d_storage;
};

}  // namespace

const char* op_name(Op op) { return op_info(op).name; }
bool op_is_commutative(Op op) { return op_info(op).commutative; }
bool op_is_associative(Op op) { return op_info(op).associative; }

bool op_by_name(const std::string& name, Op& out) {
  static const std::map<std::string, Op> table = [] {
    std::map<std::string, Op> t;
    for (int i = 0; i <= static_cast<int>(Op::BvUle); ++i) {
      Op op = static_cast<Op>(i);
      if (op == Op::Neg) continue;  // shares "-" with Sub; parser decides
      t[op_info(op).name] = op;
    }
    // legacy / SMT-LIB 2.6 alternates
    t["str.to.int"] = Op::StrToInt;
    t["int.to.str"] = Op::IntToStr;
    t["str.from_int"] = Op::IntToStr;
    return t;
  }();
  auto it = table.find(name);
  if (it == table.end()) return false;
  out = it->second;
  return true;
}

Term Term::constant(Value v) {
  TermData d;
  d.kind = Kind::Constant;
  d.sort = v.sort();
  d.val = std::move(v);
  return Term(TermManager::instance().intern(std::move(d)));
}

Term Term::variable(const std::string& name, Sort sort) {
  TermData d;
  d.kind = Kind::Variable;
  d.sym = name;
  d.sort = std::move(sort);
  return Term(TermManager::instance().intern(std::move(d)));
}

Term Term::apply(Op op, std::vector<Term> children) {
  for (const Term& c : children)
    if (c.is_null()) throw SortError("null child in application");
  TermData d;
  d.kind = Kind::Apply;
  d.op = op;
  d.sort = check_application(op, children);
  d.children = std::move(children);
  return Term(TermManager::instance().intern(std::move(d)));
}

Term Term::call(const std::string& fn, Sort ret, std::vector<Term> args) {
  TermData d;
  d.kind = Kind::Call;
  d.sym = fn;
  d.sort = std::move(ret);
  d.children = std::move(args);
  return Term(TermManager::instance().intern(std::move(d)));
}

Term::Kind Term::kind() const { return d_node->kind; }
Op Term::op() const { return d_node->op; }
const std::string& Term::name() const { return d_node->sym; }
const Value& Term::value() const { return d_node->val; }
std::span<const Term> Term::children() const { return d_node->children; }
const Sort& Term::sort() const { return d_node->sort; }
size_t Term::tree_size() const { return d_node->size; }
size_t Term::hash() const { return d_node->hash; }

int Term::compare(const Term& a, const Term& b) {
  if (a.d_node == b.d_node) return 0;
  auto rank = [](const Term& t) { return static_cast<int>(t.kind()); };
  if (rank(a) != rank(b)) return rank(a) < rank(b) ? -1 : 1;
  switch (a.kind()) {
    case Kind::Constant: {
      const std::string sa = a.value().str(), sb = b.value().str();
      return sa.compare(sb) < 0 ? -1 : (sa == sb ? 0 : 1);
    }
    case Kind::Variable: {
      int c = a.name().compare(b.name());
      if (c != 0) return c < 0 ? -1 : 1;
      return 0;
    }
    case Kind::Apply:
      if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
      break;
    case Kind::Call: {
      int c = a.name().compare(b.name());
      if (c != 0) return c < 0 ? -1 : 1;
      break;
    }
  }
  if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
  for (size_t i = 0; i < a.arity(); ++i) {
    int c = compare(a.child(i), b.child(i));
    if (c != 0) return c;
  }
  return 0;
}

std::string Term::str() const {
  if (is_null()) return "<null>";
  switch (kind()) {
    case Kind::Constant:
      return value().str();
    case Kind::Variable:
      return name();
    case Kind::Apply:
    case Kind::Call: {
      std::string out = "(";
      out += is_call() ? name() : op_name(op());
      for (const Term& c : children()) {
        out += ' ';
        out += c.str();
      }
      out += ')';
      return out;
    }
  }
  return "?";
}

}  // namespace minisy
