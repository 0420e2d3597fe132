#include "minisy/lia.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include <boost/rational.hpp>

#include "minisy/linear.hpp"
#include "minisy/rewriter.hpp"

namespace minisy {

namespace {

using Rational = boost::rational<Integer>;

Integer floor_rat(const Rational& r) {
  Integer q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) q -= 1;
  return q;
}

/** One row: sum(coeffs[i] * var_i) <= bound. */
struct Row {
  std::vector<Integer> coeffs;
  Integer bound;
};

/**
 * Phase-1 simplex feasibility for rows over unrestricted integer-minded
 * variables, each split into a nonnegative pair. Exact rational
 * arithmetic, Bland's rule. Returns a satisfying rational point or
 * nullopt when the system is infeasible.
 */
std::optional<std::vector<Rational>> rational_feasible(
    const std::vector<Row>& rows, size_t nvars) {
  size_t ny = 2 * nvars;
  size_t m = rows.size();
  if (m == 0) return std::vector<Rational>(nvars, Rational(0));
  // Columns: y (split vars), slacks, artificials; one artificial per row
  // whose right-hand side starts negative.
  std::vector<size_t> artificial_of(m, SIZE_MAX);
  size_t nart = 0;
  for (size_t i = 0; i < m; ++i) {
    if (rows[i].bound < 0) artificial_of[i] = nart++;
  }
  size_t ncols = ny + m + nart;
  std::vector<std::vector<Rational>> tab(m, std::vector<Rational>(ncols + 1,
                                                                  Rational(0)));
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) {
    Integer sign = rows[i].bound < 0 ? -1 : 1;
    for (size_t v = 0; v < nvars; ++v) {
      const Integer& a = rows[i].coeffs[v];
      if (a == 0) continue;
      tab[i][2 * v] = Rational(sign * a);
      tab[i][2 * v + 1] = Rational(-sign * a);
    }
    tab[i][ny + i] = Rational(sign);
    tab[i][ncols] = Rational(sign * rows[i].bound);
    if (artificial_of[i] != SIZE_MAX) {
      tab[i][ny + m + artificial_of[i]] = Rational(1);
      basis[i] = ny + m + artificial_of[i];
    } else {
      basis[i] = ny + i;
    }
  }
  if (nart == 0) {
    // All slacks basic and feasible: the origin works.
    return std::vector<Rational>(nvars, Rational(0));
  }
  // Objective: minimize the artificial sum; expressed via the rows that
  // hold artificials basic.
  std::vector<Rational> obj(ncols + 1, Rational(0));
  for (size_t i = 0; i < m; ++i) {
    if (artificial_of[i] == SIZE_MAX) continue;
    for (size_t j = 0; j <= ncols; ++j) obj[j] += tab[i][j];
  }
  auto is_artificial = [&](size_t col) { return col >= ny + m; };
  while (true) {
    // Bland: smallest-index improving column.
    size_t enter = SIZE_MAX;
    for (size_t j = 0; j < ncols; ++j) {
      if (is_artificial(j)) continue;
      if (obj[j] > Rational(0)) {
        enter = j;
        break;
      }
    }
    if (enter == SIZE_MAX) break;
    size_t leave = SIZE_MAX;
    Rational best(0);
    for (size_t i = 0; i < m; ++i) {
      if (tab[i][enter] <= Rational(0)) continue;
      Rational ratio = tab[i][ncols] / tab[i][enter];
      if (leave == SIZE_MAX || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == SIZE_MAX) break;  // unbounded improving ray
    Rational pivot = tab[leave][enter];
    for (size_t j = 0; j <= ncols; ++j) tab[leave][j] /= pivot;
    for (size_t i = 0; i < m; ++i) {
      if (i == leave || tab[i][enter] == Rational(0)) continue;
      Rational f = tab[i][enter];
      for (size_t j = 0; j <= ncols; ++j) tab[i][j] -= f * tab[leave][j];
    }
    Rational fo = obj[enter];
    if (fo != Rational(0)) {
      for (size_t j = 0; j <= ncols; ++j) obj[j] -= fo * tab[leave][j];
    }
    basis[leave] = enter;
  }
  if (obj[ncols] != Rational(0)) return std::nullopt;
  std::vector<Rational> y(ny, Rational(0));
  for (size_t i = 0; i < m; ++i) {
    if (basis[i] < ny) y[basis[i]] = tab[i][ncols];
  }
  std::vector<Rational> point(nvars);
  for (size_t v = 0; v < nvars; ++v) point[v] = y[2 * v] - y[2 * v + 1];
  return point;
}

enum class IntFeas { Feasible, Infeasible, Unknown };

struct IntSolver {
  size_t nvars;
  std::vector<Integer> point;

  IntFeas solve(std::vector<Row>& rows, int depth) {
    auto rat = rational_feasible(rows, nvars);
    if (!rat) return IntFeas::Infeasible;
    size_t frac = SIZE_MAX;
    for (size_t v = 0; v < nvars; ++v) {
      if ((*rat)[v].denominator() != 1) {
        frac = v;
        break;
      }
    }
    if (frac == SIZE_MAX) {
      point.resize(nvars);
      for (size_t v = 0; v < nvars; ++v) point[v] = (*rat)[v].numerator();
      return IntFeas::Feasible;
    }
    if (depth <= 0) return IntFeas::Unknown;
    Integer fl = floor_rat((*rat)[frac]);
    Row low;
    low.coeffs.assign(nvars, 0);
    low.coeffs[frac] = 1;
    low.bound = fl;
    Row high;
    high.coeffs.assign(nvars, 0);
    high.coeffs[frac] = -1;
    high.bound = -(fl + 1);
    rows.push_back(low);
    IntFeas a = solve(rows, depth - 1);
    rows.pop_back();
    if (a == IntFeas::Feasible) return a;
    rows.push_back(high);
    IntFeas b = solve(rows, depth - 1);
    rows.pop_back();
    if (b == IntFeas::Feasible) return b;
    if (a == IntFeas::Unknown || b == IntFeas::Unknown) {
      return IntFeas::Unknown;
    }
    return IntFeas::Infeasible;
  }
};

/** A theory atom: either an integer constraint or a boolean variable. */
struct Atom {
  Term term;
  bool is_bool_var;
  bool is_equality;     // integer atoms: = rather than <=
  LinearPoly poly;      // integer atoms, constant split off
  Integer bound;
};

enum class Tri { True, False, Open };

Tri tri_not(Tri t) {
  if (t == Tri::True) return Tri::False;
  if (t == Tri::False) return Tri::True;
  return Tri::Open;
}

struct SatSearch {
  const LiaBudget& budget;
  Term formula;
  std::vector<Atom> atoms;
  std::unordered_map<Term, size_t, TermHash> atom_index;
  std::vector<Tri> assignment;
  std::vector<Term> int_vars;
  std::unordered_map<Term, size_t, TermHash> var_index;
  uint64_t nodes = 0;
  bool saw_unknown = false;
  std::string unsupported;
  std::vector<Integer> model_point;
  std::vector<Tri> model_assignment;

  bool note_unsupported(const std::string& what) {
    if (unsupported.empty()) unsupported = what;
    return false;
  }

  /** Registers atoms and checks the formula stays in scope. */
  bool collect(const Term& t) {
    if (t.is_constant()) return t.sort().is_bool();
    if (atom_index.count(t)) return true;
    if (t.is_variable()) {
      if (!t.sort().is_bool()) return note_unsupported("free non-bool term");
      add_atom(Atom{t, true, false, {}, 0});
      return true;
    }
    if (t.is_call()) return note_unsupported("uninterpreted call");
    switch (t.op()) {
      case Op::And:
      case Op::Or:
      case Op::Not:
      case Op::Implies: {
        for (size_t i = 0; i < t.arity(); ++i) {
          if (!collect(t.child(i))) return false;
        }
        return true;
      }
      case Op::Ite:
        if (!t.sort().is_bool()) return note_unsupported("non-bool ite");
        return collect(t.child(0)) && collect(t.child(1)) &&
               collect(t.child(2));
      case Op::Eq:
        if (t.child(0).sort().is_bool()) {
          return collect(t.child(0)) && collect(t.child(1));
        }
        if (t.child(0).sort().is_int()) return add_int_atom(t, true);
        return note_unsupported("non-integer equality");
      case Op::Le:
        if (t.child(0).sort().is_int()) return add_int_atom(t, false);
        return note_unsupported("non-integer comparison");
      default:
        return note_unsupported(std::string("operator ") +
                                std::string(op_name(t.op())));
    }
  }

  void add_atom(Atom a) {
    atom_index.emplace(a.term, atoms.size());
    atoms.push_back(std::move(a));
  }

  bool add_int_atom(const Term& t, bool equality) {
    LinearPoly p = linear_decompose(t.child(0));
    p -= linear_decompose(t.child(1));
    Integer bound = -p.constant;
    p.constant = 0;
    if (!poly_over_variables(p)) return note_unsupported("nonlinear atom");
    add_atom(Atom{t, false, equality, std::move(p), std::move(bound)});
    return true;
  }

  Tri teval(const Term& t) const {
    if (t.is_constant()) {
      return t.value().as_bool() ? Tri::True : Tri::False;
    }
    auto it = atom_index.find(t);
    if (it != atom_index.end()) return assignment[it->second];
    switch (t.op()) {
      case Op::And: {
        Tri acc = Tri::True;
        for (size_t i = 0; i < t.arity(); ++i) {
          Tri c = teval(t.child(i));
          if (c == Tri::False) return Tri::False;
          if (c == Tri::Open) acc = Tri::Open;
        }
        return acc;
      }
      case Op::Or: {
        Tri acc = Tri::False;
        for (size_t i = 0; i < t.arity(); ++i) {
          Tri c = teval(t.child(i));
          if (c == Tri::True) return Tri::True;
          if (c == Tri::Open) acc = Tri::Open;
        }
        return acc;
      }
      case Op::Not:
        return tri_not(teval(t.child(0)));
      case Op::Implies: {
        Tri a = teval(t.child(0));
        Tri b = teval(t.child(1));
        if (a == Tri::False || b == Tri::True) return Tri::True;
        if (a == Tri::True && b == Tri::False) return Tri::False;
        return Tri::Open;
      }
      case Op::Ite: {
        Tri c = teval(t.child(0));
        Tri a = teval(t.child(1));
        Tri b = teval(t.child(2));
        if (c == Tri::True) return a;
        if (c == Tri::False) return b;
        if (a == b) return a;
        return Tri::Open;
      }
      case Op::Eq: {
        Tri a = teval(t.child(0));
        Tri b = teval(t.child(1));
        if (a == Tri::Open || b == Tri::Open) return Tri::Open;
        return a == b ? Tri::True : Tri::False;
      }
      default:
        return Tri::Open;
    }
  }

  /** DPLL over atom truth values; true once a feasible leaf is found. */
  bool search(size_t next_atom) {
    if (++nodes > budget.max_nodes) {
      saw_unknown = true;
      return false;
    }
    Tri now = teval(formula);
    if (now == Tri::False) return false;
    if (now == Tri::True) return leaf_feasible();
    for (size_t i = next_atom; i < atoms.size(); ++i) {
      if (assignment[i] != Tri::Open) continue;
      for (Tri v : {Tri::True, Tri::False}) {
        assignment[i] = v;
        if (search(i + 1)) return true;
        assignment[i] = Tri::Open;
      }
      return false;
    }
    return false;  // everything assigned yet still open: cannot happen
  }

  /** Turns assigned integer atoms into rows; splits disequalities. */
  bool leaf_feasible() {
    std::vector<Row> rows;
    std::vector<size_t> diseq;
    for (size_t i = 0; i < atoms.size(); ++i) {
      if (assignment[i] == Tri::Open || atoms[i].is_bool_var) continue;
      const Atom& a = atoms[i];
      bool truth = assignment[i] == Tri::True;
      if (a.is_equality) {
        if (truth) {
          rows.push_back(make_row(a.poly, a.bound, false));
          rows.push_back(make_row(a.poly, a.bound, true));
        } else {
          diseq.push_back(i);
        }
      } else {
        if (truth) {
          rows.push_back(make_row(a.poly, a.bound, false));
        } else {
          // not(p <= c)  <=>  -p <= -c-1
          LinearPoly neg = a.poly;
          neg.scale(-1);
          rows.push_back(make_row(neg, -a.bound - 1, false));
        }
      }
    }
    int cases = 1;
    for (size_t k = 0; k < diseq.size(); ++k) {
      cases *= 2;
      if (cases > budget.max_diseq_cases) {
        saw_unknown = true;
        return false;
      }
    }
    return split_disequalities(rows, diseq, 0);
  }

  Row make_row(const LinearPoly& p, const Integer& bound, bool negated) {
    Row r;
    r.coeffs.assign(int_vars.size(), 0);
    for (const auto& [v, c] : p.coeffs) {
      r.coeffs[var_index.at(v)] = negated ? -c : c;
    }
    r.bound = negated ? -bound : bound;
    return r;
  }

  bool split_disequalities(std::vector<Row>& rows,
                           const std::vector<size_t>& diseq, size_t k) {
    if (k == diseq.size()) {
      IntSolver solver{int_vars.size(), {}};
      IntFeas feas = solver.solve(rows, budget.bb_depth);
      if (feas == IntFeas::Unknown) {
        saw_unknown = true;
        return false;
      }
      if (feas == IntFeas::Infeasible) return false;
      model_point = solver.point;
      model_assignment = assignment;
      return true;
    }
    const Atom& a = atoms[diseq[k]];
    // p < c
    rows.push_back(make_row(a.poly, a.bound - 1, false));
    if (split_disequalities(rows, diseq, k + 1)) return true;
    rows.pop_back();
    // p > c
    LinearPoly neg = a.poly;
    neg.scale(-1);
    rows.push_back(make_row(neg, -a.bound - 1, false));
    bool ok = split_disequalities(rows, diseq, k + 1);
    rows.pop_back();
    return ok;
  }
};

}  // namespace

LiaResult qf_lia_sat(const Term& formula, const LiaBudget& budget) {
  Term f = rewrite(formula);
  if (f.is_constant()) {
    if (!f.value().as_bool()) return {LiaStatus::Unsat, {}, ""};
    Environment model;
    for (const auto& v : free_variables(formula)) {
      if (v.sort().is_int()) {
        model.bind(v.name(), Value::of_int(0));
      } else if (v.sort().is_bool()) {
        model.bind(v.name(), Value(false));
      } else {
        return {LiaStatus::Unknown, {}, "non-arithmetic variable"};
      }
    }
    return {LiaStatus::Sat, std::move(model), ""};
  }

  SatSearch search{budget, f, {}, {}, {}, {}, {}, 0, false, {}, {}, {}};
  if (!search.collect(f)) {
    return {LiaStatus::Unknown, {}, "unsupported structure: " +
                                        search.unsupported};
  }
  // Deterministic variable order for the feasibility core.
  for (const auto& a : search.atoms) {
    if (a.is_bool_var) continue;
    for (const auto& [v, c] : a.poly.coeffs) {
      if (!search.var_index.count(v)) {
        if (!v.is_variable()) {
          return {LiaStatus::Unknown, {}, "unsupported structure: "
                                          "composite atom"};
        }
        search.var_index.emplace(v, 0);
        search.int_vars.push_back(v);
      }
    }
  }
  std::sort(search.int_vars.begin(), search.int_vars.end());
  for (size_t i = 0; i < search.int_vars.size(); ++i) {
    search.var_index[search.int_vars[i]] = i;
  }
  search.assignment.assign(search.atoms.size(), Tri::Open);

  if (!search.search(0)) {
    if (search.saw_unknown) return {LiaStatus::Unknown, {}, "budget"};
    return {LiaStatus::Unsat, {}, ""};
  }

  Environment model;
  for (size_t i = 0; i < search.int_vars.size(); ++i) {
    model.bind(search.int_vars[i].name(), Value(search.model_point[i]));
  }
  for (size_t i = 0; i < search.atoms.size(); ++i) {
    if (search.atoms[i].is_bool_var) {
      model.bind(search.atoms[i].term.name(),
                 Value(search.model_assignment[i] == Tri::True));
    }
  }
  for (const auto& v : free_variables(formula)) {
    if (model.lookup(v.name())) continue;
    if (v.sort().is_int()) {
      model.bind(v.name(), Value::of_int(0));
    } else if (v.sort().is_bool()) {
      model.bind(v.name(), Value(false));
    } else {
      return {LiaStatus::Unknown, {}, "non-arithmetic variable"};
    }
  }
  if (!evaluate(formula, model).as_bool()) {
    return {LiaStatus::Unknown, {}, "model validation failed"};
  }
  return {LiaStatus::Sat, std::move(model), ""};
}

}  // namespace minisy
