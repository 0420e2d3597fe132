#ifndef MINISY_PARSER_HPP
#define MINISY_PARSER_HPP

#include <stdexcept>
#include <string>

#include "minisy/problem.hpp"

namespace minisy {

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(const std::string& msg, int l, int c)
      : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) +
                           ": " + msg),
        line(l),
        col(c) {}
};

/**
 * Parses a SyGuS v2 input into a Problem. Supports set-logic, synth-fun,
 * synth-inv, declare-var, define-fun, constraint, inv-constraint and
 * check-synth; defined functions are inlined at use. Grammars accept both
 * the two-list form (predeclarations then grouped rules) and a single
 * list mixing (N Sort) predeclarations with (N Sort (gterm...)) or
 * ((N Sort) (gterm...)) groups. Throws ParseError with a 1-based
 * line:column position on malformed input.
 */
Problem parse_problem(const std::string& text);

/** Reads the file (or stdin for "-") and parses its contents. */
Problem parse_problem_file(const std::string& path);

}  // namespace minisy

#endif
