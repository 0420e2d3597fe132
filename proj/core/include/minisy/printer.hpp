#ifndef MINISY_PRINTER_HPP
#define MINISY_PRINTER_HPP

#include <string>

#include "minisy/problem.hpp"

namespace minisy {

/** Renders `(define-fun name ((p S) ...) Ret body)` on one line. */
std::string print_define_fun(const SynthFun& f, const Term& body);

}  // namespace minisy

#endif
