#include "minisy/printer.hpp"

namespace minisy {

std::string print_define_fun(const SynthFun& f, const Term& body) {
  std::string out = "(define-fun " + f.name + " (";
  for (size_t i = 0; i < f.params.size(); ++i) {
    if (i > 0) out += " ";
    out += "(" + f.params[i].name() + " " + f.params[i].sort().str() + ")";
  }
  out += ") " + f.ret.str() + " " + body.str() + ")";
  return out;
}

}  // namespace minisy
