#include <pybind11/pybind11.h>

namespace py = pybind11;

PYBIND11_MODULE(_tforge, m) {
  m.doc() = "Clifford+T synthesis core";
  m.attr("__version__") = "0.1.0";
}
