#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cli.hpp"
#include "lexis/ingest.hpp"
#include "lexis/report.hpp"
#include "lexis/service.hpp"

namespace py = pybind11;

namespace {

lexis::ServiceState make_state(const std::filesystem::path& corpus, const std::optional<std::filesystem::path>& model,
                               const std::optional<std::filesystem::path>& lexicon) {
  lexis::ServiceState s;
  s.corpus = lexis::load_corpus(corpus);
  if (model) s.model = lexis::load_model(*model);
  if (lexicon) s.lexicons = lexis::load_lexicons(*lexicon);
  return s;
}

}  // namespace

PYBIND11_MODULE(_lexis, m) {
  m.attr("__version__") = std::string(lexis::kVersion);

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const lexis::Error& e) {
      const auto cls = py::module_::import("lexis._errors").attr("LexisError");
      const auto exc = cls(std::string(lexis::to_string(e.code())), e.what());
      PyErr_SetObject(cls.ptr(), exc.ptr());
    }
  });

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"lexis"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = lexis::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process. Returns (exit_code, stdout, stderr).");

  py::class_<lexis::ServiceState>(m, "Session")
      .def(py::init(&make_state), py::arg("corpus"), py::arg("model") = py::none(), py::arg("lexicon") = py::none())
      .def(
          "handle",
          [](const lexis::ServiceState& s, const std::string& path, const std::vector<std::pair<std::string, std::string>>& params) {
            lexis::QueryParams q(params.begin(), params.end());
            lexis::Response r;
            {
              py::gil_scoped_release release;
              r = lexis::handle(s, path, q);
            }
            return py::make_tuple(r.status, r.body);
          },
          py::arg("path"), py::arg("params") = std::vector<std::pair<std::string, std::string>>{},
          "Answers one query. Returns (http_status, json_body).")
      .def_property_readonly("documents", [](const lexis::ServiceState& s) { return s.corpus.size(); })
      .def_property_readonly("has_model", [](const lexis::ServiceState& s) { return s.model.has_value(); });
}
