#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "paratok/error.h"
#include "paratok/metrics.h"
#include "paratok/parallel_vocab.h"
#include "paratok/wordpiece.h"

namespace py = pybind11;

namespace paratok {
namespace {

constexpr ErrorKind kAllKinds[] = {
    ErrorKind::kEmptyCorpus,         ErrorKind::kCapTooSmall,
    ErrorKind::kIndexOutOfRange,     ErrorKind::kNotInVocabulary,
    ErrorKind::kProviderFailure,     ErrorKind::kMissingLexicon,
    ErrorKind::kMissingMonolingualVocab, ErrorKind::kCapExceededBySpecials,
    ErrorKind::kUnknownLanguageToken, ErrorKind::kZeroDimension,
    ErrorKind::kPositionOverflow,    ErrorKind::kIdOutOfRange,
    ErrorKind::kDimensionMismatch,   ErrorKind::kNoWords,
    ErrorKind::kZeroTokenSentence,   ErrorKind::kDegenerateZeroVector,
    ErrorKind::kRankDeficient,       ErrorKind::kFileNotFound,
    ErrorKind::kNotUtf8Fatal,        ErrorKind::kInvalidArgument,
    ErrorKind::kInvalidFormat,       ErrorKind::kIoError,
    ErrorKind::kValidation,
};

std::map<ErrorKind, PyObject*>& exception_types() {
  static std::map<ErrorKind, PyObject*> types;
  return types;
}

py::dict to_record(const Encoding& e) {
  py::dict d;
  d["ids"] = e.ids;
  d["attention_mask"] = std::vector<int>(e.attention_mask.begin(), e.attention_mask.end());
  d["type_ids"] = std::vector<int>(e.type_ids.begin(), e.type_ids.end());
  d["language_id"] = e.language_id;
  return d;
}

// Accepts a language code or tag.
std::string tag_for(const ParallelVocabSet& set, const std::string& lang) {
  if (auto idx = set.find_code(lang)) return set.languages()[*idx].tag;
  return lang;
}

std::size_t index_for(const ParallelVocabSet& set, const std::string& lang) {
  auto idx = set.find_code(lang);
  if (!idx) idx = set.find_tag(lang);
  if (!idx) throw Error(ErrorKind::kUnknownLanguageToken, "unknown language '" + lang + "'");
  return *idx;
}

ParallelCorpus corpus_from(const py::object& corpus) {
  if (py::isinstance<py::str>(corpus)) return ParallelCorpus::load_tsv(corpus.cast<std::string>());
  auto rows = corpus.cast<std::vector<std::vector<std::string>>>();
  if (rows.empty()) throw Error(ErrorKind::kInvalidArgument, "corpus has no header row");
  std::vector<std::string> header = rows.front();
  rows.erase(rows.begin());
  return ParallelCorpus(std::move(header), std::move(rows));
}

}  // namespace
}  // namespace paratok

PYBIND11_MODULE(_paratok, m) {
  using namespace paratok;
  m.doc() = "paratok core bindings";

  PyObject* base = PyErr_NewException("paratok.ParatokError", PyExc_RuntimeError, nullptr);
  m.add_object("ParatokError", py::handle(base));
  for (ErrorKind kind : kAllKinds) {
    const std::string name(error_name(kind));
    PyObject* type = PyErr_NewException(("paratok." + name).c_str(), base, nullptr);
    m.add_object(name.c_str(), py::handle(type));
    exception_types()[kind] = type;
  }
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(exception_types().at(e.kind()), e.what());
    }
  });

  py::class_<Vocabulary, std::shared_ptr<Vocabulary>>(m, "Vocabulary")
      .def("__len__", &Vocabulary::size)
      .def("tokens", &Vocabulary::tokens)
      .def(
          "encode",
          [](const Vocabulary& v, const std::string& text) {
            Encoding e;
            {
              py::gil_scoped_release release;
              e = encode(v, text);
            }
            return to_record(e);
          },
          py::arg("text"))
      .def(
          "decode",
          [](const Vocabulary& v, const std::vector<TokenId>& ids) { return decode(v, ids); },
          py::arg("ids"))
      .def(
          "fertility",
          [](const Vocabulary& v, const std::vector<std::string>& sentences) {
            py::gil_scoped_release release;
            return fertility(SharedTokenizer(v), "", sentences).value;
          },
          py::arg("sentences"));

  py::class_<ParallelVocabSet, std::shared_ptr<ParallelVocabSet>>(m, "ParallelTokenizer")
      .def("__len__", &ParallelVocabSet::size)
      .def_property_readonly("pivot", &ParallelVocabSet::pivot)
      .def_property_readonly("languages",
                             [](const ParallelVocabSet& s) {
                               std::vector<std::pair<std::string, std::string>> out;
                               for (const auto& l : s.languages()) out.emplace_back(l.code, l.tag);
                               return out;
                             })
      .def_property_readonly("aligned_mask", &ParallelVocabSet::aligned_mask)
      .def(
          "tokens",
          [](const ParallelVocabSet& s, const std::string& lang) {
            return s.vocab(index_for(s, lang)).tokens();
          },
          py::arg("lang"))
      .def(
          "encode",
          [](const ParallelVocabSet& s, const std::string& lang, const std::string& text) {
            const std::string tag = tag_for(s, lang);
            Encoding e;
            {
              py::gil_scoped_release release;
              e = dispatch_encode(s, tag, text);
            }
            return to_record(e);
          },
          py::arg("lang"), py::arg("text"))
      .def(
          "decode",
          [](const ParallelVocabSet& s, const std::string& lang, const std::vector<TokenId>& ids) {
            return decode(s.vocab(index_for(s, lang)), ids);
          },
          py::arg("lang"), py::arg("ids"))
      .def(
          "fertility",
          [](const ParallelVocabSet& s, const std::string& lang,
             const std::vector<std::string>& sentences) {
            py::gil_scoped_release release;
            return fertility(ParallelTokenizer(s), lang, sentences).value;
          },
          py::arg("lang"), py::arg("sentences"))
      .def(
          "parity",
          [](const ParallelVocabSet& s, const py::object& corpus, const std::string& lang,
             const std::string& reference, bool corpus_ratio) {
            const ParallelCorpus c = corpus_from(corpus);
            py::gil_scoped_release release;
            return parity(ParallelTokenizer(s), c, lang, reference,
                          corpus_ratio ? ParityMode::kCorpusRatio
                                       : ParityMode::kMeanSentenceRatio)
                .value;
          },
          py::arg("corpus"), py::arg("lang"), py::arg("reference"),
          py::arg("corpus_ratio") = false);

  m.def(
      "load",
      [](const std::string& path) {
        return std::make_shared<ParallelVocabSet>(ParallelVocabSet::load(path));
      },
      py::arg("path"), "Loads a parallel vocabulary directory.");
  m.def(
      "load_vocab",
      [](const std::string& path) { return std::make_shared<Vocabulary>(Vocabulary::load(path)); },
      py::arg("path"), "Loads a single vocabulary file.");
  m.def(
      "xsim",
      [](const Matrix& src, const Matrix& tgt, std::size_t k) {
        py::gil_scoped_release release;
        return xsim_error_rate(src, tgt, k);
      },
      py::arg("src"), py::arg("tgt"), py::arg("k") = 4);
}
