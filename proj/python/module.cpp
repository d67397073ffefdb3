#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "evfuse/error.hpp"
#include "evfuse/evidence.hpp"
#include "evfuse/frameselect.hpp"
#include "evfuse/fusion.hpp"
#include "evfuse/metrics.hpp"
#include "evfuse/records.hpp"
#include "evfuse/taxonomy.hpp"

namespace py = pybind11;
using namespace evfuse;

namespace {

// Python sees modalities as plain strings.
using PyLogits = std::map<std::string, Vector>;

LogitSet to_logits(const PyLogits& in) {
  LogitSet out;
  for (const auto& [name, values] : in) out.emplace(Modality::parse(name), values);
  return out;
}

PyLogits from_evidence(const EvidenceSet& in) {
  PyLogits out;
  for (const auto& [m, values] : in) out.emplace(m.name(), values);
  return out;
}

FusionOrder to_order(const std::vector<std::string>& names) {
  FusionOrder order;
  for (const auto& n : names) order.push_back(Modality::parse(n));
  return order;
}

Mitigation to_mode(const std::string& mode) { return parse_mitigation(mode); }

std::vector<Prediction> to_predictions(
    const std::vector<std::pair<std::string, Vector>>& preds) {
  std::vector<Prediction> out;
  out.reserve(preds.size());
  for (const auto& [id, probs] : preds) out.push_back(Prediction::from_probabilities(id, probs, 0.0));
  return out;
}

std::vector<LabeledTruth> to_truths(const std::vector<std::pair<std::string, std::string>>& truths,
                                    const LabelTaxonomy& taxonomy) {
  std::vector<LabeledTruth> out;
  out.reserve(truths.size());
  for (const auto& [id, label] : truths) out.push_back({id, taxonomy.resolve(label)});
  return out;
}

py::tuple combined(const Combined& c) { return py::make_tuple(c.opinion, c.conflict); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dirichlet-evidence / Dempster-Shafer fusion of per-modality logits";

  static py::exception<Error> error(m, "EvfuseError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<Opinion>(m, "Opinion")
      .def(py::init<Vector, double>(), py::arg("beliefs"), py::arg("uncertainty"))
      .def_static("vacuous", &Opinion::vacuous, py::arg("classes"))
      .def_readwrite("beliefs", &Opinion::beliefs)
      .def_readwrite("uncertainty", &Opinion::uncertainty)
      .def("__eq__", [](const Opinion& a, const Opinion& b) { return a == b; })
      .def("__repr__", [](const Opinion& o) {
        std::ostringstream s;
        s << "Opinion(beliefs=" << py::repr(py::cast(o.beliefs)).cast<std::string>()
          << ", uncertainty=" << o.uncertainty << ")";
        return s.str();
      });

  py::class_<DirichletParams>(m, "DirichletParams")
      .def(py::init<Vector, double>(), py::arg("alpha"), py::arg("strength"))
      .def_readwrite("alpha", &DirichletParams::alpha)
      .def_readwrite("strength", &DirichletParams::strength);

  py::class_<FusionResult>(m, "FusionResult")
      .def_readonly("fused", &FusionResult::fused)
      .def_readonly("probabilities", &FusionResult::probabilities)
      .def_readonly("dirichlet", &FusionResult::dirichlet)
      .def_readonly("conflict_trace", &FusionResult::conflict_trace)
      .def_property_readonly("per_modality", [](const FusionResult& r) {
        std::vector<std::pair<std::string, Opinion>> out;
        for (const auto& [mod, op] : r.per_modality) out.emplace_back(mod.name(), op);
        return out;
      });

  m.def("advanced_evidence", [](const PyLogits& r) { return from_evidence(advanced_evidence(to_logits(r))); },
        py::arg("record"), "Shift every modality by the smallest logit in the record.");
  m.def("basic_evidence", [](const PyLogits& r) { return from_evidence(basic_evidence(to_logits(r))); },
        py::arg("record"), "Clip each logit at zero.");
  m.def("evidence_to_dirichlet", &evidence_to_dirichlet, py::arg("evidence"));
  m.def("dirichlet_to_opinion", &dirichlet_to_opinion, py::arg("params"));
  m.def("ds_combine", [](const Opinion& a, const Opinion& b) { return combined(ds_combine(a, b)); },
        py::arg("lhs"), py::arg("rhs"), "Returns (opinion, conflict).");
  m.def("ds_combine_oracle",
        [](const Opinion& a, const Opinion& b) { return combined(ds_combine_oracle(a, b)); },
        py::arg("lhs"), py::arg("rhs"));
  m.def("opinion_to_probabilities", &opinion_to_probabilities, py::arg("opinion"),
        "Returns (DirichletParams, probabilities).");
  m.def("fuse_sequence",
        [](const std::vector<std::pair<std::string, Opinion>>& ops) {
          ModalityOpinions seq;
          for (const auto& [name, op] : ops) seq.emplace_back(Modality::parse(name), op);
          return fuse_sequence(seq);
        },
        py::arg("opinions"));
  m.def("fuse_record",
        [](const PyLogits& r, const std::string& mode, const std::vector<std::string>& order) {
          return fuse_record(to_logits(r), to_mode(mode), to_order(order));
        },
        py::arg("record"), py::arg("mode") = "advanced",
        py::arg("order") = std::vector<std::string>{"audio", "video", "text"});

  m.def("select_best_frame",
        [](const std::vector<std::pair<std::uint64_t, Vector>>& frames, std::size_t stride) {
          FrameScoreSequence seq{"", {}, stride};
          for (const auto& [index, scores] : frames) seq.frames.push_back({index, scores});
          const FrameChoice c = select_best_frame(seq);
          return py::make_tuple(c.frame_index, c.saliency);
        },
        py::arg("frames"), py::arg("stride") = kDefaultFrameStride,
        "frames: [(frame_index, scores)]. Returns (frame_index, saliency).");

  py::class_<LabelTaxonomy>(m, "LabelTaxonomy")
      .def(py::init<std::vector<std::string>, std::size_t, std::map<std::string, std::string>>(),
           py::arg("classes"), py::arg("neutral_index"),
           py::arg("aliases") = std::map<std::string, std::string>{})
      .def_static("default", &LabelTaxonomy::default_taxonomy)
      .def_static("from_config",
                  [](const std::string& text) {
                    std::istringstream in(text);
                    return LabelTaxonomy::parse(in);
                  })
      .def_property_readonly("classes", &LabelTaxonomy::classes)
      .def_property_readonly("neutral_index", &LabelTaxonomy::neutral_index)
      .def_property_readonly("aliases", &LabelTaxonomy::aliases)
      .def("resolve", [](const LabelTaxonomy& t, const std::string& label) {
        const Truth truth = t.resolve(label);
        return py::make_tuple(truth.label, truth.class_index);
      });

  m.def("load_records",
        [](const std::string& text, const LabelTaxonomy& taxonomy, bool fail_fast) {
          std::istringstream in(text);
          const LoadResult r = load_records(in, taxonomy, {fail_fast});
          py::list records;
          for (const auto& rec : r.records) {
            py::dict d;
            d["id"] = rec.id;
            PyLogits logits;
            for (const auto& [mod, v] : rec.logits) logits.emplace(mod.name(), v);
            d["logits"] = logits;
            d["label"] = rec.label;
            d["truth"] = rec.truth ? py::make_tuple(rec.truth->label, rec.truth->class_index)
                                   : py::object(py::none());
            d["metadata"] = rec.metadata;
            records.append(d);
          }
          std::vector<std::pair<std::size_t, std::string>> diagnostics;
          for (const auto& diag : r.diagnostics) diagnostics.emplace_back(diag.line, diag.message);
          return py::make_tuple(records, diagnostics);
        },
        py::arg("text"), py::arg("taxonomy"), py::arg("fail_fast") = false,
        "Returns (records, [(line, message)]).");

  // Metrics take predictions as [(id, probabilities)] and truths as [(id, label)].
  m.def("accuracy_standard",
        [](const std::vector<std::pair<std::string, Vector>>& p,
           const std::vector<std::pair<std::string, std::string>>& t, const LabelTaxonomy& tax,
           bool exclude_unseen) {
          return accuracy_standard(to_predictions(p), to_truths(t, tax), tax, {exclude_unseen});
        },
        py::arg("predictions"), py::arg("truths"), py::arg("taxonomy"),
        py::arg("exclude_unseen") = false);
  m.def("accuracy_neutral_tolerant",
        [](const std::vector<std::pair<std::string, Vector>>& p,
           const std::vector<std::pair<std::string, std::string>>& t, const LabelTaxonomy& tax,
           bool exclude_unseen) {
          return accuracy_neutral_tolerant(to_predictions(p), to_truths(t, tax), tax,
                                           {exclude_unseen});
        },
        py::arg("predictions"), py::arg("truths"), py::arg("taxonomy"),
        py::arg("exclude_unseen") = false);
  m.def("confusion",
        [](const std::vector<std::pair<std::string, Vector>>& p,
           const std::vector<std::pair<std::string, std::string>>& t, const LabelTaxonomy& tax) {
          const ConfusionMatrix c = confusion(to_predictions(p), to_truths(t, tax), tax);
          return py::make_tuple(c.row_labels, c.column_labels, c.counts);
        },
        py::arg("predictions"), py::arg("truths"), py::arg("taxonomy"),
        "Returns (row_labels, column_labels, counts).");
  m.def("fallback_rate",
        [](const std::vector<std::pair<std::string, Vector>>& p,
           const std::vector<std::pair<std::string, std::string>>& t, const LabelTaxonomy& tax,
           const std::string& label) {
          return fallback_rate(to_predictions(p), to_truths(t, tax), tax, label);
        },
        py::arg("predictions"), py::arg("truths"), py::arg("taxonomy"), py::arg("label"));

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
