#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "glace/errors.hpp"
#include "glace/evaluator.hpp"
#include "glace/gauss.hpp"
#include "glace/graph.hpp"
#include "glace/sampler.hpp"
#include "glace/synth.hpp"
#include "glace/trainer.hpp"

namespace py = pybind11;
using namespace glace;

namespace {

GaussianEmbedding gaussian_from_numpy(py::array_t<double> mu,
                                      py::array_t<double> sigma) {
  GaussianEmbedding z;
  auto m = mu.unchecked<1>();
  auto s = sigma.unchecked<1>();
  z.mu.assign(m.data(0), m.data(0) + m.shape(0));
  z.sigma.assign(s.data(0), s.data(0) + s.shape(0));
  return z;
}

py::array_t<double> matrix_to_numpy(const std::vector<std::vector<double>>& rows) {
  const py::ssize_t n = static_cast<py::ssize_t>(rows.size());
  const py::ssize_t d = n > 0 ? static_cast<py::ssize_t>(rows[0].size()) : 0;
  py::array_t<double> out({n, d});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i)
    for (py::ssize_t j = 0; j < d; ++j) view(i, j) = rows[i][j];
  return out;
}

// (mu, sigma) matrices for every node; sigma is empty for LACE.
std::pair<py::array_t<double>, py::array_t<double>> embeddings_numpy(
    const ModelParams& model, const AttributedGraph& g) {
  const NodeEmbeddings emb = embed_all(model, g.attribute_rows());
  if (model.kind == ModelKind::Lace) {
    const std::vector<py::ssize_t> empty_shape{0, 0};
    return {matrix_to_numpy(emb.points), py::array_t<double>(empty_shape)};
  }
  std::vector<std::vector<double>> mu(emb.gauss.size()), sigma(emb.gauss.size());
  for (std::size_t v = 0; v < emb.gauss.size(); ++v) {
    mu[v] = emb.gauss[v].mu;
    sigma[v] = emb.gauss[v].sigma;
  }
  return {matrix_to_numpy(mu), matrix_to_numpy(sigma)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian embeddings for large attributed graphs";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ParseError>(m, "GlaceParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "GlaceValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "GlaceNumericalError", PyExc_ArithmeticError);

  py::enum_<ProximityMode>(m, "ProximityMode")
      .value("FIRST", ProximityMode::First)
      .value("SECOND", ProximityMode::Second);
  py::enum_<ModelKind>(m, "ModelKind")
      .value("GLACE", ModelKind::Glace)
      .value("LACE", ModelKind::Lace);

  py::class_<Edge>(m, "Edge")
      .def_readonly("src", &Edge::src)
      .def_readonly("dst", &Edge::dst)
      .def_readonly("weight", &Edge::weight)
      .def("__repr__", [](const Edge& e) {
        return "Edge(" + std::to_string(e.src) + ", " + std::to_string(e.dst) +
               ", w=" + std::to_string(e.weight) + ")";
      });

  py::class_<AttributedGraph>(m, "AttributedGraph")
      .def_property_readonly("num_nodes", &AttributedGraph::num_nodes)
      .def_property_readonly("num_edges", &AttributedGraph::num_edges)
      .def_property_readonly("num_arcs", &AttributedGraph::num_arcs)
      .def_property_readonly("attr_dim", &AttributedGraph::attr_dim)
      .def_property_readonly("directed", &AttributedGraph::directed)
      .def("edges", &AttributedGraph::edges)
      .def("node_id", &AttributedGraph::node_id)
      .def("index_of", &AttributedGraph::index_of)
      .def("out_degree", &AttributedGraph::out_degree)
      .def("neighbors", [](const AttributedGraph& g, int v) {
        const auto nb = g.neighbors(v);
        return std::vector<int>(nb.begin(), nb.end());
      })
      .def("attributes", [](const AttributedGraph& g, int v) {
        return g.attributes(v).nz;
      });

  py::class_<EdgeSplit>(m, "EdgeSplit")
      .def_readonly("train_edges", &EdgeSplit::train_edges)
      .def_readonly("val_pos", &EdgeSplit::val_pos)
      .def_readonly("test_pos", &EdgeSplit::test_pos)
      .def_readonly("val_neg", &EdgeSplit::val_neg)
      .def_readonly("test_neg", &EdgeSplit::test_neg)
      .def_readonly("seed", &EdgeSplit::seed);

  py::class_<InductiveSplit>(m, "InductiveSplit")
      .def_readonly("visible_graph", &InductiveSplit::visible_graph)
      .def_readonly("hidden_nodes", &InductiveSplit::hidden_nodes)
      .def_readonly("eval_pos", &InductiveSplit::eval_pos)
      .def_readonly("eval_neg", &InductiveSplit::eval_neg);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("mode", &TrainConfig::mode)
      .def_readwrite("kind", &TrainConfig::kind)
      .def_readwrite("embed_dim", &TrainConfig::embed_dim)
      .def_readwrite("hidden_dim", &TrainConfig::hidden_dim)
      .def_readwrite("negatives", &TrainConfig::negatives)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("max_iters", &TrainConfig::max_iters)
      .def_readwrite("patience", &TrainConfig::patience)
      .def_readwrite("val_check_every", &TrainConfig::val_check_every)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("symmetric_kl", &TrainConfig::symmetric_kl)
      .def_readwrite("hidden_relu", &TrainConfig::hidden_relu)
      .def_readwrite("workers", &TrainConfig::workers);

  py::class_<TrainReport>(m, "TrainReport")
      .def_readonly("iterations_run", &TrainReport::iterations_run)
      .def_readonly("val_auc_history", &TrainReport::val_auc_history)
      .def_readonly("best_iteration", &TrainReport::best_iteration)
      .def_readonly("wall_clock_sec", &TrainReport::wall_clock_sec);

  py::class_<ModelParams>(m, "ModelParams")
      .def_property_readonly("mode", [](const ModelParams& p) { return p.mode; })
      .def_property_readonly("kind", [](const ModelParams& p) { return p.kind; })
      .def_property_readonly("embed_dim", &ModelParams::embed_dim)
      .def_property_readonly("input_dim", &ModelParams::input_dim)
      .def_property_readonly("symmetric",
                             [](const ModelParams& p) { return p.symmetric; });

  py::class_<SyntheticDataset>(m, "SyntheticDataset")
      .def_readonly("graph", &SyntheticDataset::graph)
      .def_readonly("labels", &SyntheticDataset::labels)
      .def_readonly("class_names", &SyntheticDataset::class_names);

  m.def("load_graph", &load_graph, py::arg("edge_path"), py::arg("attr_path"),
        py::arg("directed") = false);
  m.def("load_labels", [](const std::filesystem::path& p, const AttributedGraph& g) {
    return load_labels(p, g);
  });
  m.def("split_edges", &split_edges, py::arg("graph"), py::arg("test_frac"),
        py::arg("val_frac"), py::arg("seed"));
  m.def("hide_nodes", &hide_nodes, py::arg("graph"), py::arg("frac"), py::arg("seed"));
  m.def("write_split_manifest", &write_split_manifest);
  m.def("read_split_manifest", &read_split_manifest);

  m.def("train", &train, py::arg("graph"), py::arg("split"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("save_checkpoint", &save_checkpoint);
  m.def("load_checkpoint", &load_checkpoint);

  m.def("embeddings", &embeddings_numpy, py::arg("model"), py::arg("graph"),
        "Per-node (mu, sigma) matrices; sigma is empty for LACE models");
  m.def("export_embeddings", &export_embeddings, py::arg("model"), py::arg("graph"),
        py::arg("path"), py::arg("include_sigma") = true);

  m.def(
      "evaluate_link_prediction",
      [](const std::vector<const ModelParams*>& models, const AttributedGraph& g,
         const std::vector<std::pair<int, int>>& pos,
         const std::vector<std::pair<int, int>>& neg, bool normalize) {
        return evaluate_link_prediction(models, g.attribute_rows(), pos, neg,
                                        normalize);
      },
      py::arg("models"), py::arg("graph"), py::arg("pos"), py::arg("neg"),
      py::arg("normalize") = true);
  m.def("link_prediction", [](const std::vector<double>& pos,
                              const std::vector<double>& neg) {
    return link_prediction(pos, neg);
  });
  m.def(
      "node_classification",
      [](const ModelParams& model, const AttributedGraph& g,
         const std::vector<int>& labels, int num_classes, double train_frac,
         int trials, std::uint64_t seed, bool with_sigma) {
        ClassificationConfig cfg;
        cfg.train_frac = train_frac;
        cfg.trials = trials;
        cfg.seed = seed;
        const auto feats =
            embedding_features(model, g.attribute_rows(), with_sigma);
        return node_classification(feats, labels, num_classes, cfg);
      },
      py::arg("model"), py::arg("graph"), py::arg("labels"), py::arg("num_classes"),
      py::arg("train_frac") = 0.5, py::arg("trials") = 10, py::arg("seed") = 0,
      py::arg("with_sigma") = false,
      py::call_guard<py::gil_scoped_release>());
  m.def("inductive_link_prediction", &inductive_link_prediction,
        py::arg("model"), py::arg("split"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "score_pair",
      [](const ModelParams& model, const AttributedGraph& g, int i, int j) {
        return score_pair(model, g.attributes(i), g.attributes(j));
      },
      py::arg("model"), py::arg("graph"), py::arg("i"), py::arg("j"));

  m.def(
      "kl",
      [](py::array_t<double> mu_p, py::array_t<double> sigma_p,
         py::array_t<double> mu_q, py::array_t<double> sigma_q) {
        return kl(gaussian_from_numpy(mu_p, sigma_p),
                  gaussian_from_numpy(mu_q, sigma_q));
      },
      "KL divergence between diagonal Gaussians (sigma = variances)");
  m.def(
      "dissimilarity",
      [](py::array_t<double> mu_i, py::array_t<double> sigma_i,
         py::array_t<double> mu_j, py::array_t<double> sigma_j, bool symmetric) {
        return dissimilarity(gaussian_from_numpy(mu_i, sigma_i),
                             gaussian_from_numpy(mu_j, sigma_j), symmetric);
      },
      py::arg("mu_i"), py::arg("sigma_i"), py::arg("mu_j"), py::arg("sigma_j"),
      py::arg("symmetric") = true);

  m.def("make_citation_graph", &make_citation_graph);
  m.def("citation_preset", &citation_preset);
  m.def("make_sbm", &make_sbm, py::arg("num_nodes"), py::arg("num_blocks"),
        py::arg("p_in"), py::arg("p_out"), py::arg("seed"));
  m.def("write_dataset", &write_dataset, py::arg("dataset"), py::arg("dir"),
        py::arg("stem"));

  py::class_<CitationConfig>(m, "CitationConfig")
      .def(py::init<>())
      .def_readwrite("num_nodes", &CitationConfig::num_nodes)
      .def_readwrite("num_edges", &CitationConfig::num_edges)
      .def_readwrite("attr_dim", &CitationConfig::attr_dim)
      .def_readwrite("num_classes", &CitationConfig::num_classes)
      .def_readwrite("intra_class_edge_frac", &CitationConfig::intra_class_edge_frac)
      .def_readwrite("topic_word_frac", &CitationConfig::topic_word_frac)
      .def_readwrite("attr_noise_frac", &CitationConfig::attr_noise_frac)
      .def_readwrite("seed", &CitationConfig::seed);
}
