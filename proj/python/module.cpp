// Python bindings. Images are H x W x 3 uint8 arrays; transforms and
// pipelines are dicts in the same shape as the JSON config.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "flatcolor/cli.hpp"
#include "flatcolor/config.hpp"
#include "flatcolor/dataset.hpp"
#include "flatcolor/png_io.hpp"
#include "flatcolor/synthbench.hpp"

namespace py = pybind11;
using namespace flatcolor;

namespace {

using Image = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

Raster to_raster(const Image& arr) {
    if (arr.ndim() != 3 || arr.shape(2) != 3) {
        throw std::invalid_argument("expected an H x W x 3 uint8 array");
    }
    const int h = static_cast<int>(arr.shape(0)), w = static_cast<int>(arr.shape(1));
    Raster out(w, h);
    const auto* p = arr.data();
    for (auto& c : out.cells()) {
        c = Rgb{p[0], p[1], p[2]};
        p += 3;
    }
    return out;
}

Image to_array(const Raster& img) {
    Image arr({static_cast<py::ssize_t>(img.height()), static_cast<py::ssize_t>(img.width()), py::ssize_t{3}});
    auto* p = arr.mutable_data();
    for (const auto& c : img.cells()) {
        *p++ = c.r;
        *p++ = c.g;
        *p++ = c.b;
    }
    return arr;
}

template <class T, class Out>
py::array_t<Out> grid_to_array(const Grid<T>& g) {
    py::array_t<Out> arr({static_cast<py::ssize_t>(g.height()), static_cast<py::ssize_t>(g.width())});
    auto* p = arr.mutable_data();
    for (const auto& v : g.cells()) {
        *p++ = static_cast<Out>(v);
    }
    return arr;
}

Json to_json_value(const py::handle& obj) {
    const auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
    return Json::parse(text);
}

py::object from_json_value(const Json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

RuleParams params_of(double eye_distance, std::int64_t min_area) {
    RuleParams p;
    p.eye_distance_threshold = eye_distance;
    p.min_component_area = min_area;
    p.validate();
    return p;
}

std::vector<std::string> violation_names(const ConformanceReport& r) {
    std::vector<std::string> out;
    for (auto v : r.violations) {
        out.emplace_back(to_string(v));
    }
    return out;
}

py::tuple generated(const Generated& g) { return py::make_tuple(to_array(g.art), grid_to_array<TruthLabel, std::uint8_t>(g.truth)); }

GroundTruth to_truth(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) {
        throw std::invalid_argument("expected an H x W uint8 truth array");
    }
    GroundTruth out(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    const auto* p = arr.data();
    for (auto& v : out.cells()) {
        if (*p > static_cast<std::uint8_t>(TruthLabel::Line)) {
            throw std::invalid_argument("truth labels must be in 0..4");
        }
        v = static_cast<TruthLabel>(*p++);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_flatcolor, m) {
    m.doc() = "Rule-based flat colouring of line art and AB-pair dataset tools";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<PlanError>(m, "PlanError", PyExc_RuntimeError);

    m.def("read_png", [](const std::string& path) { return to_array(read_png(path)); }, py::arg("path"));
    m.def("write_png", [](const std::string& path, const Image& img) { write_png(path, to_raster(img)); },
          py::arg("path"), py::arg("image"));

    m.def("binarize", [](const Image& img, int threshold) {
        return grid_to_array<Ink, bool>(binarize(to_raster(img), threshold));
    }, py::arg("image"), py::arg("threshold") = kDefaultThreshold, "True where a pixel is line ink.");

    m.def("label_components", [](const Image& img, bool eight) {
        const auto map = label_components(binarize(to_raster(img)), eight ? Connectivity::Eight : Connectivity::Four);
        std::vector<std::int64_t> areas;
        for (const auto& c : map.components()) {
            areas.push_back(c.area);
        }
        return py::make_tuple(grid_to_array<std::int32_t, std::int32_t>(map.labels()), areas);
    }, py::arg("image"), py::arg("eight_connected") = false,
       "Returns (labels, areas); line pixels are labelled -1.");

    m.def("classify_parts", [](const Image& img, double eye_distance, std::int64_t min_area) {
        const auto params = params_of(eye_distance, min_area);
        const auto map = label_components(binarize(to_raster(img)));
        std::vector<std::string> out;
        for (auto l : classify_parts(map, params)) {
            out.emplace_back(to_string(l));
        }
        return out;
    }, py::arg("image"), py::arg("eye_distance") = 4.0, py::arg("min_component_area") = 0);

    m.def("rule_color", [](const Image& img, double eye_distance, std::int64_t min_area) {
        const auto r = rule_color(to_raster(img), params_of(eye_distance, min_area));
        return py::make_tuple(to_array(r.colored), violation_names(r.report));
    }, py::arg("image"), py::arg("eye_distance") = 4.0, py::arg("min_component_area") = 0,
       "Returns (coloured image, list of violated assumptions).");

    m.def("apply_transform", [](const Image& img, const py::dict& spec) {
        return to_array(apply_transform(to_raster(img), transform_from_json(to_json_value(spec))));
    }, py::arg("image"), py::arg("transform"));

    m.def("apply_to_pair", [](const py::dict& spec, const Image& a, const Image& b, std::optional<std::uint64_t> seed) {
        ABPair pair{to_raster(a), to_raster(b), "py", {}, ClassTag::Flower};
        const auto out = apply_to_pair(transform_from_json(to_json_value(spec)), pair, seed);
        return py::make_tuple(to_array(out.a), to_array(out.b));
    }, py::arg("transform"), py::arg("a"), py::arg("b"), py::arg("seed") = py::none());

    m.def("pair_violations", [](const Image& a, const Image& b, std::int64_t slack) {
        const ABPair pair{to_raster(a), to_raster(b), "py", {}, ClassTag::Flower};
        return pair_violations(pair, ColorScheme{}, slack);
    }, py::arg("a"), py::arg("b"), py::arg("line_slack") = 0);

    m.def("validate_pipeline", [](const py::dict& spec, int canvas) {
        std::vector<std::string> out;
        for (const auto& i : validate_pipeline(pipeline_from_json(to_json_value(spec)), canvas)) {
            out.push_back(std::string(to_string(i.kind)) + ": " + i.message);
        }
        return out;
    }, py::arg("pipeline"), py::arg("canvas") = 400);

    m.def("default_catalog", [](const std::string& tag, int canvas) {
        return from_json_value(catalog_to_json(default_catalog(class_tag_from_string(tag), canvas)).at("pipelines"));
    }, py::arg("class_tag"), py::arg("canvas") = 400);

    m.def("gen_random_flower", [](std::uint64_t seed, int canvas) { return generated(gen_random_flower(seed, canvas)); },
          py::arg("seed"), py::arg("canvas") = 400, "Returns (line art, truth labels).");
    m.def("gen_random_creature", [](std::uint64_t seed, int canvas) { return generated(gen_random_creature(seed, canvas)); },
          py::arg("seed"), py::arg("canvas") = 400, "Returns (line art, truth labels).");
    m.def("gen_sunflower", [] { return generated(gen_flower(FlowerSpec{})); },
          "The default 400 x 400 sunflower; returns (line art, truth labels).");

    m.def("oracle_coloring", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& truth) {
        return to_array(oracle_coloring(to_truth(truth)));
    }, py::arg("truth"));

    m.def("pixel_accuracy", [](const Image& predicted, const Image& oracle) {
        return pixel_accuracy(to_raster(predicted), to_raster(oracle));
    }, py::arg("predicted"), py::arg("oracle"));

    m.def("evaluate_corpus", [](int n, double fraction, std::uint64_t seed, int canvas) {
        const auto r = evaluate_corpus(gen_corpus(n, fraction, seed, canvas));
        py::dict families;
        for (const auto& [fam, s] : r.families) {
            py::dict d;
            d["count"] = s.count;
            d["passed_check"] = s.passed_check;
            d["mean_accuracy"] = s.mean_accuracy;
            families[py::str(std::string(to_string(fam)))] = d;
        }
        py::dict out;
        out["items"] = r.items;
        out["intended_conforming"] = r.intended_conforming;
        out["conformance_rate"] = r.conformance_rate;
        out["mean_accuracy"] = r.mean_accuracy;
        out["families"] = families;
        return out;
    }, py::arg("n"), py::arg("conforming_fraction"), py::arg("seed"), py::arg("canvas") = 400);

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
            py::gil_scoped_release release;
            code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
}
