#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "metaglyph/forge/instances.hpp"
#include "metaglyph/forge/render.hpp"
#include "metaglyph/forge/tokenizer.hpp"
#include "metaglyph/gateway/runner.hpp"
#include "metaglyph/glyph/control.hpp"
#include "metaglyph/glyph/operators.hpp"
#include "metaglyph/glyph/parser.hpp"
#include "metaglyph/glyph/printer.hpp"
#include "metaglyph/metrics/report.hpp"
#include "metaglyph/oracle/brute_force.hpp"
#include "metaglyph/oracle/eval.hpp"
#include "metaglyph/util/jsonl.hpp"

namespace py = pybind11;
using namespace metaglyph;

namespace {

py::object json_to_py(const util::Json& value) {
    switch (value.type()) {
        case util::Json::value_t::null: return py::none();
        case util::Json::value_t::boolean: return py::bool_(value.get<bool>());
        case util::Json::value_t::number_integer:
            return py::int_(value.get<std::int64_t>());
        case util::Json::value_t::number_unsigned:
            return py::int_(value.get<std::uint64_t>());
        case util::Json::value_t::number_float: return py::float_(value.get<double>());
        case util::Json::value_t::string: return py::str(value.get<std::string>());
        case util::Json::value_t::array: {
            py::list list;
            for (const auto& element : value) list.append(json_to_py(element));
            return list;
        }
        case util::Json::value_t::object: {
            py::dict dict;
            for (const auto& [key, element] : value.items()) {
                dict[py::str(key)] = json_to_py(element);
            }
            return dict;
        }
        default: return py::none();
    }
}

util::Json py_to_json(py::handle obj) {
    if (obj.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
    if (py::isinstance<py::int_>(obj)) {
        try {
            return obj.cast<std::int64_t>();
        } catch (const py::cast_error&) {
            return obj.cast<std::uint64_t>(); // seeds use the full range
        }
    }
    if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
    if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
    if (py::isinstance<py::dict>(obj)) {
        util::Json out = util::Json::object();
        for (const auto& [key, value] : obj.cast<py::dict>()) {
            out[key.cast<std::string>()] = py_to_json(value);
        }
        return out;
    }
    if (py::isinstance<py::sequence>(obj)) {
        util::Json out = util::Json::array();
        for (const auto& element : obj.cast<py::sequence>()) {
            out.push_back(py_to_json(element));
        }
        return out;
    }
    throw py::type_error("value is not JSON-representable");
}

forge::TaskInstance instance_from_py(py::handle obj) {
    return forge::instance_from_json(py_to_json(obj));
}

} // namespace

PYBIND11_MODULE(_metaglyph, m) {
    m.doc() = "MetaGlyph symbolic instruction toolkit";

    m.def("canonical", [](const std::string& text) {
        return glyph::print_instruction(glyph::parse_instruction(text));
    }, py::arg("text"), "Parse an instruction and return its canonical form");

    m.def("tree", [](const std::string& text) {
        return glyph::dump_tree(glyph::parse_instruction(text));
    }, py::arg("text"), "Parse an instruction and return an indented tree dump");

    m.def("to_control", [](const std::string& text) { return glyph::to_control(text); },
          py::arg("text"), "Replace every operator glyph with its control glyph");

    m.def("token_count", [](const std::string& text) { return forge::tokenize(text); },
          py::arg("text"), "Whitespace token count");

    m.def("operator_counts", [](const std::string& text) {
        py::dict counts;
        for (const auto& [op, n] : glyph::operators_in(glyph::parse_instruction(text))) {
            counts[py::str(std::string(glyph::glyph_of(op)))] = n;
        }
        return counts;
    }, py::arg("text"), "Operator occurrence counts for an instruction, keyed by glyph");

    m.def("compression_ratio", &forge::compression_ratio, py::arg("nl_tokens"),
          py::arg("mg_tokens"));

    m.def("generate", [](const std::string& family, int n, std::uint64_t seed) {
        py::list rows;
        for (auto& inst :
             forge::generate_instances(forge::family_from_key(family), n, seed)) {
            oracle::fill_gold(inst);
            rows.append(json_to_py(forge::instance_to_json(inst)));
        }
        return rows;
    }, py::arg("family"), py::arg("n") = 10, py::arg("seed") = 2026,
       "Generate task instances (with gold) for one family");

    m.def("gold", [](py::handle instance) {
        return json_to_py(oracle::eval_task(instance_from_py(instance)));
    }, py::arg("instance"), "Reference interpreter output for an instance");

    m.def("brute_force", [](py::handle instance) {
        return json_to_py(oracle::brute_force(instance_from_py(instance)));
    }, py::arg("instance"), "Independent text-level oracle for an instance");

    m.def("compile_triplet", [](py::handle instance) {
        const auto triplet = forge::compile_triplet(instance_from_py(instance));
        py::dict out;
        out["nl"] = triplet.nl;
        out["mg"] = triplet.mg;
        out["ctrl"] = triplet.ctrl;
        out["nl_tokens"] = triplet.nl_tokens;
        out["mg_tokens"] = triplet.mg_tokens;
        out["ctrl_tokens"] = triplet.ctrl_tokens;
        return out;
    }, py::arg("instance"), "Render the NL/MG/CTRL prompt triplet for an instance");

    m.def("score", [](const std::string& trials_path, const std::string& corpus_path,
                      const std::string& mode, const std::string& denominator) {
        metrics::ScoreInput input;
        input.trials = gateway::read_trials(trials_path);
        for (const auto& row : util::read_jsonl(corpus_path)) {
            input.corpus.push_back(forge::instance_from_json(row));
        }
        input.mode = metrics::parse_mode_from_key(mode);
        input.denominator = denominator == "parsed" ? "parsed_only" : "all_trials";
        return json_to_py(metrics::report_to_json(metrics::aggregate_report(input)));
    }, py::arg("trials_path"), py::arg("corpus_path"), py::arg("mode") = "strict",
       py::arg("denominator") = "all", "Score a trials file against its corpus");

    m.def("render_markdown", [](py::handle report) {
        return metrics::emit_markdown(metrics::report_from_json(py_to_json(report)));
    }, py::arg("report"), "Render a report dict to the markdown report");
}
