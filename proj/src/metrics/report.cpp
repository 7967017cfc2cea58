#include "metaglyph/metrics/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "metaglyph/errors.hpp"
#include "metaglyph/forge/render.hpp"
#include "metaglyph/glyph/operators.hpp"

namespace metaglyph::metrics {

namespace {

using forge::TaskFamily;

std::string fixed(double value, int places) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", places, value);
    return buf;
}

std::string percent(double rate) { return fixed(rate * 100.0, 1) + "%"; }

std::string family_label(TaskFamily family) {
    switch (family) {
        case TaskFamily::Selection: return "Selection";
        case TaskFamily::Extraction: return "Extraction";
        case TaskFamily::ConstraintComposition: return "Constraint Composition";
        case TaskFamily::ConditionalTransformation: return "Conditional Transformation";
    }
    return "?";
}

int family_rank(TaskFamily family) {
    int rank = 0;
    for (const auto f : forge::kAllFamilies) {
        if (f == family) return rank;
        rank++;
    }
    return rank;
}

int op_rank(glyph::Op op) {
    int rank = 0;
    for (const auto& info : glyph::operator_table()) {
        if (info.op == op) return rank;
        rank++;
    }
    return rank;
}

// Markdown cells hold the rate with its counts so every number is
// traceable to the trials that produced it.
std::string counted(double rate, int numerator, int denominator) {
    return percent(rate) + " (" + std::to_string(numerator) + "/" +
           std::to_string(denominator) + ")";
}

} // namespace

Report aggregate_report(const ScoreInput& input) {
    if (input.denominator != "all_trials" && input.denominator != "parsed_only") {
        throw ConfigError("denominator must be all_trials or parsed_only");
    }
    Report report;
    report.mode = parse_mode_key(input.mode);
    report.denominator = input.denominator;

    // Compression: recomputed from the corpus; prompts are deterministic.
    std::map<TaskFamily, std::tuple<long, long, long, int>> sums;
    for (const auto& instance : input.corpus) {
        const forge::PromptTriplet triplet = forge::compile_triplet(instance);
        auto& [nl, mg, ctrl, n] = sums[instance.family];
        nl += triplet.nl_tokens;
        mg += triplet.mg_tokens;
        ctrl += triplet.ctrl_tokens;
        n++;
    }
    for (const auto family : forge::kAllFamilies) {
        auto it = sums.find(family);
        if (it == sums.end()) continue;
        const auto& [nl, mg, ctrl, n] = it->second;
        CompressionRow row;
        row.family = family;
        row.instances = n;
        row.nl_mean = double(nl) / n;
        row.mg_mean = double(mg) / n;
        row.ctrl_mean = double(ctrl) / n;
        row.reduction = forge::compression_ratio(int(nl), int(mg));
        report.compression.push_back(row);
    }

    for (const std::string& pair : {std::string("NL_vs_MG"), std::string("NL_vs_CTRL")}) {
        for (auto& stat : semantic_equivalence(input, pair)) {
            report.equivalence.push_back(std::move(stat));
        }
    }
    report.fidelity = operator_fidelity(input);
    report.parse = parse_success(input);

    std::set<std::string> notes;
    for (const auto& stat : report.equivalence) {
        if (stat.excluded_pairs > 0) {
            notes.insert("incomplete: equivalence " + stat.model + " / " +
                         family_label(stat.family) + " / " + stat.pair + " excludes " +
                         std::to_string(stat.excluded_pairs) + " of " +
                         std::to_string(stat.excluded_pairs + stat.pairs_total) + " pairs");
        }
    }
    // Cells whose trials never produced a usable response.
    std::map<TaskFamily, int> per_family;
    for (const auto& instance : input.corpus) per_family[instance.family]++;
    std::map<std::tuple<std::string, TaskFamily, std::string>, int> usable;
    std::set<std::string> models;
    for (const auto& trial : input.trials) {
        models.insert(trial.model);
        if (trial.status != gateway::TrialStatus::Ok) continue;
        for (const auto& instance : input.corpus) {
            if (instance.id == trial.instance_id) {
                usable[{trial.model, instance.family, trial.variant}]++;
                break;
            }
        }
    }
    for (const std::string& model : models) {
        for (const auto& [family, expected] : per_family) {
            for (const std::string variant : {"NL", "MG", "CTRL"}) {
                auto it = usable.find({model, family, variant});
                const int got = it == usable.end() ? 0 : it->second;
                if (got < expected) {
                    notes.insert("incomplete: trials " + model + " / " + family_label(family) +
                                 " / " + variant + " has " + std::to_string(got) + " of " +
                                 std::to_string(expected) + " usable responses");
                }
            }
        }
    }
    report.footnotes.assign(notes.begin(), notes.end());

    // Deterministic row order regardless of input order.
    std::sort(report.equivalence.begin(), report.equivalence.end(),
              [](const EquivalenceStat& a, const EquivalenceStat& b) {
                  return std::tuple(a.model, a.pair, family_rank(a.family)) <
                         std::tuple(b.model, b.pair, family_rank(b.family));
              });
    std::sort(report.fidelity.begin(), report.fidelity.end(),
              [](const FidelityStat& a, const FidelityStat& b) {
                  return std::tuple(a.model, op_rank(a.op), a.denominator_policy) <
                         std::tuple(b.model, op_rank(b.op), b.denominator_policy);
              });
    std::sort(report.parse.begin(), report.parse.end(),
              [](const ParseStat& a, const ParseStat& b) {
                  return std::tuple(a.model, family_rank(a.family), a.variant) <
                         std::tuple(b.model, family_rank(b.family), b.variant);
              });
    return report;
}

util::Json report_to_json(const Report& report) {
    util::Json row = util::Json::object();
    row["mode"] = report.mode;
    row["denominator"] = report.denominator;

    util::Json compression = util::Json::array();
    for (const auto& c : report.compression) {
        compression.push_back({{"family", forge::family_key(c.family)},
                               {"instances", c.instances},
                               {"nl_mean", c.nl_mean},
                               {"mg_mean", c.mg_mean},
                               {"ctrl_mean", c.ctrl_mean},
                               {"reduction", c.reduction}});
    }
    row["compression"] = std::move(compression);

    util::Json equivalence = util::Json::array();
    for (const auto& e : report.equivalence) {
        equivalence.push_back({{"model", e.model},
                               {"family", forge::family_key(e.family)},
                               {"pair", e.pair},
                               {"pairs_total", e.pairs_total},
                               {"pairs_identical", e.pairs_identical},
                               {"excluded_pairs", e.excluded_pairs}});
    }
    row["equivalence"] = std::move(equivalence);

    util::Json fidelity = util::Json::array();
    for (const auto& f : report.fidelity) {
        fidelity.push_back({{"model", f.model},
                            {"operator", std::string(glyph::name_of(f.op))},
                            {"denominator_policy", f.denominator_policy},
                            {"trials_with_operator", f.trials_with_operator},
                            {"trials_passing", f.trials_passing}});
    }
    row["fidelity"] = std::move(fidelity);

    util::Json parse = util::Json::array();
    for (const auto& p : report.parse) {
        parse.push_back({{"model", p.model},
                         {"family", forge::family_key(p.family)},
                         {"variant", p.variant},
                         {"trials", p.trials},
                         {"parse_ok", p.parse_ok}});
    }
    row["parse_success"] = std::move(parse);
    row["footnotes"] = report.footnotes;
    return row;
}

Report report_from_json(const util::Json& row) {
    Report report;
    report.mode = row.value("mode", std::string("strict"));
    report.denominator = row.value("denominator", std::string("all_trials"));
    for (const auto& c : row.value("compression", util::Json::array())) {
        CompressionRow r;
        r.family = forge::family_from_key(c.at("family").get<std::string>());
        r.instances = c.at("instances").get<int>();
        r.nl_mean = c.at("nl_mean").get<double>();
        r.mg_mean = c.at("mg_mean").get<double>();
        r.ctrl_mean = c.at("ctrl_mean").get<double>();
        r.reduction = c.at("reduction").get<double>();
        report.compression.push_back(r);
    }
    for (const auto& e : row.value("equivalence", util::Json::array())) {
        EquivalenceStat s;
        s.model = e.at("model").get<std::string>();
        s.family = forge::family_from_key(e.at("family").get<std::string>());
        s.pair = e.at("pair").get<std::string>();
        s.pairs_total = e.at("pairs_total").get<int>();
        s.pairs_identical = e.at("pairs_identical").get<int>();
        s.excluded_pairs = e.at("excluded_pairs").get<int>();
        report.equivalence.push_back(std::move(s));
    }
    for (const auto& f : row.value("fidelity", util::Json::array())) {
        FidelityStat s;
        s.model = f.at("model").get<std::string>();
        const auto op = glyph::op_from_name(f.at("operator").get<std::string>());
        if (!op) throw DomainError("unknown operator name in report");
        s.op = *op;
        s.denominator_policy = f.at("denominator_policy").get<std::string>();
        s.trials_with_operator = f.at("trials_with_operator").get<int>();
        s.trials_passing = f.at("trials_passing").get<int>();
        report.fidelity.push_back(std::move(s));
    }
    for (const auto& p : row.value("parse_success", util::Json::array())) {
        ParseStat s;
        s.model = p.at("model").get<std::string>();
        s.family = forge::family_from_key(p.at("family").get<std::string>());
        s.variant = p.at("variant").get<std::string>();
        s.trials = p.at("trials").get<int>();
        s.parse_ok = p.at("parse_ok").get<int>();
        report.parse.push_back(std::move(s));
    }
    for (const auto& note : row.value("footnotes", util::Json::array())) {
        report.footnotes.push_back(note.get<std::string>());
    }
    return report;
}

std::string emit_markdown(const Report& report) {
    std::ostringstream out;
    out << "# MetaGlyph evaluation report\n\n";
    out << "Scoring mode: " << report.mode << "\n";
    out << "Fidelity denominator: " << report.denominator << "\n\n";

    out << "## Prompt compression\n\n";
    out << "| Family | Instances | NL tokens | MG tokens | CTRL tokens | Reduction |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const auto& c : report.compression) {
        out << "| " << family_label(c.family) << " | " << c.instances << " | "
            << fixed(c.nl_mean, 1) << " | " << fixed(c.mg_mean, 1) << " | "
            << fixed(c.ctrl_mean, 1) << " | " << percent(c.reduction) << " |\n";
    }

    out << "\n## Output equivalence\n\n";
    out << "| Model | Family | NL = MG | NL = CTRL |\n";
    out << "|---|---|---|---|\n";
    std::map<std::pair<std::string, int>, std::pair<const EquivalenceStat*,
                                                    const EquivalenceStat*>>
        rows;
    for (const auto& e : report.equivalence) {
        auto& slot = rows[{e.model, family_rank(e.family)}];
        (e.pair == "NL_vs_MG" ? slot.first : slot.second) = &e;
    }
    for (const auto& [key, pair] : rows) {
        const EquivalenceStat* any = pair.first ? pair.first : pair.second;
        out << "| " << any->model << " | " << family_label(any->family) << " | ";
        auto cell = [&](const EquivalenceStat* stat) {
            if (!stat || stat->pairs_total == 0) {
                out << "--";
            } else {
                out << counted(stat->rate(), stat->pairs_identical, stat->pairs_total);
            }
            if (stat && stat->excluded_pairs > 0) out << " \xE2\x80\xA0";
        };
        cell(pair.first);
        out << " | ";
        cell(pair.second);
        out << " |\n";
    }

    // One rate per model and operator; the other policy
    // stays available in fidelity.csv and the report JSON.
    out << "\n## Operator fidelity (MG trials)\n\n";
    out << "| Model | Operator | Rate |\n";
    out << "|---|---|---|\n";
    for (const auto& f : report.fidelity) {
        if (f.denominator_policy != report.denominator) continue;
        out << "| " << f.model << " | " << glyph::glyph_of(f.op) << " ("
            << glyph::name_of(f.op) << ") | ";
        if (f.trials_with_operator == 0) {
            out << "--";
        } else {
            out << counted(f.rate(), f.trials_passing, f.trials_with_operator);
        }
        out << " |\n";
    }

    out << "\n## Parse success\n\n";
    out << "| Model | Family | Variant | Rate |\n";
    out << "|---|---|---|---|\n";
    for (const auto& p : report.parse) {
        out << "| " << p.model << " | " << family_label(p.family) << " | " << p.variant
            << " | ";
        if (p.trials == 0) out << "--";
        else out << counted(p.rate(), p.parse_ok, p.trials);
        out << " |\n";
    }

    out << "\n## Notes\n\n";
    if (report.footnotes.empty()) {
        out << "All cells complete.\n";
    } else {
        for (const auto& note : report.footnotes) out << "- \xE2\x80\xA0 " << note << "\n";
    }
    return out.str();
}

std::map<std::string, std::string> emit_csv(const Report& report) {
    std::map<std::string, std::string> files;

    std::ostringstream compression;
    compression << "family,instances,nl_mean_tokens,mg_mean_tokens,ctrl_mean_tokens,reduction\n";
    for (const auto& c : report.compression) {
        compression << forge::family_key(c.family) << ',' << c.instances << ','
                    << fixed(c.nl_mean, 4) << ',' << fixed(c.mg_mean, 4) << ','
                    << fixed(c.ctrl_mean, 4) << ',' << fixed(c.reduction, 6) << '\n';
    }
    files["compression.csv"] = compression.str();

    std::ostringstream equivalence;
    equivalence << "model,family,pair,pairs_total,pairs_identical,excluded_pairs,rate\n";
    for (const auto& e : report.equivalence) {
        equivalence << e.model << ',' << forge::family_key(e.family) << ',' << e.pair << ','
                    << e.pairs_total << ',' << e.pairs_identical << ',' << e.excluded_pairs
                    << ',' << fixed(e.rate(), 6) << '\n';
    }
    files["equivalence.csv"] = equivalence.str();

    std::ostringstream fidelity;
    fidelity << "model,operator,denominator_policy,trials_with_operator,trials_passing,rate\n";
    for (const auto& f : report.fidelity) {
        fidelity << f.model << ',' << glyph::name_of(f.op) << ',' << f.denominator_policy << ','
                 << f.trials_with_operator << ',' << f.trials_passing << ','
                 << fixed(f.rate(), 6) << '\n';
    }
    files["fidelity.csv"] = fidelity.str();

    std::ostringstream parse;
    parse << "model,family,variant,trials,parse_ok,rate\n";
    for (const auto& p : report.parse) {
        parse << p.model << ',' << forge::family_key(p.family) << ',' << p.variant << ','
              << p.trials << ',' << p.parse_ok << ',' << fixed(p.rate(), 6) << '\n';
    }
    files["parse_success.csv"] = parse.str();
    return files;
}

} // namespace metaglyph::metrics
