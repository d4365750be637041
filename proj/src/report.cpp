#include "mipost/experiment.hpp"

#include <cerrno>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "mipost/errors.hpp"

namespace mipost {

namespace {

using nlohmann::json;

json encode_real(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double decode_real(const json& v) {
    if (v.is_number()) return v.get<double>();
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::string report_to_json(const RunReport& report) {
    json doc;
    doc["config"] = {{"epsilon", report.config.epsilon}, {"p", report.config.p_level},
                     {"prior", report.config.prior},     {"family", report.config.family},
                     {"seed", report.config.seed},       {"missing", report.config.missing}};
    doc["instances"] = report.instances;
    doc["attributes"] = report.attributes;
    doc["runs"] = json::array();
    for (const auto& r : report.runs) {
        doc["runs"].push_back({{"filter", filter_name(r.filter)},
                               {"predicted", r.predicted},
                               {"correct", r.correct},
                               {"running_accuracy", r.running_accuracy},
                               {"selected_count", r.selected_count},
                               {"final_accuracy", r.final_accuracy},
                               {"average_selected", r.average_selected},
                               {"order_hash", r.order_hash}});
    }
    doc["pairs"] = json::array();
    for (const auto& p : report.pairs) {
        json ts = json::array();
        for (double t : p.t) ts.push_back(encode_real(t));
        doc["pairs"].push_back({{"a", filter_name(p.a)},
                                {"b", filter_name(p.b)},
                                {"t", ts},
                                {"significant", p.significant}});
    }
    return doc.dump();
}

RunReport report_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("report JSON: ") + e.what());
    }
    try {
        RunReport report;
        const auto& c = doc.at("config");
        report.config = {c.at("epsilon").get<double>(), c.at("p").get<double>(),
                         c.at("prior").get<std::string>(), c.at("family").get<std::string>(),
                         c.at("seed").get<std::uint64_t>(), c.at("missing").get<std::string>()};
        report.instances = doc.at("instances").get<std::size_t>();
        report.attributes = doc.at("attributes").get<std::size_t>();
        for (const auto& r : doc.at("runs")) {
            FilterRun run;
            run.filter = parse_filter(r.at("filter").get<std::string>());
            run.predicted = r.at("predicted").get<std::vector<std::size_t>>();
            run.correct = r.at("correct").get<std::vector<std::uint8_t>>();
            run.running_accuracy = r.at("running_accuracy").get<std::vector<double>>();
            run.selected_count = r.at("selected_count").get<std::vector<std::size_t>>();
            run.final_accuracy = r.at("final_accuracy").get<double>();
            run.average_selected = r.at("average_selected").get<double>();
            run.order_hash = r.at("order_hash").get<std::uint64_t>();
            report.runs.push_back(std::move(run));
        }
        for (const auto& p : doc.at("pairs")) {
            PairComparison pc;
            pc.a = parse_filter(p.at("a").get<std::string>());
            pc.b = parse_filter(p.at("b").get<std::string>());
            for (const auto& t : p.at("t")) pc.t.push_back(decode_real(t));
            pc.significant = p.at("significant").get<std::vector<std::uint8_t>>();
            report.pairs.push_back(std::move(pc));
        }
        return report;
    } catch (const json::exception& e) {
        throw InputError(std::string("report JSON: ") + e.what());
    }
}

std::string report_to_csv(const RunReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "instance";
    for (const auto& r : report.runs) out << ",accuracy_" << filter_name(r.filter);
    for (const auto& r : report.runs) out << ",selected_" << filter_name(r.filter);
    for (const auto& p : report.pairs) {
        out << ",significant_" << filter_name(p.a) << "_" << filter_name(p.b);
    }
    out << '\n';
    for (std::size_t t = 0; t < report.instances; ++t) {
        out << t + 1;
        for (const auto& r : report.runs) out << ',' << r.running_accuracy[t];
        for (const auto& r : report.runs) out << ',' << r.selected_count[t];
        for (const auto& p : report.pairs) out << ',' << static_cast<int>(p.significant[t]);
        out << '\n';
    }
    return out.str();
}

void write_report(const RunReport& report, const std::string& path, ReportFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::system_error(errno, std::generic_category(), "cannot write '" + path + "'");
    }
    out << (format == ReportFormat::csv ? report_to_csv(report) : report_to_json(report));
    out.flush();
    if (!out) {
        throw std::system_error(errno, std::generic_category(), "write failed for '" + path + "'");
    }
}

RunReport read_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open report '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return report_from_json(buf.str());
}

}  // namespace mipost
