#include "mtp/report.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mtp {

const char* to_string(AlignmentMethod m) {
    switch (m) {
        case AlignmentMethod::none: return "none";
        case AlignmentMethod::dtw: return "dtw";
        case AlignmentMethod::ctw: return "ctw";
    }
    return "none";
}

AlignmentMethod alignment_from_string(const std::string& s) {
    if (s == "none") return AlignmentMethod::none;
    if (s == "dtw") return AlignmentMethod::dtw;
    if (s == "ctw") return AlignmentMethod::ctw;
    throw std::invalid_argument("unknown alignment method '" + s + "'");
}

void ThroughputReport::validate() const {
    double sum = 0.0;
    for (const auto& c : components) sum += c.tp_bps;
    const double scale = std::max(std::abs(sum), std::abs(total_tp));
    if (std::abs(sum - total_tp) > 1e-9 * std::max(scale, 1.0))
        throw std::logic_error("ThroughputReport: total_tp does not equal component sum");
    if (!(frame_rate > 0.0))
        throw std::logic_error("ThroughputReport: frame_rate must be positive");
    for (const auto& c : components)
        if (c.n_eff != n_eff)
            throw std::logic_error("ThroughputReport: component n_eff mismatch");
}

bool operator==(const ChannelEstimate& a, const ChannelEstimate& b) {
    return a.component_index == b.component_index && a.rho_hat == b.rho_hat &&
           a.n_eff == b.n_eff && a.mi_bits == b.mi_bits && a.tp_bps == b.tp_bps;
}

bool operator==(const ThroughputReport& a, const ThroughputReport& b) {
    return a.total_tp == b.total_tp && a.components == b.components &&
           a.retained_components == b.retained_components &&
           a.variance_covered == b.variance_covered && a.n_eff == b.n_eff &&
           a.frame_rate == b.frame_rate &&
           a.alignment_method == b.alignment_method &&
           a.degenerate_components == b.degenerate_components;
}

std::string write_report(const ThroughputReport& report) {
    report.validate();
    nlohmann::ordered_json j;
    j["total_tp_bps"] = report.total_tp;
    j["frame_rate"] = report.frame_rate;
    j["n_eff"] = report.n_eff;
    j["alignment_method"] = to_string(report.alignment_method);
    j["retained_components"] = report.retained_components;
    j["variance_covered"] = report.variance_covered;
    auto comps = nlohmann::ordered_json::array();
    for (const auto& c : report.components) {
        comps.push_back({{"index", c.component_index},
                         {"rho_hat", c.rho_hat},
                         {"mi_bits", c.mi_bits},
                         {"tp_bps", c.tp_bps}});
    }
    j["components"] = comps;
    j["degenerate_components"] = report.degenerate_components;
    return j.dump(2) + "\n";
}

void write_report_file(const ThroughputReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << write_report(report);
}

ThroughputReport read_report(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    ThroughputReport report;
    report.total_tp = j.at("total_tp_bps").get<double>();
    report.frame_rate = j.at("frame_rate").get<double>();
    report.n_eff = j.at("n_eff").get<std::int64_t>();
    report.alignment_method =
        alignment_from_string(j.at("alignment_method").get<std::string>());
    report.retained_components = j.at("retained_components").get<int>();
    report.variance_covered = j.at("variance_covered").get<double>();
    for (const auto& c : j.at("components")) {
        ChannelEstimate est;
        est.component_index = c.at("index").get<int>();
        est.rho_hat = c.at("rho_hat").get<double>();
        est.mi_bits = c.at("mi_bits").get<double>();
        est.tp_bps = c.at("tp_bps").get<double>();
        est.n_eff = report.n_eff;
        report.components.push_back(est);
    }
    report.degenerate_components =
        j.at("degenerate_components").get<std::vector<int>>();
    return report;
}

ThroughputReport read_report_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_report(buf.str());
}

}  // namespace mtp
