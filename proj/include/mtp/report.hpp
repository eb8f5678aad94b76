#ifndef MTP_REPORT_HPP
#define MTP_REPORT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mtp {

enum class AlignmentMethod { none, dtw, ctw };

const char* to_string(AlignmentMethod m);
AlignmentMethod alignment_from_string(const std::string& s);

/// Per-component estimate: residual correlation, penalized mutual
/// information and the throughput it implies at the recording frame rate.
struct ChannelEstimate {
    int component_index = 0;
    double rho_hat = 0.0;     // clamped into (-1, 1)
    std::int64_t n_eff = 0;   // paired-frame count
    double mi_bits = 0.0;     // may be negative
    double tp_bps = 0.0;
};

struct ThroughputReport {
    double total_tp = 0.0;    // bits per second, sum over components
    std::vector<ChannelEstimate> components;
    int retained_components = 0;
    double variance_covered = 0.0;
    std::int64_t n_eff = 0;
    double frame_rate = 0.0;
    AlignmentMethod alignment_method = AlignmentMethod::none;
    std::vector<int> degenerate_components;

    void validate() const;
};

bool operator==(const ChannelEstimate& a, const ChannelEstimate& b);
bool operator==(const ThroughputReport& a, const ThroughputReport& b);

/// Emit the report as JSON; round-trips losslessly through read_report.
std::string write_report(const ThroughputReport& report);
void write_report_file(const ThroughputReport& report, const std::string& path);

ThroughputReport read_report(const std::string& json_text);
ThroughputReport read_report_file(const std::string& path);

}  // namespace mtp

#endif
