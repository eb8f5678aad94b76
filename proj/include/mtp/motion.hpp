#ifndef MTP_MOTION_HPP
#define MTP_MOTION_HPP

#include <Eigen/Dense>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtp {

/// Thrown on malformed input files; the message names the offending line.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A frame-rate-stamped T x p matrix of measured features.
///
/// Invariants (enforced by validate()): T >= 3, p >= 1, all cells finite,
/// frame_rate > 0.
struct MotionSequence {
    double frame_rate = 0.0;              // frames per second
    std::vector<std::string> labels;      // p feature names, column order
    Eigen::MatrixXd frames;               // T x p
    bool normalized = false;

    Eigen::Index num_frames() const { return frames.rows(); }
    Eigen::Index num_features() const { return frames.cols(); }

    void validate() const;
};

/// Result of normalize(): the standardized sequence plus the original-order
/// indices of features dropped for near-zero variance.
struct NormalizeResult {
    MotionSequence sequence;
    std::vector<Eigen::Index> dropped;
};

/// Parse the canonical CSV format:
///   line 1: #frame_rate=<float>
///   line 2: comma-separated feature labels
///   rest:   one frame per line, comma-separated decimal floats
/// Throws ParseError naming the line number on malformed input.
MotionSequence parse_csv(std::istream& in);
MotionSequence parse_csv_string(const std::string& text);
MotionSequence parse_csv_file(const std::string& path);

/// Serialize to the canonical CSV format. Values are written with
/// shortest-round-trip formatting so parse(serialize(seq)) == seq bit-exactly.
void serialize_csv(const MotionSequence& seq, std::ostream& out);
std::string serialize_csv_string(const MotionSequence& seq);
void serialize_csv_file(const MotionSequence& seq, const std::string& path);

/// Standardize each feature to mean 0 and unit population variance
/// (divisor T). Features whose population variance falls below
/// `variance_floor` are dropped and reported, not scaled. Idempotent up to
/// rounding on already-standardized data. Throws std::invalid_argument if
/// every feature is degenerate.
NormalizeResult normalize(const MotionSequence& seq,
                          double variance_floor = 1e-12);

}  // namespace mtp

#endif
