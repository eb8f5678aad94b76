#include "mtp/motion.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

namespace mtp {

void MotionSequence::validate() const {
    if (frames.rows() < 3)
        throw std::invalid_argument("MotionSequence: need at least 3 frames, got " +
                                    std::to_string(frames.rows()));
    if (frames.cols() < 1)
        throw std::invalid_argument("MotionSequence: need at least 1 feature");
    if (!(frame_rate > 0.0))
        throw std::invalid_argument("MotionSequence: frame_rate must be positive");
    if (!labels.empty() &&
        static_cast<Eigen::Index>(labels.size()) != frames.cols())
        throw std::invalid_argument("MotionSequence: label count does not match feature count");
    if (!frames.allFinite())
        throw std::invalid_argument("MotionSequence: non-finite value in frames");
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& cell, int line_no) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end != begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("non-numeric cell '" + cell + "' at line " + std::to_string(line_no));
    return value;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

MotionSequence parse_csv(std::istream& in) {
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line))
        throw ParseError("empty input: missing frame_rate header at line 1");
    ++line_no;
    line = strip_cr(line);
    const std::string prefix = "#frame_rate=";
    if (line.rfind(prefix, 0) != 0)
        throw ParseError("missing '#frame_rate=' header at line 1");
    MotionSequence seq;
    seq.frame_rate = parse_double(line.substr(prefix.size()), line_no);
    if (!(seq.frame_rate > 0.0))
        throw ParseError("frame_rate must be positive at line 1");

    if (!std::getline(in, line))
        throw ParseError("missing label row at line 2");
    ++line_no;
    seq.labels = split_commas(strip_cr(line));
    const auto p = static_cast<Eigen::Index>(seq.labels.size());
    if (p < 1 || seq.labels[0].empty())
        throw ParseError("empty label row at line 2");

    std::vector<double> values;
    Eigen::Index rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        auto cells = split_commas(line);
        if (static_cast<Eigen::Index>(cells.size()) != p)
            throw ParseError("ragged row at line " + std::to_string(line_no) + ": expected " +
                             std::to_string(p) + " cells, got " + std::to_string(cells.size()));
        for (const auto& cell : cells) {
            double v = parse_double(cell, line_no);
            if (!std::isfinite(v))
                throw ParseError("non-finite value at line " + std::to_string(line_no));
            values.push_back(v);
        }
        ++rows;
    }
    if (rows < 3)
        throw ParseError("need at least 3 frames, got " + std::to_string(rows));

    seq.frames.resize(rows, p);
    for (Eigen::Index t = 0; t < rows; ++t)
        for (Eigen::Index j = 0; j < p; ++j)
            seq.frames(t, j) = values[static_cast<std::size_t>(t * p + j)];
    seq.validate();
    return seq;
}

MotionSequence parse_csv_string(const std::string& text) {
    std::istringstream in(text);
    return parse_csv(in);
}

MotionSequence parse_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    return parse_csv(in);
}

void serialize_csv(const MotionSequence& seq, std::ostream& out) {
    out << "#frame_rate=" << format_double(seq.frame_rate) << "\n";
    for (Eigen::Index j = 0; j < seq.num_features(); ++j) {
        if (j) out << ',';
        out << (j < static_cast<Eigen::Index>(seq.labels.size())
                    ? seq.labels[static_cast<std::size_t>(j)]
                    : "f" + std::to_string(j));
    }
    out << "\n";
    for (Eigen::Index t = 0; t < seq.num_frames(); ++t) {
        for (Eigen::Index j = 0; j < seq.num_features(); ++j) {
            if (j) out << ',';
            out << format_double(seq.frames(t, j));
        }
        out << "\n";
    }
}

std::string serialize_csv_string(const MotionSequence& seq) {
    std::ostringstream out;
    serialize_csv(seq, out);
    return out.str();
}

void serialize_csv_file(const MotionSequence& seq, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    serialize_csv(seq, out);
}

NormalizeResult normalize(const MotionSequence& seq, double variance_floor) {
    seq.validate();

    const auto T = seq.num_frames();
    const auto p = seq.num_features();
    const double n = static_cast<double>(T);

    Eigen::VectorXd mean = seq.frames.colwise().mean();
    Eigen::MatrixXd centered = seq.frames.rowwise() - mean.transpose();
    // Population variance, divisor T.
    Eigen::VectorXd var = centered.array().square().colwise().sum() / n;

    std::vector<Eigen::Index> keep;
    std::vector<Eigen::Index> dropped;
    for (Eigen::Index j = 0; j < p; ++j) {
        if (var(j) < variance_floor)
            dropped.push_back(j);
        else
            keep.push_back(j);
    }
    if (keep.empty())
        throw std::invalid_argument("normalize: no informative features");

    NormalizeResult result;
    result.dropped = std::move(dropped);
    auto& out = result.sequence;
    out.frame_rate = seq.frame_rate;
    out.normalized = true;
    out.frames.resize(T, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const Eigen::Index j = keep[k];
        out.frames.col(static_cast<Eigen::Index>(k)) =
            centered.col(j) / std::sqrt(var(j));
        if (j < static_cast<Eigen::Index>(seq.labels.size()))
            out.labels.push_back(seq.labels[static_cast<std::size_t>(j)]);
    }
    return result;
}

}  // namespace mtp
