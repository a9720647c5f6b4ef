#include "diffshape/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "diffshape/format.hpp"

namespace diffshape {
namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t\r";
    const auto begin = s.find_first_not_of(ws);
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(ws);
    return s.substr(begin, end - begin + 1);
}

double parse_field(const std::string& field, int line_no) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw CsvError("csv line " + std::to_string(line_no) + ": cannot parse number '" + field +
                       "'");
    }
    return v;
}

}  // namespace

std::string provenance_comment(const std::string& config_hash, std::uint64_t seed) {
    return "# config_hash=" + config_hash + " seed=" + std::to_string(seed);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CsvError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw CsvError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string training_log_csv(const std::vector<double>& losses, const std::string& comment) {
    std::string out = comment + "\nstep,loss\n";
    for (std::size_t i = 0; i < losses.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_double(losses[i]);
        out += '\n';
    }
    return out;
}

std::string distribution_csv(const Constellation& c, const ShapingDistribution& dist,
                             const std::string& comment) {
    if (static_cast<int>(dist.probs.size()) != c.order) {
        throw CsvError("distribution size does not match constellation order");
    }
    std::string out = comment + "\nsymbol_index,i,q,probability\n";
    for (int k = 0; k < c.order; ++k) {
        out += std::to_string(k + 1);
        out += ',';
        out += format_double(c.points(k, 0));
        out += ',';
        out += format_double(c.points(k, 1));
        out += ',';
        out += format_double(dist.probs[static_cast<std::size_t>(k)]);
        out += '\n';
    }
    return out;
}

std::string reconstruction_csv(const SymbolBatch& y, const std::vector<int>& indices,
                               const std::string& comment) {
    if (static_cast<Eigen::Index>(indices.size()) != y.rows()) {
        throw CsvError("index count does not match batch size");
    }
    std::string out = comment + "\ni,q,symbol_index\n";
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
        out += format_double(y(r, 0));
        out += ',';
        out += format_double(y(r, 1));
        out += ',';
        out += std::to_string(indices[static_cast<std::size_t>(r)]);
        out += '\n';
    }
    return out;
}

std::string histogram_csv(const SymbolBatch& y, const Eigen::MatrixXi& hist,
                          const std::string& comment) {
    if (hist.rows() != y.rows()) throw CsvError("histogram row count does not match batch size");
    std::string out = comment + "\ni,q,symbol_index,count\n";
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
        for (Eigen::Index k = 0; k < hist.cols(); ++k) {
            if (hist(r, k) == 0) continue;
            out += format_double(y(r, 0));
            out += ',';
            out += format_double(y(r, 1));
            out += ',';
            out += std::to_string(k + 1);
            out += ',';
            out += std::to_string(hist(r, k));
            out += '\n';
        }
    }
    return out;
}

SymbolBatch read_iq_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError("cannot open '" + path + "'");

    std::vector<Point2> rows;
    std::string raw;
    int line_no = 0;
    bool seen_data = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (!seen_data && line == "i,q") continue;  // optional header
        seen_data = true;

        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw CsvError("csv line " + std::to_string(line_no) + ": expected exactly two fields");
        }
        Point2 p;
        p.i = parse_field(trim(line.substr(0, comma)), line_no);
        p.q = parse_field(trim(line.substr(comma + 1)), line_no);
        rows.push_back(p);
    }
    if (rows.empty()) throw CsvError("'" + path + "' contains no samples");

    SymbolBatch batch(static_cast<Eigen::Index>(rows.size()), 2);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        batch(static_cast<Eigen::Index>(r), 0) = rows[r].i;
        batch(static_cast<Eigen::Index>(r), 1) = rows[r].q;
    }
    return batch;
}

}  // namespace diffshape
