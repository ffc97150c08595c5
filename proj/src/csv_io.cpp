#include "grdmf/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace grdmf {

namespace {

struct Record {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::vector<Record> split_records(const std::string& text, const std::string& source) {
    std::vector<Record> records;
    std::size_t pos = 0;
    if (text.compare(0, 3, "\xEF\xBB\xBF") == 0) pos = 3;

    std::size_t line = 1;
    Record current{line, {}};
    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;
    bool any = false;

    auto end_field = [&] {
        current.fields.push_back(field_was_quoted ? field : trim(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = current.fields.size() == 1 && current.fields[0].empty();
        if (!blank) records.push_back(std::move(current));
        current = Record{line, {}};
        any = false;
    };

    for (; pos < text.size(); ++pos) {
        const char ch = text[pos];
        if (quoted) {
            if (ch == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    field += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line;
                field += ch;
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (!trim(field).empty()) {
                    throw ParseError(source + ":" + std::to_string(line) + ": stray quote inside field");
                }
                field.clear();
                quoted = true;
                field_was_quoted = true;
                any = true;
                break;
            case ',':
                end_field();
                any = true;
                break;
            case '\r':
                break;
            case '\n':
                ++line;
                end_record();
                break;
            default:
                field += ch;
                any = true;
        }
    }
    if (quoted) throw ParseError(source + ": unterminated quoted field");
    if (any || !field.empty()) end_record();
    return records;
}

double parse_number(const std::string& cell, const std::string& source, std::size_t line, std::size_t col) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = cell.data() + cell.size();
    if (!cell.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (cell.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        std::ostringstream os;
        os << source << ":" << line << ": column " << col + 1 << ": '" << cell << "' is not a finite number";
        throw ParseError(os.str());
    }
    return value;
}

void require_binary(const LabelledTable& t, const std::string& source) {
    for (std::size_t i = 0; i < t.body.rows(); ++i)
        for (std::size_t j = 0; j < t.body.cols(); ++j) {
            const double v = t.body(i, j);
            if (v != 0.0 && v != 1.0) {
                std::ostringstream os;
                os << source << ": cell (row '" << t.row_names[i] << "', column '" << t.col_names[j]
                   << "') = " << v << " is not 0 or 1 (data row " << i + 1 << ", column " << j + 1 << ")";
                throw ParseError(os.str());
            }
        }
}

void require_unique(const std::vector<std::string>& names, const std::string& source, const char* what) {
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (names[k].empty()) {
            throw RegistryError(source + ": empty " + what + " name at position " + std::to_string(k + 1));
        }
        if (!seen.emplace(names[k], k).second) {
            throw RegistryError(source + ": duplicate " + what + " name '" + names[k] + "'");
        }
    }
}

std::vector<std::size_t> alignment(const std::vector<std::string>& names, const std::vector<std::string>& registry,
                                   const char* what, Warnings* warnings) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < names.size(); ++k) index.emplace(names[k], k);
    std::vector<std::size_t> out;
    out.reserve(registry.size());
    for (const auto& name : registry) {
        const auto it = index.find(name);
        if (it == index.end()) {
            throw RegistryError(std::string(what) + " has no entry for '" + name + "'");
        }
        out.push_back(it->second);
    }
    if (names.size() > registry.size()) {
        warn(warnings, std::string(what) + ": " + std::to_string(names.size() - registry.size()) +
                           " entities not in the association registry were dropped");
    }
    return out;
}

}  // namespace

std::string format_real(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos && trim(s) == s) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

LabelledTable parse_labelled_csv(const std::string& text, const std::string& source) {
    const auto records = split_records(text, source);
    if (records.empty()) throw ParseError(source + ": empty file");

    LabelledTable t;
    const auto& header = records.front().fields;
    if (header.size() < 2) throw ParseError(source + ": header row has no column names");
    t.col_names.assign(header.begin() + 1, header.end());

    const std::size_t cols = t.col_names.size();
    std::vector<double> body;
    body.reserve((records.size() - 1) * cols);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != cols + 1) {
            std::ostringstream os;
            os << source << ":" << rec.line << ": expected " << cols + 1 << " fields, found " << rec.fields.size();
            throw ParseError(os.str());
        }
        t.row_names.push_back(rec.fields[0]);
        for (std::size_t c = 0; c < cols; ++c) body.push_back(parse_number(rec.fields[c + 1], source, rec.line, c + 1));
    }
    if (t.row_names.empty()) throw ParseError(source + ": no data rows");
    t.body = Matrix(t.row_names.size(), cols, std::move(body));
    return t;
}

LabelledTable read_labelled_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_labelled_csv(ss.str(), path.string());
}

AssociationDataset load_association_csv(const std::filesystem::path& path) {
    LabelledTable t = read_labelled_csv(path);
    const std::string source = path.string();
    require_unique(t.row_names, source, "drug");
    require_unique(t.col_names, source, "virus");
    require_binary(t, source);
    return AssociationDataset{std::move(t.row_names), std::move(t.col_names), std::move(t.body)};
}

FeatureProfile load_profile_csv(const std::filesystem::path& path, Warnings* warnings) {
    LabelledTable t = read_labelled_csv(path);
    const std::string source = path.string();
    require_unique(t.row_names, source, "entity");
    require_binary(t, source);
    for (std::size_t i = 0; i < t.body.rows(); ++i) {
        bool zero = true;
        for (double v : t.body.row(i)) zero = zero && v == 0.0;
        if (zero) warn(warnings, source + ": entity '" + t.row_names[i] + "' has no features");
    }
    FeatureProfile p{std::move(t.row_names), std::move(t.col_names), std::move(t.body)};
    p.validate();
    return p;
}

SimilarityMatrix load_similarity_csv(const std::filesystem::path& path, Warnings* warnings) {
    LabelledTable t = read_labelled_csv(path);
    const std::string source = path.string();
    require_unique(t.row_names, source, "entity");
    if (t.row_names != t.col_names) {
        throw ParseError(source + ": similarity header and row names must list the same entities in the same order");
    }
    return ingest_similarity(SimilarityMatrix{std::move(t.row_names), std::move(t.body)}, warnings);
}

SimilarityMatrix align_similarity(const SimilarityMatrix& s, const std::vector<std::string>& registry,
                                  Warnings* warnings) {
    const auto idx = alignment(s.entities, registry, "similarity", warnings);
    Matrix values(registry.size(), registry.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) values(i, j) = s.values(idx[i], idx[j]);
    return SimilarityMatrix{registry, std::move(values)};
}

FeatureProfile align_profile(const FeatureProfile& p, const std::vector<std::string>& registry, Warnings* warnings) {
    const auto idx = alignment(p.entities, registry, "profile", warnings);
    Matrix indicator(registry.size(), p.features.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < p.features.size(); ++j) indicator(i, j) = p.indicator(idx[i], j);
    return FeatureProfile{registry, p.features, std::move(indicator)};
}

std::string format_labelled_csv(const std::vector<std::string>& row_names, const std::vector<std::string>& col_names,
                                const Matrix& body, const std::string& corner) {
    if (row_names.size() != body.rows() || col_names.size() != body.cols()) {
        throw DimensionError("format_labelled_csv: names do not match the body shape");
    }
    std::string out = csv_field(corner);
    for (const auto& c : col_names) out += "," + csv_field(c);
    out += "\n";
    for (std::size_t i = 0; i < body.rows(); ++i) {
        out += csv_field(row_names[i]);
        for (double v : body.row(i)) out += "," + format_real(v);
        out += "\n";
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

void write_association_csv(const std::filesystem::path& path, const AssociationDataset& dataset) {
    dataset.validate();
    write_text(path, format_labelled_csv(dataset.drugs, dataset.viruses, dataset.y, "drug"));
}

std::string format_trace_csv(const SolveTrace& trace) {
    std::string out = "iteration,loss\n";
    for (std::size_t k = 0; k < trace.loss.size(); ++k) {
        out += std::to_string(k) + "," + format_real(trace.loss[k]) + "\n";
    }
    return out;
}

}  // namespace grdmf
