#include "afcfit/dataset.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <utility>

#include "afcfit/common.hpp"

namespace afcfit {

namespace {

void validate_record(const TripletRecord& rec, std::size_t index) {
    const auto where = [&](const char* field) {
        return cat("record ", index, " (id '", rec.id, "'): field ", field);
    };
    if (rec.m < 1) throw ValidationError(cat(where("m"), " must be >= 1, got ", rec.m));
    if (rec.n < 0 || rec.n > rec.m) {
        throw ValidationError(cat(where("n"), " must satisfy 0 <= n <= m, got n=", rec.n,
                                  " m=", rec.m));
    }
    if (!std::isfinite(rec.d0) || rec.d0 < 0.0) {
        throw ValidationError(cat(where("d0"), " must be finite and >= 0, got ", rec.d0));
    }
    if (!std::isfinite(rec.d1) || rec.d1 < 0.0) {
        throw ValidationError(cat(where("d1"), " must be finite and >= 0, got ", rec.d1));
    }
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no, const char* field) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw ParseError(cat("line ", line_no, ": field ", field, " is not a number: '", s, "'"));
    }
    return v;
}

int parse_int(const std::string& s, std::size_t line_no, const char* field) {
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw ParseError(cat("line ", line_no, ": field ", field, " is not an integer: '", s, "'"));
    }
    return static_cast<int>(v);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

JudgementDataset JudgementDataset::from_records(std::vector<TripletRecord> records,
                                                std::string distance_name) {
    if (records.empty()) throw ValidationError("dataset must contain at least one record");
    JudgementDataset ds;
    ds.distance_name = std::move(distance_name);
    bool uniform_m = true;
    for (std::size_t i = 0; i < records.size(); ++i) {
        validate_record(records[i], i);
        if (records[i].m != records[0].m) uniform_m = false;
        if (records[i].group) ds.has_group = true;
    }
    if (uniform_m) ds.fixed_m = records[0].m;
    ds.records = std::move(records);
    return ds;
}

JudgementDataset load_dataset(const std::filesystem::path& path, const std::string& group_col) {
    std::ifstream in(path);
    if (!in) throw InputError(cat("cannot open dataset file: ", path.string()));

    std::string line;
    if (!std::getline(in, line)) throw ParseError(cat(path.string(), ": empty file"));
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::string base_header = "id,d0,d1,n,m";
    bool with_group = false;
    if (line == base_header) {
        with_group = false;
    } else if (line == base_header + "," + group_col) {
        with_group = true;
    } else {
        throw ParseError(cat(path.string(), ": header must be '", base_header, "[,", group_col,
                             "]', got '", line, "'"));
    }
    const std::size_t expected_fields = with_group ? 6 : 5;

    std::vector<TripletRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != expected_fields) {
            throw ParseError(cat("line ", line_no, ": expected ", expected_fields,
                                 " fields, got ", fields.size()));
        }
        TripletRecord rec;
        rec.id = fields[0];
        rec.d0 = parse_double(fields[1], line_no, "d0");
        rec.d1 = parse_double(fields[2], line_no, "d1");
        rec.n = parse_int(fields[3], line_no, "n");
        rec.m = parse_int(fields[4], line_no, "m");
        if (with_group) rec.group = fields[5];
        try {
            validate_record(rec, records.size());
        } catch (const ValidationError& err) {
            throw ValidationError(cat("line ", line_no, ": ", err.what()));
        }
        records.push_back(std::move(rec));
    }
    if (records.empty()) throw ParseError(cat(path.string(), ": no records"));

    auto ds = JudgementDataset::from_records(std::move(records), path.stem().string());
    ds.has_group = with_group;
    return ds;
}

void save_dataset(const JudgementDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError(cat("cannot write dataset file: ", path.string()));
    out << "id,d0,d1,n,m";
    if (ds.has_group) out << ",group";
    out << '\n';
    for (const auto& rec : ds.records) {
        out << rec.id << ',' << format_double(rec.d0) << ',' << format_double(rec.d1) << ','
            << rec.n << ',' << rec.m;
        if (ds.has_group) out << ',' << rec.group.value_or("");
        out << '\n';
    }
    if (!out) throw InputError(cat("write failed: ", path.string()));
}

std::map<std::string, JudgementDataset> split_by_group(const JudgementDataset& ds) {
    std::map<std::string, std::vector<TripletRecord>> parts;
    for (const auto& rec : ds.records) {
        std::string label = rec.group.value_or("");
        if (label.empty()) label = kDefaultGroupLabel;
        parts[label].push_back(rec);
    }
    std::map<std::string, JudgementDataset> result;
    for (auto& [label, records] : parts) {
        auto part = JudgementDataset::from_records(std::move(records), ds.distance_name);
        part.has_group = ds.has_group;
        result.emplace(label, std::move(part));
    }
    return result;
}

JudgementDataset expand_binary(const JudgementDataset& ds) {
    std::vector<TripletRecord> expanded;
    expanded.reserve(ds.records.size());
    for (const auto& rec : ds.records) {
        TripletRecord unit = rec;
        unit.m = 1;
        for (int i = 0; i < rec.m; ++i) {
            unit.n = i < rec.n ? 1 : 0;
            expanded.push_back(unit);
        }
    }
    auto out = JudgementDataset::from_records(std::move(expanded), ds.distance_name);
    out.has_group = ds.has_group;
    return out;
}

}  // namespace afcfit
