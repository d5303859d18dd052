#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace afcfit {

// One 2AFC trial: n of m observers judged x1 closer to the reference, with
// model distances d0 = d(ref, x0) and d1 = d(ref, x1).
struct TripletRecord {
    std::string id;
    double d0 = 0.0;
    double d1 = 0.0;
    int n = 0;
    int m = 1;
    std::optional<std::string> group;
};

struct JudgementDataset {
    std::vector<TripletRecord> records;
    std::string distance_name;
    std::optional<int> fixed_m;  // set iff every record shares the same m
    bool has_group = false;      // the source carried a group column

    std::size_t size() const { return records.size(); }

    // Validates invariants, detects fixed_m and has_group.
    static JudgementDataset from_records(std::vector<TripletRecord> records,
                                         std::string distance_name = {});
};

// Reads the interchange CSV `id,d0,d1,n,m[,group]`. group_col names the
// optional sixth column expected in the header.
JudgementDataset load_dataset(const std::filesystem::path& path,
                              const std::string& group_col = "group");

// Writes the same schema; the group column is emitted iff the dataset carries
// one. Floating-point fields round-trip bit-exactly.
void save_dataset(const JudgementDataset& ds, const std::filesystem::path& path);

// Partitions by group label, preserving per-part record order. Records with
// no group (or an empty label) fall under "default".
std::map<std::string, JudgementDataset> split_by_group(const JudgementDataset& ds);

// Rewrites every record (d0,d1,n,m) as m binary records with m=1: n of them
// with n=1 followed by m-n with n=0. Sum of n and sum of m are preserved.
JudgementDataset expand_binary(const JudgementDataset& ds);

inline constexpr const char* kDefaultGroupLabel = "default";

}  // namespace afcfit
