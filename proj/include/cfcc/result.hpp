#ifndef CFCC_RESULT_HPP_
#define CFCC_RESULT_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace cfcc {

/// One maximizer run in machine-readable form. CSV is one row per
/// iteration with the fixed column set
///   algo,graph,n,m,k,eps,seed,iter,node,samples,cfcc,seconds
/// where `node` carries the original label chosen at that iteration,
/// `cfcc` the evaluated score of the prefix (nan when not evaluated) and
/// `seconds` the cumulative wall time.
struct ResultRecord {
    std::string algorithm;
    std::string graph_name;
    int64_t n = 0;
    int64_t m = 0;
    int k = 0;
    double eps = 0.0;
    uint64_t seed = 0;
    std::vector<int64_t> chosen;            // original labels, pick order
    std::vector<int64_t> samples_per_iter;
    std::vector<double> cfcc_per_iter;      // nan where not evaluated
    double cfcc = 0.0;                      // final estimate
    std::string evaluation;                 // dense | cg | none
    double seconds = 0.0;

    static std::string csv_header();
    std::string to_csv() const;             // header not included
    static ResultRecord from_csv(const std::string &rows);

    std::string to_json() const;
    static ResultRecord from_json(const std::string &text);

    bool operator==(const ResultRecord &other) const;
};

} // namespace cfcc

#endif // CFCC_RESULT_HPP_
