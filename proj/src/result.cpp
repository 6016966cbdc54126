#include "cfcc/result.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "cfcc/errors.hpp"

namespace cfcc {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool double_eq(double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

} // namespace

std::string ResultRecord::csv_header() {
    return "algo,graph,n,m,k,eps,seed,iter,node,samples,cfcc,seconds";
}

std::string ResultRecord::to_csv() const {
    std::ostringstream out;
    for (size_t i = 0; i < chosen.size(); ++i) {
        double iter_cfcc = i < cfcc_per_iter.size() ? cfcc_per_iter[i] : std::nan("");
        if (i + 1 == chosen.size()) iter_cfcc = cfcc;
        out << algorithm << ',' << graph_name << ',' << n << ',' << m << ',' << k << ','
            << fmt_double(eps) << ',' << seed << ',' << (i + 1) << ',' << chosen[i] << ','
            << (i < samples_per_iter.size() ? samples_per_iter[i] : 0) << ','
            << fmt_double(iter_cfcc) << ',' << fmt_double(i + 1 == chosen.size() ? seconds : 0.0)
            << '\n';
    }
    return out.str();
}

ResultRecord ResultRecord::from_csv(const std::string &rows) {
    ResultRecord rec;
    std::istringstream in(rows);
    std::string line;
    bool any = false;
    while (std::getline(in, line)) {
        if (line.empty() || line == csv_header()) continue;
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 12) throw parse_error("ResultRecord: bad CSV row");
        rec.algorithm = fields[0];
        rec.graph_name = fields[1];
        rec.n = std::stoll(fields[2]);
        rec.m = std::stoll(fields[3]);
        rec.k = std::stoi(fields[4]);
        rec.eps = std::stod(fields[5]);
        rec.seed = std::stoull(fields[6]);
        rec.chosen.push_back(std::stoll(fields[8]));
        rec.samples_per_iter.push_back(std::stoll(fields[9]));
        rec.cfcc_per_iter.push_back(std::stod(fields[10]));
        rec.cfcc = std::stod(fields[10]);
        rec.seconds = std::stod(fields[11]);
        any = true;
    }
    if (!any) throw parse_error("ResultRecord: no CSV rows");
    return rec;
}

std::string ResultRecord::to_json() const {
    nlohmann::json j;
    j["algo"] = algorithm;
    j["graph"] = graph_name;
    j["n"] = n;
    j["m"] = m;
    j["k"] = k;
    j["eps"] = eps;
    j["seed"] = seed;
    j["chosen"] = chosen;
    j["samples_per_iter"] = samples_per_iter;
    nlohmann::json per_iter = nlohmann::json::array();
    for (double v : cfcc_per_iter) {
        if (std::isnan(v))
            per_iter.push_back(nullptr);
        else
            per_iter.push_back(v);
    }
    j["cfcc_per_iter"] = per_iter;
    j["cfcc"] = cfcc;
    j["evaluation"] = evaluation;
    j["seconds"] = seconds;
    return j.dump(2);
}

ResultRecord ResultRecord::from_json(const std::string &text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ResultRecord rec;
    rec.algorithm = j.at("algo").get<std::string>();
    rec.graph_name = j.at("graph").get<std::string>();
    rec.n = j.at("n").get<int64_t>();
    rec.m = j.at("m").get<int64_t>();
    rec.k = j.at("k").get<int>();
    rec.eps = j.at("eps").get<double>();
    rec.seed = j.at("seed").get<uint64_t>();
    rec.chosen = j.at("chosen").get<std::vector<int64_t>>();
    rec.samples_per_iter = j.at("samples_per_iter").get<std::vector<int64_t>>();
    for (const auto &v : j.at("cfcc_per_iter"))
        rec.cfcc_per_iter.push_back(v.is_null() ? std::nan("") : v.get<double>());
    rec.cfcc = j.at("cfcc").get<double>();
    rec.evaluation = j.at("evaluation").get<std::string>();
    rec.seconds = j.at("seconds").get<double>();
    return rec;
}

bool ResultRecord::operator==(const ResultRecord &other) const {
    if (algorithm != other.algorithm || graph_name != other.graph_name || n != other.n ||
        m != other.m || k != other.k || !double_eq(eps, other.eps) || seed != other.seed ||
        chosen != other.chosen || samples_per_iter != other.samples_per_iter ||
        !double_eq(cfcc, other.cfcc) || evaluation != other.evaluation ||
        !double_eq(seconds, other.seconds))
        return false;
    if (cfcc_per_iter.size() != other.cfcc_per_iter.size()) return false;
    for (size_t i = 0; i < cfcc_per_iter.size(); ++i)
        if (!double_eq(cfcc_per_iter[i], other.cfcc_per_iter[i])) return false;
    return true;
}

} // namespace cfcc
