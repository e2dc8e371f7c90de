#include "hdrbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hdrbench {

void ScoreTable::set(const std::string& metric, const std::string& scene,
                     const std::string& method, double value) {
    if (std::isnan(value)) throw std::runtime_error("score table rejects NaN");
    cells[metric][scene][method] = value;
}

std::optional<double> ScoreTable::get(const std::string& metric, const std::string& scene,
                                      const std::string& method) const {
    auto m = cells.find(metric);
    if (m == cells.end()) return std::nullopt;
    auto s = m->second.find(scene);
    if (s == m->second.end()) return std::nullopt;
    auto v = s->second.find(method);
    if (v == s->second.end()) return std::nullopt;
    return v->second;
}

std::vector<std::string> ScoreTable::metrics() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : cells) out.push_back(k);
    return out;
}

std::vector<std::string> ScoreTable::scenes(const std::string& metric) const {
    std::vector<std::string> out;
    auto m = cells.find(metric);
    if (m == cells.end()) return out;
    for (const auto& [k, v] : m->second) out.push_back(k);
    return out;
}

std::vector<std::string> ScoreTable::methods(const std::string& metric) const {
    std::vector<std::string> out;
    auto m = cells.find(metric);
    if (m == cells.end()) return out;
    for (const auto& [scene, row] : m->second)
        for (const auto& [method, v] : row)
            if (std::find(out.begin(), out.end(), method) == out.end()) out.push_back(method);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

double cap_score(double v) { return std::isinf(v) ? kScoreCap : v; }

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

std::vector<double> method_samples(const ScoreTable& table, const std::string& metric,
                                   const std::string& method) {
    std::vector<double> out;
    auto m = table.cells.find(metric);
    if (m == table.cells.end()) return out;
    for (const auto& [scene, row] : m->second) {
        auto it = row.find(method);
        if (it != row.end()) out.push_back(cap_score(it->second));
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>> paired_samples(const ScoreTable& table,
                                                                   const std::string& metric,
                                                                   const std::string& method_a,
                                                                   const std::string& method_b) {
    std::vector<double> a, b;
    auto m = table.cells.find(metric);
    if (m == table.cells.end()) return {a, b};
    for (const auto& [scene, row] : m->second) {
        auto ia = row.find(method_a);
        auto ib = row.find(method_b);
        if (ia != row.end() && ib != row.end()) {
            a.push_back(cap_score(ia->second));
            b.push_back(cap_score(ib->second));
        }
    }
    return {a, b};
}

std::vector<Aggregate> aggregate(const ScoreTable& table, const std::string& metric) {
    std::vector<Aggregate> out;
    for (const std::string& method : table.methods(metric)) {
        std::vector<double> s = method_samples(table, metric, method);
        if (s.size() < 2)
            throw std::runtime_error("aggregate: method " + method + " has fewer than 2 scores");
        Aggregate a;
        a.method = method;
        a.n = static_cast<int>(s.size());
        a.mean = mean_of(s);
        a.standard_error = std::sqrt(sample_variance(s, a.mean) / static_cast<double>(s.size()));
        out.push_back(a);
    }
    return out;
}

double reg_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::runtime_error("ibeta: parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    // Lentz continued fraction for the incomplete beta, as in the classic
    // betacf formulation; converges fast when x < (a+1)/(a+b+2).
    auto betacf = [](double a_, double b_, double x_) {
        const double fpmin = 1e-300;
        double qab = a_ + b_;
        double qap = a_ + 1.0;
        double qam = a_ - 1.0;
        double c = 1.0;
        double d = 1.0 - qab * x_ / qap;
        if (std::fabs(d) < fpmin) d = fpmin;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= 500; ++m) {
            int m2 = 2 * m;
            double aa = m * (b_ - m) * x_ / ((qam + m2) * (a_ + m2));
            d = 1.0 + aa * d;
            if (std::fabs(d) < fpmin) d = fpmin;
            c = 1.0 + aa / c;
            if (std::fabs(c) < fpmin) c = fpmin;
            d = 1.0 / d;
            h *= d * c;
            aa = -(a_ + m) * (qab + m) * x_ / ((a_ + m2) * (qap + m2));
            d = 1.0 + aa * d;
            if (std::fabs(d) < fpmin) d = fpmin;
            c = 1.0 + aa / c;
            if (std::fabs(c) < fpmin) c = fpmin;
            d = 1.0 / d;
            double del = d * c;
            h *= del;
            if (std::fabs(del - 1.0) < 1e-14) return h;
        }
        throw std::runtime_error("ibeta: continued fraction did not converge");
    };

    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                      b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (df <= 0.0) throw std::runtime_error("student t: df must be positive");
    if (std::isinf(t)) return 0.0;
    return reg_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

WelchResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::runtime_error("welch_t_test: each sample needs at least 2 values");
    double na = static_cast<double>(a.size());
    double nb = static_cast<double>(b.size());
    double ma = mean_of(a);
    double mb = mean_of(b);
    double va = sample_variance(a, ma);
    double vb = sample_variance(b, mb);

    WelchResult r;
    if (va == 0.0 && vb == 0.0) {
        // Degenerate convention: no spread means the test is decided by the
        // means alone.
        r.df = na + nb - 2.0;
        if (ma == mb) {
            r.t = 0.0;
            r.p_two_sided = 1.0;
        } else {
            r.t = ma > mb ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
            r.p_two_sided = 0.0;
        }
        return r;
    }

    double sa = va / na;
    double sb = vb / nb;
    r.t = (ma - mb) / std::sqrt(sa + sb);
    r.df = (sa + sb) * (sa + sb) /
           (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    r.p_two_sided = student_t_two_sided_p(r.t, r.df);
    return r;
}

WelchResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::runtime_error("paired_t_test: sample sizes differ");
    if (a.size() < 2) throw std::runtime_error("paired_t_test: needs at least 2 pairs");
    std::vector<double> d(a.size());
    for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    double n = static_cast<double>(d.size());
    double md = mean_of(d);
    double vd = sample_variance(d, md);

    WelchResult r;
    r.df = n - 1.0;
    if (vd == 0.0) {
        if (md == 0.0) {
            r.t = 0.0;
            r.p_two_sided = 1.0;
        } else {
            r.t = md > 0.0 ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
            r.p_two_sided = 0.0;
        }
        return r;
    }
    r.t = md / std::sqrt(vd / n);
    r.p_two_sided = student_t_two_sided_p(r.t, r.df);
    return r;
}

RankingResult ranking_groups(const ScoreTable& table, const std::string& metric,
                             double p_threshold, bool paired) {
    RankingResult result;
    result.metric = metric;
    result.p_threshold = p_threshold;
    result.paired = paired;
    result.aggregates = aggregate(table, metric);
    if (result.aggregates.size() < 2)
        throw std::runtime_error("ranking_groups: needs at least 2 methods");

    std::stable_sort(result.aggregates.begin(), result.aggregates.end(),
                     [](const Aggregate& x, const Aggregate& y) {
                         if (x.mean != y.mean) return x.mean > y.mean;
                         return x.method < y.method;
                     });
    for (const Aggregate& a : result.aggregates) result.methods_by_mean.push_back(a.method);

    std::vector<std::string> methods = table.methods(metric);
    for (size_t i = 0; i < methods.size(); ++i)
        for (size_t j = i + 1; j < methods.size(); ++j) {
            auto [sa, sb] = paired_samples(table, metric, methods[i], methods[j]);
            WelchResult w = paired ? paired_t_test(sa, sb) : welch_t_test(sa, sb);
            auto key = std::make_pair(methods[i], methods[j]);
            result.pairwise_p[key] = w.p_two_sided;
            if (w.p_two_sided > p_threshold) result.links.push_back(key);
        }
    return result;
}

std::vector<EvDelta> ev_consistency(const ScoreTable& table_ev5, const ScoreTable& table_ev10,
                                    const std::string& metric) {
    std::vector<std::string> m5 = table_ev5.methods(metric);
    std::vector<std::string> m10 = table_ev10.methods(metric);
    if (m5 != m10) throw std::runtime_error("ev_consistency: method sets differ");

    std::vector<Aggregate> a5 = aggregate(table_ev5, metric);
    std::vector<Aggregate> a10 = aggregate(table_ev10, metric);
    std::vector<EvDelta> out;
    for (size_t i = 0; i < a5.size(); ++i) {
        EvDelta d;
        d.method = a5[i].method;
        d.mean_low_clip = a5[i].mean;
        d.mean_high_clip = a10[i].mean;
        d.delta = d.mean_high_clip - d.mean_low_clip;
        d.violates_expectation = d.delta >= 0.0;
        out.push_back(d);
    }
    return out;
}

namespace {

std::string format_score(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_score_csv(const ScoreTable& table, const std::string& metric,
                     const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "scene,method,value\n";
    auto m = table.cells.find(metric);
    if (m != table.cells.end())
        for (const auto& [scene, row] : m->second)
            for (const auto& [method, value] : row)
                f << scene << "," << method << "," << format_score(value) << "\n";
    if (!f) throw std::runtime_error("write failed: " + path);
}

ScoreTable read_score_csv(const std::string& path, const std::string& metric) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty csv: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "scene,method,value")
        throw std::runtime_error("unexpected csv header in " + path);

    ScoreTable table;
    int lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string scene, method, value;
        if (!std::getline(ss, scene, ',') || !std::getline(ss, method, ',') ||
            !std::getline(ss, value, ','))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected scene,method,value");
        double v;
        if (value == "inf")
            v = std::numeric_limits<double>::infinity();
        else if (value == "-inf")
            v = -std::numeric_limits<double>::infinity();
        else {
            size_t pos = 0;
            v = std::stod(value, &pos);
            if (pos != value.size())
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad value");
        }
        table.set(metric, scene, method, v);
    }
    return table;
}

}  // namespace hdrbench
