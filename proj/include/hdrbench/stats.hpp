#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hdrbench {

// Scene x method x metric score matrix. Missing cells are absent keys, never
// NaN. +infinity is a legal stored value (identical-image PSNR); numeric
// consumers cap it, CSV emission keeps the "inf" sentinel.
struct ScoreTable {
    // metric -> scene -> method -> value. Ordered maps keep every iteration
    // deterministic.
    std::map<std::string, std::map<std::string, std::map<std::string, double>>> cells;

    void set(const std::string& metric, const std::string& scene, const std::string& method,
             double value);
    std::optional<double> get(const std::string& metric, const std::string& scene,
                              const std::string& method) const;

    std::vector<std::string> metrics() const;
    std::vector<std::string> scenes(const std::string& metric) const;
    std::vector<std::string> methods(const std::string& metric) const;

    bool empty() const { return cells.empty(); }
};

// Cap applied to infinite scores before any mean or test.
constexpr double kScoreCap = 100.0;

// Per-method scores for one metric in scene order, infinities capped.
std::vector<double> method_samples(const ScoreTable& table, const std::string& metric,
                                   const std::string& method);

// Scores for two methods restricted to scenes where both exist, capped.
std::pair<std::vector<double>, std::vector<double>> paired_samples(const ScoreTable& table,
                                                                   const std::string& metric,
                                                                   const std::string& method_a,
                                                                   const std::string& method_b);

struct Aggregate {
    std::string method;
    double mean = 0.0;
    double standard_error = 0.0;
    int n = 0;
};

// Mean and SE (sample std over sqrt n) per method; requires >= 2 scores.
std::vector<Aggregate> aggregate(const ScoreTable& table, const std::string& metric);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p_two_sided = 1.0;
};

// Unequal-variance two-sample t-test, Welch-Satterthwaite df. Degenerate
// samples (both variances zero) use the documented convention: equal means
// give p = 1, different means p = 0.
WelchResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

// Paired variant on per-scene differences; df = n - 1. Offered behind a flag
// since scenes are shared between methods.
WelchResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation,
// absolute error below 1e-10. Exposed for oracle tests.
double reg_incomplete_beta(double a, double b, double x);

// Two-sided tail probability of Student's t with the given df.
double student_t_two_sided_p(double t, double df);

struct RankingResult {
    std::string metric;
    std::vector<std::string> methods_by_mean;  // descending mean, ties by label
    std::vector<Aggregate> aggregates;         // same order
    // p-values for every unordered pair, keyed (min label, max label).
    std::map<std::pair<std::string, std::string>, double> pairwise_p;
    // Pairs whose difference is not significant at the threshold.
    std::vector<std::pair<std::string, std::string>> links;
    double p_threshold = 0.05;
    bool paired = false;
};

RankingResult ranking_groups(const ScoreTable& table, const std::string& metric,
                             double p_threshold = 0.05, bool paired = false);

struct EvDelta {
    std::string method;
    double mean_low_clip = 0.0;   // EV-5
    double mean_high_clip = 0.0;  // EV-10
    double delta = 0.0;           // high - low, expected negative
    bool violates_expectation = false;
};

// More clipping should hurt: a method whose EV-10 mean fails to drop below
// its EV-5 mean (ties included) is flagged.
std::vector<EvDelta> ev_consistency(const ScoreTable& table_ev5, const ScoreTable& table_ev10,
                                    const std::string& metric);

// CSV persistence, columns scene,method,value; "inf" for infinities.
void write_score_csv(const ScoreTable& table, const std::string& metric,
                     const std::string& path);
ScoreTable read_score_csv(const std::string& path, const std::string& metric);

}  // namespace hdrbench
