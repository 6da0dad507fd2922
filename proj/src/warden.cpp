#include "isteg/warden.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isteg {

namespace {
constexpr char kKeySep = '\x1f';
}

std::string NgramModel::context_key(const std::vector<std::string>& context) const {
    std::string key;
    for (const auto& token : context) {
        key += token;
        key += kKeySep;
    }
    return key;
}

void NgramModel::observe_sentence(const std::vector<std::string>& tokens) {
    std::vector<std::string> padded;
    padded.reserve(tokens.size() + static_cast<std::size_t>(order_));
    for (int i = 0; i < order_ - 1; ++i) padded.emplace_back(kStartToken);
    padded.insert(padded.end(), tokens.begin(), tokens.end());
    padded.emplace_back(kEndToken);

    for (const auto& token : tokens) ++vocab_[token];
    ++vocab_[kEndToken];

    const auto ctx_len = static_cast<std::size_t>(order_ - 1);
    for (std::size_t i = ctx_len; i < padded.size(); ++i) {
        const std::vector<std::string> context(padded.begin() + static_cast<std::ptrdiff_t>(i - ctx_len),
                                               padded.begin() + static_cast<std::ptrdiff_t>(i));
        const std::string key = context_key(context);
        ++successor_counts_[key][padded[i]];
        ++context_totals_[key];
    }
}

double NgramModel::probability(const std::vector<std::string>& context,
                               const std::string& token) const {
    const std::string key = context_key(context);
    int successor = 0;
    int total = 0;
    if (auto totals_it = context_totals_.find(key); totals_it != context_totals_.end()) {
        total = totals_it->second;
        const auto& successors = successor_counts_.at(key);
        if (auto it = successors.find(token); it != successors.end()) successor = it->second;
    }
    const auto v = static_cast<double>(vocab_.size());
    const double denom = static_cast<double>(total) + alpha_ * v;
    if (denom <= 0.0) return 0.0;
    return (static_cast<double>(successor) + alpha_) / denom;
}

double NgramModel::log2_probability(const std::vector<std::string>& context,
                                    const std::string& token) const {
    return std::log2(probability(context, token));
}

NgramModel train_ngram(const std::vector<std::vector<std::string>>& corpus, int order,
                       double alpha) {
    if (corpus.empty()) throw EmptyCorpusError("cannot train on an empty corpus");
    if (order < 1) throw std::invalid_argument("ngram order must be >= 1");
    if (alpha < 0.0) throw std::invalid_argument("smoothing alpha must be >= 0");

    NgramModel model(order, alpha);
    for (const auto& sentence : corpus) model.observe_sentence(sentence);
    return model;
}

double text_anomaly_score(const std::vector<std::string>& tokens, const NgramModel& model) {
    if (tokens.empty()) throw EmptyInputError("cannot score an empty token sequence");

    const auto ctx_len = static_cast<std::size_t>(model.order() - 1);
    std::vector<std::string> padded;
    padded.reserve(tokens.size() + ctx_len);
    for (std::size_t i = 0; i < ctx_len; ++i) padded.emplace_back(NgramModel::kStartToken);
    padded.insert(padded.end(), tokens.begin(), tokens.end());

    double total = 0.0;
    for (std::size_t i = ctx_len; i < padded.size(); ++i) {
        const std::vector<std::string> context(padded.begin() + static_cast<std::ptrdiff_t>(i - ctx_len),
                                               padded.begin() + static_cast<std::ptrdiff_t>(i));
        total -= model.log2_probability(context, padded[i]);
    }
    return total / static_cast<double>(tokens.size());
}

double traffic_regularity_score(const PduTrace& trace, const DecoderParams& params) {
    if (trace.empty()) throw EmptyTraceError("cannot score an empty trace");
    const std::vector<RunSegment> runs = segment_runs(trace, params);

    double residual_sum = 0.0;
    for (const auto& run : runs) {
        const double window =
            (run.kind == SymbolKind::Voice) ? params.voice_window_s : params.silence_window_s;
        const double x = run.duration() / window;
        residual_sum += std::abs(x - std::round(x));
    }
    const double score = 1.0 - 2.0 * residual_sum / static_cast<double>(runs.size());
    return std::clamp(score, 0.0, 1.0);
}

RocCurve evaluate_roc(const std::vector<double>& covert_scores,
                      const std::vector<double>& benign_scores) {
    if (covert_scores.empty() || benign_scores.empty())
        throw EmptyInputError("ROC needs scores from both classes");

    const auto n_pos = static_cast<double>(covert_scores.size());
    const auto n_neg = static_cast<double>(benign_scores.size());

    // Mann-Whitney AUC with midranks for ties.
    struct Entry {
        double score;
        bool positive;
    };
    std::vector<Entry> entries;
    entries.reserve(covert_scores.size() + benign_scores.size());
    for (double s : covert_scores) entries.push_back({s, true});
    for (double s : benign_scores) entries.push_back({s, false});
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.score < b.score; });

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t j = i;
        while (j < entries.size() && entries[j].score == entries[i].score) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) {
            if (entries[k].positive) rank_sum_pos += midrank;
        }
        i = j;
    }
    const double u = rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0;

    RocCurve curve;
    curve.auc = u / (n_pos * n_neg);

    // Verdict rule is score > threshold; one point per distinct threshold
    // plus both endpoints.
    std::vector<double> thresholds;
    thresholds.reserve(entries.size());
    for (const auto& e : entries) thresholds.push_back(e.score);
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    const auto frac_above = [](const std::vector<double>& scores, double threshold) {
        std::size_t count = 0;
        for (double s : scores) {
            if (s > threshold) ++count;
        }
        return static_cast<double>(count) / static_cast<double>(scores.size());
    };

    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    for (double threshold : thresholds) {
        curve.points.push_back({threshold, frac_above(benign_scores, threshold),
                                frac_above(covert_scores, threshold)});
    }
    curve.points.push_back({-std::numeric_limits<double>::infinity(), 1.0, 1.0});
    return curve;
}

DetectionReport make_detection_report(DetectionMethod method, double score, double threshold,
                                      std::map<std::string, double> aux) {
    DetectionReport report;
    report.method = method;
    report.score = score;
    report.threshold = threshold;
    report.verdict = score > threshold ? Verdict::Covert : Verdict::Benign;
    report.aux = std::move(aux);
    return report;
}

double percentile(std::vector<double> values, double pct) {
    if (values.empty()) throw EmptyInputError("percentile of an empty set");
    if (pct <= 0.0 || pct > 100.0) throw std::invalid_argument("percentile must be in (0,100]");
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    const auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
    return values[std::max<std::size_t>(rank, 1) - 1];
}

} // namespace isteg
