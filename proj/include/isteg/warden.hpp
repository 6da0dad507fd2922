#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "isteg/carriermodel.hpp"
#include "isteg/listener.hpp"

namespace isteg {

/// Additive-smoothed token n-gram model of "how the language normally
/// behaves". Sentences are padded with start markers and close with an end
/// marker; the end marker counts toward the vocabulary, start markers do not
/// (they never appear as a successor).
class NgramModel {
public:
    NgramModel() = default;
    NgramModel(int order, double alpha) : order_(order), alpha_(alpha) {}

    int order() const { return order_; }
    double alpha() const { return alpha_; }
    std::size_t vocab_size() const { return vocab_.size(); }

    void observe_sentence(const std::vector<std::string>& tokens);

    /// P(token | context), additively smoothed. Context is the n-1 tokens
    /// preceding the scored position, start-padded.
    double probability(const std::vector<std::string>& context, const std::string& token) const;
    double log2_probability(const std::vector<std::string>& context, const std::string& token) const;

    const std::unordered_map<std::string, int>& vocabulary() const { return vocab_; }

    static constexpr const char* kStartToken = "<s>";
    static constexpr const char* kEndToken = "</s>";

private:
    friend NgramModel train_ngram(const std::vector<std::vector<std::string>>&, int, double);

    std::string context_key(const std::vector<std::string>& context) const;

    int order_ = 2;
    double alpha_ = 1.0;
    std::unordered_map<std::string, std::unordered_map<std::string, int>> successor_counts_;
    std::unordered_map<std::string, int> context_totals_;
    std::unordered_map<std::string, int> vocab_; // token -> unigram count, includes </s>
};

/// Trains on whitespace-tokenized sentences. Throws EmptyCorpusError.
NgramModel train_ngram(const std::vector<std::vector<std::string>>& corpus, int order = 2,
                       double alpha = 1.0);

/// Mean negative log2 probability per token; higher = more anomalous.
/// Throws EmptyInputError on an empty token sequence.
double text_anomaly_score(const std::vector<std::string>& tokens, const NgramModel& model);

/// Network-side detector: how close run durations sit to integer multiples
/// of the decision windows. Covert schedules are built from exact multiples
/// and score near 1; natural speech has continuous durations and scores
/// lower. Always in [0,1]. Throws EmptyTraceError.
double traffic_regularity_score(const PduTrace& trace, const DecoderParams& params);

struct RocPoint {
    double threshold;
    double fpr;
    double tpr;
};

struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

/// ROC points at every distinct threshold plus both endpoints; AUC via the
/// Mann-Whitney rank statistic (ties get midranks). Covert scores are the
/// positive class and are expected to be higher. Throws EmptyInputError.
RocCurve evaluate_roc(const std::vector<double>& covert_scores,
                      const std::vector<double>& benign_scores);

enum class DetectionMethod { TextAnomaly, TrafficRegularity };
enum class Verdict { Covert, Benign };

struct DetectionReport {
    DetectionMethod method;
    double score = 0.0;
    double threshold = 0.0;
    Verdict verdict = Verdict::Benign;
    std::map<std::string, double> aux; // method-specific diagnostics
};

/// verdict = Covert iff score > threshold.
DetectionReport make_detection_report(DetectionMethod method, double score, double threshold,
                                      std::map<std::string, double> aux = {});

/// Nearest-rank percentile of a benign calibration set, pct in (0,100].
/// Throws EmptyInputError.
double percentile(std::vector<double> values, double pct);

} // namespace isteg
