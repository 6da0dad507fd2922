#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "isteg/carriermodel.hpp"
#include "isteg/trace_io.hpp"
#include "isteg/warden.hpp"

using namespace isteg;
using isteg::test::random_payload;

namespace {

// Subject-verb-object sentences with rigid slot structure: transitions the
// model can learn, so scrambled or random word salads stand out.
std::vector<std::vector<std::string>> toy_corpus() {
    const std::vector<std::string> subjects{"alice", "bob", "carol", "dave"};
    const std::vector<std::string> verbs{"sees", "likes", "greets", "helps"};
    const std::vector<std::string> objects{"mango", "melon", "grape", "lemon"};
    std::vector<std::vector<std::string>> corpus;
    for (int i = 0; i < 100; ++i)
        corpus.push_back({subjects[i % 4], verbs[(i / 4) % 4], objects[(i / 16) % 4]});
    return corpus;
}

std::vector<std::string> corpus_vocab(const std::vector<std::vector<std::string>>& corpus) {
    std::vector<std::string> vocab;
    for (const auto& sentence : corpus)
        for (const auto& tok : sentence)
            if (std::find(vocab.begin(), vocab.end(), tok) == vocab.end()) vocab.push_back(tok);
    return vocab;
}

std::vector<std::vector<std::string>> natural_corpus() {
    const char* path = std::getenv("ISTEG_CORPUS");
    REQUIRE_MESSAGE(path != nullptr, "ISTEG_CORPUS must point at the bundled corpus file");
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "corpus file unreadable");
    return read_corpus(in);
}

PduTrace covert_trace(std::size_t payload_len, std::uint64_t seed) {
    std::mt19937_64 rng(seed * 7919 + 13);
    const Bytes payload = random_payload(rng, payload_len);
    return synthesize_trace(bits_to_schedule(frame_payload(payload)), {}, seed);
}

} // namespace

TEST_CASE("bigram probabilities follow the additive smoothing formula") {
    const NgramModel model = train_ngram({{"a", "b"}, {"a", "b"}}, 2, 1.0);
    // vocabulary is {a, b, </s>}
    CHECK(model.vocab_size() == 3);
    CHECK(model.probability({"a"}, "b") == doctest::Approx((2.0 + 1.0) / (2.0 + 3.0)));
    CHECK(model.probability({"a"}, "a") == doctest::Approx(1.0 / 5.0));
    CHECK(model.probability({"b"}, NgramModel::kEndToken) == doctest::Approx(3.0 / 5.0));
    CHECK(model.probability({NgramModel::kStartToken}, "a") == doctest::Approx(3.0 / 5.0));
}

TEST_CASE("zero smoothing gives certainty to the only observed successor") {
    const NgramModel model = train_ngram({{"a", "b"}}, 2, 0.0);
    CHECK(model.probability({"a"}, "b") == doctest::Approx(1.0));
    CHECK(model.probability({"a"}, "a") == doctest::Approx(0.0));
}

TEST_CASE("training requires a corpus") {
    CHECK_THROWS_AS(train_ngram({}), EmptyCorpusError);
}

TEST_CASE("per-context probabilities sum to one") {
    for (const int order : {2, 3}) {
        const NgramModel model = train_ngram(toy_corpus(), order, 1.0);
        std::vector<std::string> vocab;
        for (const auto& [tok, count] : model.vocabulary()) vocab.push_back(tok);

        std::vector<std::vector<std::string>> contexts;
        if (order == 2) {
            contexts = {{"alice"}, {"sees"}, {NgramModel::kStartToken}, {"never-seen"}};
        } else {
            contexts = {{"alice", "sees"},
                        {NgramModel::kStartToken, "alice"},
                        {"never", "seen"}};
        }
        for (const auto& ctx : contexts) {
            double sum = 0.0;
            for (const auto& tok : vocab) sum += model.probability(ctx, tok);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("training sentences score below uniform random sequences") {
    const auto corpus = toy_corpus();
    const NgramModel model = train_ngram(corpus, 2, 1.0);
    const auto vocab = corpus_vocab(corpus);

    std::mt19937_64 rng(41);
    double train_total = 0.0;
    double random_total = 0.0;
    for (const auto& sentence : corpus) {
        train_total += text_anomaly_score(sentence, model);
        std::vector<std::string> salad;
        for (std::size_t i = 0; i < sentence.size(); ++i) salad.push_back(vocab[rng() % vocab.size()]);
        random_total += text_anomaly_score(salad, model);
    }
    CHECK(train_total / 100.0 <= random_total / 100.0);
}

TEST_CASE("repeated covert token stands out against natural transcripts") {
    const auto corpus = natural_corpus();
    const NgramModel model = train_ngram(corpus, 2, 1.0);

    std::vector<std::string> lexicon;
    for (const auto& sentence : corpus) lexicon.insert(lexicon.end(), sentence.begin(), sentence.end());

    const SymbolSchedule session{{{SymbolKind::Voice, 40.0}}};
    std::vector<double> natural_scores;
    for (int seed = 0; seed < 200; ++seed) {
        const auto tokens = simulate_recognition(session, RecognitionMode::Natural, lexicon, seed);
        natural_scores.push_back(text_anomaly_score(tokens, model));
    }

    std::mt19937_64 rng(42);
    const Bytes payload = random_payload(rng, 8);
    const SymbolSchedule covert = bits_to_schedule(frame_payload(payload));
    const auto covert_tokens = simulate_recognition(covert, RecognitionMode::Covert, lexicon, 0);
    REQUIRE_FALSE(covert_tokens.empty());
    const double covert_score = text_anomaly_score(covert_tokens, model);

    CHECK(covert_score > percentile(natural_scores, 95.0));
}

TEST_CASE("anomaly scoring needs tokens") {
    const NgramModel model = train_ngram(toy_corpus());
    CHECK_THROWS_AS(text_anomaly_score({}, model), EmptyInputError);
}

TEST_CASE("scrambling a sentence never helps its probability") {
    const auto corpus = toy_corpus();
    const NgramModel model = train_ngram(corpus, 2, 1.0);
    const std::vector<std::string> original{"alice", "sees", "mango"};
    const double original_score = text_anomaly_score(original, model);

    std::mt19937_64 rng(43);
    double scrambled_total = 0.0;
    const int scrambles = 150;
    for (int i = 0; i < scrambles; ++i) {
        std::vector<std::string> shuffled = original;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        scrambled_total += text_anomaly_score(shuffled, model);
    }
    CHECK(scrambled_total / scrambles >= original_score);
}

TEST_CASE("zero-noise covert traffic scores as highly regular") {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 50; ++trial) {
        const PduTrace trace = covert_trace(1 + rng() % 32, trial);
        const double score = traffic_regularity_score(trace, {});
        CHECK(score >= 0.95);
        CHECK(score <= 1.0);
    }
}

TEST_CASE("a single exact-window voice run scores exactly one") {
    const PduTrace trace = synthesize_trace({{{SymbolKind::Voice, 1.0}}}, {}, 0);
    CHECK(traffic_regularity_score(trace, {}) == doctest::Approx(1.0));
}

TEST_CASE("regularity separates covert from natural traffic") {
    double covert_total = 0.0;
    double natural_total = 0.0;
    const int seeds = 100;
    for (int seed = 0; seed < seeds; ++seed) {
        const double c = traffic_regularity_score(covert_trace(8, seed), {});
        const double n = traffic_regularity_score(generate_natural_trace({}, {}, seed), {});
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        CHECK(n >= 0.0);
        CHECK(n <= 1.0);
        covert_total += c;
        natural_total += n;
    }
    CHECK(covert_total / seeds - natural_total / seeds >= 0.15);
}

TEST_CASE("regularity scoring rejects an empty trace") {
    CHECK_THROWS_AS(traffic_regularity_score({}, {}), EmptyTraceError);
}

TEST_CASE("roc on identical distributions is chance") {
    const std::vector<double> scores{0.1, 0.3, 0.5, 0.7, 0.9};
    const RocCurve curve = evaluate_roc(scores, scores);
    CHECK(curve.auc == doctest::Approx(0.5));
}

TEST_CASE("roc on separated distributions is perfect") {
    const RocCurve curve = evaluate_roc({0.8, 0.9, 0.95}, {0.1, 0.2, 0.3});
    CHECK(curve.auc == doctest::Approx(1.0));
    REQUIRE_FALSE(curve.points.empty());
    CHECK(curve.points.front().fpr == doctest::Approx(0.0));
    CHECK(curve.points.back().fpr == doctest::Approx(1.0));
    CHECK(curve.points.back().tpr == doctest::Approx(1.0));
}

TEST_CASE("auc is invariant under monotone transforms of the scores") {
    std::mt19937_64 rng(45);
    std::vector<double> covert, benign;
    for (int i = 0; i < 60; ++i) {
        covert.push_back(0.4 + static_cast<double>(rng() % 1000) / 1600.0);
        benign.push_back(static_cast<double>(rng() % 1000) / 1600.0);
    }
    const double base = evaluate_roc(covert, benign).auc;

    const auto transform = [](std::vector<double> v, auto f) {
        for (auto& x : v) x = f(x);
        return v;
    };
    const auto cube = [](double x) { return x * x * x; };
    const auto scale = [](double x) { return 10.0 * x + 3.0; };
    CHECK(evaluate_roc(transform(covert, cube), transform(benign, cube)).auc == doctest::Approx(base));
    CHECK(evaluate_roc(transform(covert, scale), transform(benign, scale)).auc ==
          doctest::Approx(base));
}

TEST_CASE("roc rejects empty score lists") {
    CHECK_THROWS_AS(evaluate_roc({}, {0.5}), EmptyInputError);
    CHECK_THROWS_AS(evaluate_roc({0.5}, {}), EmptyInputError);
}

TEST_CASE("regularity scores yield a strong detector") {
    std::vector<double> covert, natural;
    for (int seed = 0; seed < 100; ++seed) {
        covert.push_back(traffic_regularity_score(covert_trace(8, seed), {}));
        natural.push_back(traffic_regularity_score(generate_natural_trace({}, {}, seed + 500), {}));
    }
    CHECK(evaluate_roc(covert, natural).auc >= 0.9);
}

TEST_CASE("percentile uses nearest-rank semantics") {
    std::vector<double> century;
    for (int i = 100; i >= 1; --i) century.push_back(static_cast<double>(i));
    CHECK(percentile(century, 95.0) == doctest::Approx(95.0));
    CHECK(percentile(century, 100.0) == doctest::Approx(100.0));
    CHECK(percentile(century, 1.0) == doctest::Approx(1.0));

    CHECK(percentile({10.0, 20.0, 30.0, 40.0}, 50.0) == doctest::Approx(20.0));
    CHECK_THROWS_AS(percentile({}, 95.0), EmptyInputError);
}

TEST_CASE("verdict is covert strictly above the threshold") {
    const DetectionReport at = make_detection_report(DetectionMethod::TrafficRegularity, 0.8, 0.8);
    CHECK(at.verdict == Verdict::Benign);
    const DetectionReport above =
        make_detection_report(DetectionMethod::TrafficRegularity, 0.8000001, 0.8);
    CHECK(above.verdict == Verdict::Covert);
    const DetectionReport below =
        make_detection_report(DetectionMethod::TextAnomaly, 0.3, 0.8, {{"tokens", 12.0}});
    CHECK(below.verdict == Verdict::Benign);
    CHECK(below.method == DetectionMethod::TextAnomaly);
    CHECK(below.aux.at("tokens") == doctest::Approx(12.0));
}
