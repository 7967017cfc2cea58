#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "httplib.h"
#include "metaglyph/errors.hpp"
#include "metaglyph/forge/instances.hpp"
#include "metaglyph/gateway/http.hpp"
#include "metaglyph/gateway/mock.hpp"
#include "metaglyph/gateway/runner.hpp"
#include "metaglyph/oracle/eval.hpp"
#include "metaglyph/util/jsonl.hpp"

using namespace metaglyph;
using gateway::TrialStatus;

namespace {

std::vector<forge::TaskInstance> small_corpus(int per_family, std::uint64_t seed) {
    std::vector<forge::TaskInstance> corpus;
    for (const auto family : forge::kAllFamilies) {
        for (auto& inst : forge::generate_instances(family, per_family, seed)) {
            oracle::fill_gold(inst);
            corpus.push_back(std::move(inst));
        }
    }
    return corpus;
}

std::map<std::string, std::string> gold_map(const std::vector<forge::TaskInstance>& corpus) {
    std::map<std::string, std::string> gold;
    for (const auto& inst : corpus) gold[inst.id] = util::to_line(inst.gold);
    return gold;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

// Loopback chat-completions stub. The handler runs on the server thread;
// captured state must stay alive until the server stops.
struct TestServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;

    explicit TestServer(httplib::Server::Handler handler) {
        server.Post("/v1/chat/completions", std::move(handler));
        port = server.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~TestServer() {
        server.stop();
        thread.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port) + "/v1"; }
};

gateway::RunConfig test_config(const std::string& url) {
    gateway::RunConfig config;
    config.endpoint_base_url = url;
    config.api_key_env = "METAGLYPH_TEST_KEY";
    config.retry.initial_backoff = std::chrono::milliseconds(5);
    config.timeout = std::chrono::milliseconds(2000);
    return config;
}

std::string chat_body(const std::string& content) {
    util::Json body = {{"choices", {{{"message", {{"role", "assistant"},
                                                  {"content", content}}}}}}};
    return body.dump();
}

struct EnvKey {
    EnvKey() { setenv("METAGLYPH_TEST_KEY", "sk-test-0000", 1); }
    ~EnvKey() { unsetenv("METAGLYPH_TEST_KEY"); }
};

} // namespace

TEST_CASE("run config rejects nonzero temperature and bad bounds") {
    gateway::RunConfig config;
    config.temperature = 0.7;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.temperature = 0.0;
    config.max_parallel = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.max_parallel = 4;
    config.retry.max_attempts = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.retry.max_attempts = 3;
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("trial records round-trip byte-exactly") {
    gateway::TrialRecord record;
    record.instance_id = "selection-007";
    record.model = "m1";
    record.variant = "MG";
    record.prompt_tokens = 41;
    record.raw_response = "```json\n[\"cat\",\t\"dog\"]\n```\n∈ ⊙ \"quoted\" \\ done";
    record.latency_ms = 12;
    record.status = TrialStatus::Ok;
    record.timestamp = "2026-01-01T00:00:00Z";

    const auto back = gateway::trial_from_json(gateway::trial_to_json(record));
    CHECK(back.raw_response == record.raw_response);
    CHECK(back.instance_id == record.instance_id);
    CHECK(back.prompt_tokens == record.prompt_tokens);
    CHECK(back.status == record.status);

    const std::string path = temp_path("metaglyph_verbatim.jsonl");
    std::remove(path.c_str());
    util::append_jsonl(path, gateway::trial_to_json(record));
    const auto loaded = gateway::read_trials(path);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].raw_response == record.raw_response);
    std::remove(path.c_str());
}

TEST_CASE("status keys round-trip and reject garbage") {
    for (const auto status : {TrialStatus::Ok, TrialStatus::TransportError,
                              TrialStatus::CreditExhausted, TrialStatus::Timeout}) {
        CHECK(gateway::status_from_key(gateway::status_key(status)) == status);
    }
    CHECK_THROWS_AS(gateway::status_from_key("mystery"), DomainError);
}

TEST_CASE("mock modes follow their fixed contracts") {
    auto corpus = small_corpus(2, 51);
    const auto gold = gold_map(corpus);
    const auto& first = corpus.front();
    gateway::PromptJob job{first.id, "mock", "MG", "prompt", 10};

    gateway::MockModel echo(gateway::MockMode::EchoOracle, gold);
    CHECK(echo.complete(job).body == gold.at(first.id));
    CHECK(echo.complete(job).status == TrialStatus::Ok);

    gateway::MockModel garbage(gateway::MockMode::Garbage, {});
    CHECK(garbage.complete(job).body == "[]");

    gateway::MockModel fenced(gateway::MockMode::Fenced, gold);
    CHECK(fenced.complete(job).body == "```json\n" + gold.at(first.id) + "\n```");

    gateway::MockModel prose(gateway::MockMode::ProseRefusal, {});
    const std::string body = prose.complete(job).body;
    CHECK(body.find('{') == std::string::npos);
    CHECK(body.find('[') == std::string::npos);

    gateway::MockModel ctrl(gateway::MockMode::CtrlGarbage, gold);
    CHECK(ctrl.complete(job).body == gold.at(first.id));
    gateway::PromptJob ctrl_job{first.id, "mock", "CTRL", "prompt", 10};
    CHECK(ctrl.complete(ctrl_job).body == "[]");

    CHECK_THROWS_AS(gateway::MockModel(gateway::MockMode::EchoOracle, {}), ConfigError);
    CHECK_THROWS_AS(gateway::mock_mode_from_key("oracle"), ConfigError);
    CHECK(gateway::mock_mode_from_key("ctrl_garbage") == gateway::MockMode::CtrlGarbage);
}

TEST_CASE("mock responses are deterministic under concurrency") {
    auto corpus = small_corpus(1, 52);
    const auto gold = gold_map(corpus);
    gateway::MockModel echo(gateway::MockMode::EchoOracle, gold);
    gateway::PromptJob job{corpus.front().id, "mock", "NL", "prompt", 5};

    std::vector<std::thread> threads;
    std::vector<std::string> results(16);
    for (int i = 0; i < 16; ++i) {
        threads.emplace_back([&, i] { results[i] = echo.complete(job).body; });
    }
    for (auto& t : threads) t.join();
    for (const auto& r : results) CHECK(r == gold.at(corpus.front().id));
}

TEST_CASE("build_jobs expands corpus × models × variants with token parity") {
    const auto corpus = small_corpus(2, 53);
    const auto jobs = gateway::build_jobs(corpus, {"m1", "m2"});
    CHECK(jobs.size() == corpus.size() * 2 * 3);
    std::set<std::string> keys;
    for (const auto& job : jobs) {
        keys.insert(gateway::trial_key(job.instance_id, job.model, job.variant));
        CHECK(job.prompt_tokens > 0);
        CHECK_FALSE(job.prompt_text.empty());
    }
    CHECK(keys.size() == jobs.size());
}

TEST_CASE("run_suite writes one record per job and resumes idempotently") {
    auto corpus = small_corpus(3, 54);
    corpus.resize(10);
    const auto gold = gold_map(corpus);
    gateway::MockModel echo(gateway::MockMode::EchoOracle, gold);
    const auto jobs = gateway::build_jobs(corpus, {"m1", "m2"});
    CHECK(jobs.size() == 60);

    const std::string path = temp_path("metaglyph_suite.jsonl");
    std::remove(path.c_str());
    gateway::RunConfig config;
    config.max_parallel = 4;

    const auto first = gateway::run_suite(jobs, echo, config, path);
    CHECK(first.appended == 60);
    CHECK(first.skipped == 0);
    CHECK(first.failures == 0);

    const auto second = gateway::run_suite(jobs, echo, config, path);
    CHECK(second.appended == 0);
    CHECK(second.skipped == 60);

    const auto records = gateway::read_trials(path);
    CHECK(records.size() == 60);
    std::set<std::string> keys;
    for (const auto& r : records) {
        keys.insert(gateway::trial_key(r.instance_id, r.model, r.variant));
        CHECK(r.status == TrialStatus::Ok);
        CHECK_FALSE(r.timestamp.empty());
    }
    CHECK(keys.size() == 60);
    std::remove(path.c_str());
}

TEST_CASE("killing a run mid-flight and resuming yields exactly one record per key") {
    auto corpus = small_corpus(3, 55);
    corpus.resize(10);
    const auto gold = gold_map(corpus);
    gateway::MockModel echo(gateway::MockMode::EchoOracle, gold);
    const auto jobs = gateway::build_jobs(corpus, {"m1", "m2"});

    const std::string path = temp_path("metaglyph_resume.jsonl");
    std::remove(path.c_str());
    gateway::RunConfig config;
    config.max_parallel = 3;

    const auto crashed = gateway::run_suite(jobs, echo, config, path,
                                            [](int appended) { return appended >= 17; });
    CHECK(crashed.appended >= 17);
    CHECK(crashed.appended < 60);

    const auto resumed = gateway::run_suite(jobs, echo, config, path);
    CHECK(resumed.appended + resumed.skipped == 60);
    CHECK(resumed.skipped == crashed.appended);

    const auto records = gateway::read_trials(path);
    CHECK(records.size() == 60);
    std::set<std::string> keys;
    for (const auto& r : records) keys.insert(gateway::trial_key(r.instance_id, r.model, r.variant));
    CHECK(keys.size() == 60);
    std::remove(path.c_str());
}

TEST_CASE("in-flight requests never exceed max_parallel") {
    struct Instrumented final : gateway::Backend {
        std::atomic<int> inflight{0};
        std::atomic<int> high_water{0};
        gateway::CompletionResult complete(const gateway::PromptJob&) override {
            const int now = ++inflight;
            int seen = high_water.load();
            while (now > seen && !high_water.compare_exchange_weak(seen, now)) {
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(2));
            --inflight;
            return {TrialStatus::Ok, "[]"};
        }
    };

    auto corpus = small_corpus(4, 56);
    const auto jobs = gateway::build_jobs(corpus, {"m1"});
    REQUIRE(jobs.size() >= 40);

    Instrumented backend;
    const std::string path = temp_path("metaglyph_parallel.jsonl");
    std::remove(path.c_str());
    gateway::RunConfig config;
    config.max_parallel = 3;
    gateway::run_suite(jobs, backend, config, path);
    CHECK(backend.high_water.load() <= 3);
    CHECK(backend.high_water.load() >= 1);
    std::remove(path.c_str());
}

TEST_CASE("http backend requires the API key environment variable") {
    unsetenv("METAGLYPH_TEST_KEY");
    CHECK_THROWS_AS(gateway::HttpBackend(test_config("http://127.0.0.1:1/v1")), ConfigError);
}

TEST_CASE("http backend sends one legend-free user message at temperature 0") {
    EnvKey key;
    util::Json seen;
    std::string auth;
    TestServer server([&](const httplib::Request& req, httplib::Response& res) {
        seen = util::Json::parse(req.body, nullptr, false);
        auth = req.get_header_value("Authorization");
        res.set_content(chat_body("[\"cat\"]"), "application/json");
    });

    gateway::HttpBackend backend(test_config(server.url()));
    const auto result = backend.complete({"selection-000", "model-a", "MG", "items ⇒ select", 3});
    CHECK(result.status == TrialStatus::Ok);
    CHECK(result.body == "[\"cat\"]");

    REQUIRE_FALSE(seen.is_discarded());
    CHECK(seen["model"] == "model-a");
    CHECK(seen["temperature"] == 0);
    REQUIRE(seen["messages"].size() == 1);
    CHECK(seen["messages"][0]["role"] == "user");
    CHECK(seen["messages"][0]["content"] == "items ⇒ select");
    CHECK(auth == "Bearer sk-test-0000");
}

TEST_CASE("http backend retries rate limits and recovers") {
    EnvKey key;
    std::atomic<int> calls{0};
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        if (++calls <= 2) {
            res.status = 429;
            return;
        }
        res.set_content(chat_body("ok"), "application/json");
    });

    gateway::HttpBackend backend(test_config(server.url()));
    const auto result = backend.complete({"i", "m", "NL", "p", 1});
    CHECK(result.status == TrialStatus::Ok);
    CHECK(result.body == "ok");
    CHECK(calls.load() == 3);
}

TEST_CASE("payment-required stops immediately as credit_exhausted") {
    EnvKey key;
    std::atomic<int> calls{0};
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        ++calls;
        res.status = 402;
    });

    gateway::HttpBackend backend(test_config(server.url()));
    const auto result = backend.complete({"i", "m", "NL", "p", 1});
    CHECK(result.status == TrialStatus::CreditExhausted);
    CHECK(result.body.empty());
    CHECK(calls.load() == 1);
}

TEST_CASE("persistent server errors exhaust retries into transport_error") {
    EnvKey key;
    std::atomic<int> calls{0};
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        ++calls;
        res.status = 500;
    });

    gateway::HttpBackend backend(test_config(server.url()));
    const auto result = backend.complete({"i", "m", "NL", "p", 1});
    CHECK(result.status == TrialStatus::TransportError);
    CHECK(calls.load() == 3);
}

TEST_CASE("malformed completion bodies are transport errors") {
    EnvKey key;
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"choices\": []}", "application/json");
    });

    gateway::HttpBackend backend(test_config(server.url()));
    CHECK(backend.complete({"i", "m", "NL", "p", 1}).status == TrialStatus::TransportError);
}

TEST_CASE("slow responses become timeouts") {
    EnvKey key;
    TestServer server([&](const httplib::Request&, httplib::Response& res) {
        std::this_thread::sleep_for(std::chrono::milliseconds(400));
        res.set_content(chat_body("late"), "application/json");
    });

    auto config = test_config(server.url());
    config.timeout = std::chrono::milliseconds(100);
    config.retry.max_attempts = 1;
    gateway::HttpBackend backend(config);
    CHECK(backend.complete({"i", "m", "NL", "p", 1}).status == TrialStatus::Timeout);
}

TEST_CASE("run_trial stamps latency, tokens, and a UTC timestamp") {
    auto corpus = small_corpus(1, 57);
    const auto gold = gold_map(corpus);
    gateway::MockModel echo(gateway::MockMode::EchoOracle, gold);
    gateway::RunConfig config;

    const gateway::PromptJob job{corpus.front().id, "mock", "MG", "prompt", 41};
    const auto record = gateway::run_trial(job, echo, config);
    CHECK(record.instance_id == corpus.front().id);
    CHECK(record.model == "mock");
    CHECK(record.variant == "MG");
    CHECK(record.prompt_tokens == 41);
    CHECK(record.latency_ms >= 0);
    CHECK(record.raw_response == gold.at(corpus.front().id));
    REQUIRE(record.timestamp.size() == 20);
    CHECK(record.timestamp.back() == 'Z');
    CHECK(record.timestamp[4] == '-');
    CHECK(record.timestamp[10] == 'T');
}
