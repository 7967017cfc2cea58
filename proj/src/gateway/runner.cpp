#include "metaglyph/gateway/runner.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_set>

#include "metaglyph/errors.hpp"
#include "metaglyph/forge/render.hpp"
#include "metaglyph/util/jsonl.hpp"

namespace metaglyph::gateway {

namespace {

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

} // namespace

TrialRecord run_trial(const PromptJob& job, Backend& backend, const RunConfig& config) {
    config.validate();
    TrialRecord record;
    record.instance_id = job.instance_id;
    record.model = job.model;
    record.variant = job.variant;
    record.prompt_tokens = job.prompt_tokens;
    record.timestamp = utc_now();

    const auto started = std::chrono::steady_clock::now();
    const CompletionResult result = backend.complete(job);
    record.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    record.status = result.status;
    record.raw_response = result.body;
    return record;
}

RunStats run_suite(const std::vector<PromptJob>& jobs, Backend& backend,
                   const RunConfig& config, const std::string& out_path, const StopHook& stop) {
    config.validate();

    std::unordered_set<std::string> done;
    {
        std::ifstream probe(out_path);
        if (probe.good()) {
            for (const auto& row : util::read_jsonl(out_path)) {
                const TrialRecord record = trial_from_json(row);
                done.insert(trial_key(record.instance_id, record.model, record.variant));
            }
        }
    }

    std::vector<const PromptJob*> pending;
    RunStats stats;
    for (const PromptJob& job : jobs) {
        if (done.count(trial_key(job.instance_id, job.model, job.variant))) {
            stats.skipped++;
        } else {
            pending.push_back(&job);
        }
    }
    if (pending.empty()) return stats;

    std::ofstream out(out_path, std::ios::app | std::ios::binary);
    if (!out) throw DomainError("cannot open trials file for append: " + out_path);

    std::mutex sink; // single-writer contract
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> halted{false};

    auto worker = [&] {
        while (!halted.load()) {
            const std::size_t index = cursor.fetch_add(1);
            if (index >= pending.size()) return;
            const TrialRecord record = run_trial(*pending[index], backend, config);
            std::lock_guard<std::mutex> lock(sink);
            if (halted.load()) return;
            out << util::to_line(trial_to_json(record)) << '\n';
            out.flush();
            stats.appended++;
            if (record.status != TrialStatus::Ok) stats.failures++;
            if (stop && stop(stats.appended)) halted.store(true);
        }
    };

    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(config.max_parallel), pending.size());
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return stats;
}

std::vector<PromptJob> build_jobs(const std::vector<forge::TaskInstance>& corpus,
                                  const std::vector<std::string>& model_routes) {
    std::vector<PromptJob> jobs;
    jobs.reserve(corpus.size() * model_routes.size() * 3);
    for (const auto& instance : corpus) {
        const forge::PromptTriplet triplet = forge::compile_triplet(instance);
        for (const auto& route : model_routes) {
            jobs.push_back({instance.id, route, "NL", triplet.nl, triplet.nl_tokens});
            jobs.push_back({instance.id, route, "MG", triplet.mg, triplet.mg_tokens});
            jobs.push_back({instance.id, route, "CTRL", triplet.ctrl, triplet.ctrl_tokens});
        }
    }
    return jobs;
}

std::vector<TrialRecord> read_trials(const std::string& path) {
    std::vector<TrialRecord> records;
    for (const auto& row : util::read_jsonl(path)) records.push_back(trial_from_json(row));
    return records;
}

} // namespace metaglyph::gateway
