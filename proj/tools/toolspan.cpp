// Command-line front end for the dataset pipeline, the inference loop and the
// benchmark tools. Every subcommand prints a JSON report on stdout and a
// one-line summary on stderr.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "toolspan/toolspan.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
using namespace toolspan;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitEndpoint = 3;
constexpr int kExitData = 4;

// Settings shared by all subcommands. A JSON config file supplies defaults;
// explicit flags win.
struct Config {
    json doc = json::object();

    void load(const fs::path& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config " + path.string());
        try {
            doc = json::parse(in);
        } catch (const json::exception& ex) {
            throw ConfigError("bad config " + path.string() + ": " + ex.what());
        }
        if (!doc.is_object()) throw ConfigError("config must be a JSON object");
        base = path.parent_path();
    }

    template <class T>
    std::optional<T> get(const char* key) const {
        if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
        try {
            return doc[key].get<T>();
        } catch (const json::exception& ex) {
            throw ConfigError(std::string("config key '") + key + "': " + ex.what());
        }
    }

    // Paths in the config are relative to the config file.
    std::optional<fs::path> path(const char* key) const {
        auto s = get<std::string>(key);
        if (!s) return std::nullopt;
        fs::path p(*s);
        return p.is_relative() ? base / p : p;
    }

    fs::path base;
};

Config g_config;

template <class T>
T pick(const std::optional<T>& flag, const char* key, T fallback) {
    if (flag) return *flag;
    if (auto v = g_config.get<T>(key)) return *v;
    return fallback;
}

fs::path require_path(const std::optional<std::string>& flag, const char* key, const char* what) {
    if (flag) return *flag;
    if (auto p = g_config.path(key)) return *p;
    throw ConfigError(std::string("missing ") + what + " (--" + key + " or config '" + key + "')");
}

fs::path require_existing(const std::optional<std::string>& flag, const char* key, const char* what) {
    auto p = require_path(flag, key, what);
    if (!fs::exists(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
    return p;
}

// Output path: the flag, else <out_dir>/<default_name>.
fs::path output_path(const std::optional<std::string>& flag, const char* default_name) {
    if (flag) return *flag;
    if (auto dir = g_config.path("out_dir")) {
        fs::create_directories(*dir);
        return *dir / default_name;
    }
    throw ConfigError(std::string("missing --out (or config 'out_dir') for ") + default_name);
}

void emit(const ojson& report, const std::string& summary) {
    std::cout << report.dump(2) << std::endl;
    std::cerr << summary << std::endl;
}

// Endpoint flags for one role (judge or convert).
struct EndpointFlags {
    std::optional<std::string> url, model, replay;
    std::optional<double> timeout;
    std::optional<unsigned> retries;
};

void add_endpoint_flags(CLI::App* cmd, EndpointFlags& f) {
    cmd->add_option("--endpoint", f.url, "chat-completions base URL");
    cmd->add_option("--model", f.model, "model name sent to the endpoint");
    cmd->add_option("--replay", f.replay, "JSONL of recorded replies {entry_id, reply|error}");
    cmd->add_option("--request-timeout", f.timeout, "per-request timeout in seconds");
    cmd->add_option("--max-retries", f.retries, "retries on transport errors and 5xx");
}

// Config sections "judge" / "convert" hold {base_url, model, timeout,
// max_retries, temperature, replay}. The API key comes from TOOLSPAN_API_KEY.
std::unique_ptr<annotate::ChatClient> make_client(const EndpointFlags& f, const char* section) {
    json sec = g_config.doc.value(section, json::object());
    auto replay = f.replay;
    if (!replay && sec.contains("replay")) {
        fs::path p = sec["replay"].get<std::string>();
        replay = (p.is_relative() ? g_config.base / p : p).string();
    }
    if (replay) return std::make_unique<annotate::ReplayChatClient>(annotate::ReplayChatClient::from_file(*replay));
    annotate::ChatEndpoint ep;
    ep.base_url = f.url ? *f.url : sec.value("base_url", std::string());
    ep.model_name = f.model ? *f.model : sec.value("model", std::string());
    ep.timeout_seconds = f.timeout ? *f.timeout : sec.value("timeout", 60.0);
    ep.max_retries = f.retries ? *f.retries : sec.value("max_retries", 2u);
    ep.temperature = sec.value("temperature", 0.0);
    if (const char* key = std::getenv("TOOLSPAN_API_KEY")) ep.api_key = key;
    if (ep.base_url.empty()) throw ConfigError(std::string("no ") + section + " endpoint (--endpoint or --replay)");
    if (ep.model_name.empty()) throw ConfigError(std::string("no model name for the ") + section + " endpoint");
    return std::make_unique<annotate::HttpChatClient>(ep);
}

std::unique_ptr<Executor> make_runner(const std::optional<std::string>& flag) {
    std::string cmd = flag ? *flag : g_config.get<std::string>("runner").value_or("");
    if (cmd.empty()) throw ConfigError("no runner command (--runner or config 'runner')");
    return std::make_unique<SubprocessExecutor>(split_command(cmd));
}

std::size_t workers(const std::optional<std::size_t>& flag) {
    auto n = pick<std::size_t>(flag, "workers", 8);
    if (n == 0) throw ConfigError("workers must be at least 1");
    return n;
}

// Entry ids key journals and reject lists; entries without one get "#<line>".
std::string id_of(const Entry& e, std::size_t index) { return e.entry_id.value_or("#" + std::to_string(index + 1)); }

void write_rejects(const std::optional<std::string>& path, const std::vector<std::pair<std::string, RejectReason>>& rejects) {
    if (!path) return;
    std::ofstream out(*path, std::ios::app | std::ios::binary);
    if (!out) throw DataError("cannot write " + *path);
    for (const auto& [id, r] : rejects) out << json{{"entry_id", id}, {"reason", to_string(r)}}.dump() << '\n';
}

ojson stage_report(const char* stage, std::size_t in, std::size_t out,
                   const std::vector<std::pair<std::string, RejectReason>>& rejects) {
    RejectionReport r;
    for (std::size_t i = 0; i < out; ++i) r.add(Kept{});
    for (const auto& x : rejects) r.add(x.second);
    ojson j;
    j["stage"] = stage;
    j["input"] = in;
    j["output"] = out;
    j["outcomes"] = r.to_json();
    return j;
}

// Shared driver for the single-stage filters: runs fn on every entry in
// parallel, keeps input order, writes survivors and rejects.
template <class Fn>
int run_filter(const char* stage, const std::vector<Entry>& entries, const fs::path& out,
               const std::optional<std::string>& rejects_path, std::size_t nworkers, Fn&& fn) {
    std::vector<StageResult> results(entries.size(), StageResult{RejectReason::ParseFailure});
    parallel_for(entries.size(), nworkers, [&](std::size_t i) { results[i] = fn(entries[i]); });
    std::vector<Entry> kept;
    std::vector<std::pair<std::string, RejectReason>> rejects;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (auto* e = std::get_if<Entry>(&results[i]))
            kept.push_back(std::move(*e));
        else
            rejects.emplace_back(id_of(entries[i], i), std::get<RejectReason>(results[i]));
    }
    write_entries(out, kept);
    write_rejects(rejects_path, rejects);
    emit(stage_report(stage, entries.size(), kept.size(), rejects),
         std::string(stage) + ": " + std::to_string(kept.size()) + "/" + std::to_string(entries.size()) + " kept");
    return 0;
}

std::vector<int> parse_template_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = text::trim(item);
        if (item.empty()) continue;
        auto dash = item.find('-');
        try {
            if (dash != std::string::npos) {
                int lo = std::stoi(item.substr(0, dash)), hi = std::stoi(item.substr(dash + 1));
                for (int t = lo; t <= hi; ++t) out.push_back(t);
            } else {
                out.push_back(std::stoi(item));
            }
        } catch (const std::exception&) {
            throw ConfigError("bad template list '" + s + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"toolspan: tool-augmented dataset pipeline, inference loop and benchmarks"};
    app.require_subcommand(1);
    std::optional<std::string> config_path;
    app.add_option("--config", config_path, "JSON config file");
    app.parse_complete_callback([&] {
        if (config_path) g_config.load(*config_path);
    });

    int status = 0;

    // normalize ------------------------------------------------------------
    std::optional<std::string> norm_manifest, norm_out;
    bool norm_skip_bad = false;
    auto* normalize = app.add_subcommand("normalize", "convert every manifest source to ChatML JSONL");
    normalize->add_option("--manifest", norm_manifest);
    normalize->add_option("--out", norm_out);
    normalize->add_flag("--skip-bad", norm_skip_bad, "skip records the adapter cannot read");
    normalize->callback([&] {
        auto sources = pool::load_manifest(require_existing(norm_manifest, "manifest", "manifest"));
        auto out_path = output_path(norm_out, "normalized.jsonl");
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + out_path.string());
        ojson rows = ojson::array();
        std::size_t total = 0;
        for (auto& src : sources) {
            std::size_t index = 0;
            pool::NormalizeOptions opts;
            opts.skip_bad_records = norm_skip_bad;
            auto rep = pool::normalize_source(
                src,
                [&](Entry&& e) {
                    if (!e.entry_id) e.entry_id = src.source_id + ":" + std::to_string(index);
                    ++index;
                    out << serialize_entry(e) << '\n';
                },
                opts);
            total += rep.entries;
            rows.push_back({{"source_id", src.source_id},
                            {"adapter", pool::to_string(src.adapter)},
                            {"entries", rep.entries},
                            {"skipped_lines", rep.skipped_lines}});
        }
        emit(ojson{{"sources", rows}, {"entries", total}}, "normalize: " + std::to_string(total) + " entries");
    });

    // score-pool -----------------------------------------------------------
    std::optional<std::string> sp_manifest, sp_labels, sp_out;
    std::optional<std::size_t> sp_sample, sp_workers;
    std::optional<std::uint64_t> sp_seed, sp_budget;
    EndpointFlags sp_ep;
    auto* score = app.add_subcommand("score-pool", "sample each source, judge and label it, compute W and Q");
    score->add_option("--manifest", sp_manifest);
    score->add_option("--labels", sp_labels, "CSV source_id,entry_index,clean");
    score->add_option("--sample-size", sp_sample, "N entries sampled per source");
    score->add_option("--seed", sp_seed);
    score->add_option("--budget", sp_budget);
    score->add_option("--workers", sp_workers);
    score->add_option("--out", sp_out, "stats report JSON");
    add_endpoint_flags(score, sp_ep);
    score->callback([&] {
        auto sources = pool::load_manifest(require_existing(sp_manifest, "manifest", "manifest"));
        auto labels = pool::load_labels(require_existing(sp_labels, "labels", "labels file"));
        const auto n = pick<std::size_t>(sp_sample, "sample_size", 500);
        const auto seed = pick<std::uint64_t>(sp_seed, "seed", 0);
        const auto budget = pick<std::uint64_t>(sp_budget, "budget", pool::SelectionBudget{}.target_entries);
        if (n == 0) throw ConfigError("sample size must be at least 1");
        if (budget == 0) throw ConfigError("budget must be at least 1");
        auto client = make_client(sp_ep, "judge");
        const auto nworkers = workers(sp_workers);
        std::vector<pool::PoolStats> stats;
        std::map<std::string, std::uint64_t> counts;
        for (std::size_t s = 0; s < sources.size(); ++s) {
            auto& src = sources[s];
            auto entries = pool::normalize_all(src);
            counts[src.source_id] = entries.size();
            if (entries.empty()) throw DataError("source " + src.source_id + " is empty");
            std::vector<std::size_t> idx(entries.size());
            std::iota(idx.begin(), idx.end(), 0);
            auto drawn = pool::reservoir_sample(idx, n, seed + s);
            if (drawn.short_source)
                std::cerr << "warning: source " << src.source_id << " has " << entries.size() << " entries, fewer than "
                          << n << "; all are used" << std::endl;
            auto sample = std::move(drawn.items);
            std::sort(sample.begin(), sample.end());
            const auto& src_labels = labels[src.source_id];
            std::vector<bool> clean;
            for (auto i : sample) {
                auto it = src_labels.find(i);
                if (it == src_labels.end())
                    throw DataError("no clean label for " + src.source_id + " entry " + std::to_string(i));
                clean.push_back(it->second);
            }
            std::vector<char> valuable(sample.size());
            parallel_for(sample.size(), nworkers, [&](std::size_t k) {
                auto e = entries[sample[k]];
                if (!e.entry_id) e.entry_id = src.source_id + ":" + std::to_string(sample[k]);
                valuable[k] = annotate::judge_valuable(e, *client);
            });
            stats.push_back(pool::compute_stats(src.source_id, {valuable.begin(), valuable.end()}, clean));
        }
        auto takes = pool::rank_and_select(stats, counts, {budget});
        auto report = pool::stats_report(stats, counts, takes);
        write_json(output_path(sp_out, "pool_stats.json"), report);
        emit(report, "score-pool: " + std::to_string(stats.size()) + " sources scored");
    });

    // select ---------------------------------------------------------------
    std::optional<std::string> sel_stats, sel_out, sel_manifest, sel_entries_out;
    std::optional<std::uint64_t> sel_budget;
    auto* select = app.add_subcommand("select", "rank sources by QxW and fill the entry budget");
    select->add_option("--stats", sel_stats, "stats report from score-pool");
    select->add_option("--budget", sel_budget);
    select->add_option("--out", sel_out, "selection report JSON");
    select->add_option("--manifest", sel_manifest, "also write the selected entries");
    select->add_option("--entries-out", sel_entries_out);
    select->callback([&] {
        auto stats_path = require_existing(sel_stats, "stats", "stats report");
        json doc;
        try {
            std::ifstream in(stats_path);
            doc = json::parse(in);
        } catch (const json::exception& ex) {
            throw DataError(stats_path.string() + ": " + ex.what());
        }
        std::vector<pool::PoolStats> stats;
        std::map<std::string, std::uint64_t> counts;
        try {
            for (const auto& row : doc.at("sources")) {
                stats.push_back(pool::pool_stats_from_json(row));
                if (row.contains("entry_count")) counts[stats.back().source_id] = row["entry_count"].get<std::uint64_t>();
            }
        } catch (const json::exception& ex) {
            throw DataError(stats_path.string() + ": " + ex.what());
        }
        const auto budget = pick<std::uint64_t>(sel_budget, "budget", pool::SelectionBudget{}.target_entries);
        if (budget == 0) throw ConfigError("budget must be at least 1");
        std::optional<std::vector<pool::SourceDescriptor>> sources;
        if (sel_manifest || g_config.get<std::string>("manifest")) {
            sources = pool::load_manifest(require_existing(sel_manifest, "manifest", "manifest"));
        }
        if (sources)
            for (auto& src : *sources)
                if (!counts.count(src.source_id)) counts[src.source_id] = pool::normalize_all(src).size();
        auto takes = pool::rank_and_select(stats, counts, {budget});
        auto report = pool::stats_report(stats, counts, takes);
        ojson selection = ojson::array();
        for (const auto& t : takes) selection.push_back({t.source_id, t.count});
        report["selection"] = selection;
        if (sel_out || g_config.get<std::string>("out_dir")) write_json(output_path(sel_out, "selection.json"), report);
        if (sources) {
            auto out_path = output_path(sel_entries_out, "selected.jsonl");
            std::vector<Entry> chosen;
            for (std::size_t s = 0; s < sources->size(); ++s) {
                auto& src = (*sources)[s];
                auto it = std::find_if(takes.begin(), takes.end(), [&](const auto& t) { return t.source_id == src.source_id; });
                if (it == takes.end()) continue;
                // A source cut by the budget contributes its first entries in file order.
                auto entries = pool::normalize_all(src);
                for (std::size_t i = 0; i < entries.size() && i < it->count; ++i) {
                    auto e = entries[i];
                    if (!e.entry_id) e.entry_id = src.source_id + ":" + std::to_string(i);
                    chosen.push_back(std::move(e));
                }
            }
            write_entries(out_path, chosen);
        }
        std::string summary = "select:";
        for (const auto& t : takes) summary += " " + t.source_id + "=" + std::to_string(t.count);
        emit(report, summary);
    });

    // judge ----------------------------------------------------------------
    std::optional<std::string> j_in, j_out, j_journal, j_rejects;
    std::optional<std::size_t> j_workers, j_max_prompt;
    EndpointFlags j_ep;
    auto* judge = app.add_subcommand("judge", "keep entries the judge model calls valuable");
    judge->add_option("--in", j_in)->required();
    judge->add_option("--out", j_out);
    judge->add_option("--journal", j_journal, "append-only progress file; reruns resume from it");
    judge->add_option("--rejects", j_rejects);
    judge->add_option("--workers", j_workers, "requests in flight");
    judge->add_option("--max-prompt-bytes", j_max_prompt);
    add_endpoint_flags(judge, j_ep);
    judge->callback([&] {
        auto entries = read_entries(*j_in);
        auto client = make_client(j_ep, "judge");
        auto journal = j_journal ? std::make_unique<annotate::Journal>(*j_journal) : std::make_unique<annotate::Journal>();
        annotate::AnnotateOptions opts;
        opts.max_prompt_bytes = pick<std::size_t>(j_max_prompt, "max_prompt_bytes", 0);
        std::vector<JudgeResult> results(entries.size());
        parallel_for(entries.size(), workers(j_workers), [&](std::size_t i) {
            Entry tagged = entries[i];
            tagged.entry_id = id_of(entries[i], i);
            if (auto rec = journal->find(*tagged.entry_id); rec && rec->outcome != "request_failed") {
                results[i] = rec->outcome == "valuable" ? JudgeResult::Valuable : JudgeResult::NotValuable;
                return;
            }
            results[i] = judge_stage(tagged, *client, opts);
            journal->record(*tagged.entry_id, results[i] == JudgeResult::Valuable      ? "valuable"
                               : results[i] == JudgeResult::NotValuable ? "not_valuable"
                                                                        : "request_failed");
        });
        std::vector<Entry> kept;
        std::vector<std::pair<std::string, RejectReason>> rejects;
        std::size_t not_valuable = 0;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (results[i] == JudgeResult::Valuable)
                kept.push_back(entries[i]);
            else if (results[i] == JudgeResult::NotValuable)
                ++not_valuable;
            else
                rejects.emplace_back(id_of(entries[i], i), RejectReason::RequestFailed);
        }
        write_entries(output_path(j_out, "valuable.jsonl"), kept);
        write_rejects(j_rejects, rejects);
        ojson report{{"stage", "judge"},
                     {"input", entries.size()},
                     {"valuable", kept.size()},
                     {"not_valuable", not_valuable},
                     {"request_failed", rejects.size()}};
        emit(report, "judge: " + std::to_string(kept.size()) + "/" + std::to_string(entries.size()) + " valuable");
    });

    // convert --------------------------------------------------------------
    std::optional<std::string> c_in, c_out, c_journal, c_rejects;
    std::optional<std::size_t> c_workers, c_max_prompt;
    EndpointFlags c_ep;
    auto* convert = app.add_subcommand("convert", "insert tool-call spans and validate the result");
    convert->add_option("--in", c_in)->required();
    convert->add_option("--out", c_out);
    convert->add_option("--journal", c_journal, "raw replies; reruns resume from it");
    convert->add_option("--rejects", c_rejects);
    convert->add_option("--workers", c_workers);
    convert->add_option("--max-prompt-bytes", c_max_prompt);
    add_endpoint_flags(convert, c_ep);
    convert->callback([&] {
        auto entries = read_entries(*c_in);
        auto client = make_client(c_ep, "convert");
        auto journal = c_journal ? std::make_unique<annotate::Journal>(*c_journal) : std::make_unique<annotate::Journal>();
        annotate::AnnotateOptions opts;
        opts.max_prompt_bytes = pick<std::size_t>(c_max_prompt, "max_prompt_bytes", 0);
        // Replies already in the journal are validated again rather than re-requested.
        annotate::FunctionChatClient cached([&](const annotate::ChatRequest& req) {
            if (auto rec = journal->find(req.tag); rec && rec->outcome == "reply") return rec->payload.get<std::string>();
            try {
                auto reply = client->complete(req);
                journal->record(req.tag, "reply", reply);
                return reply;
            } catch (const RequestFailed&) {
                journal->record(req.tag, "request_failed");
                throw;
            }
        });
        std::set<std::string> synthetic;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (!entries[i].entry_id) synthetic.insert(*(entries[i].entry_id = id_of(entries[i], i)));
        }
        status = run_filter("convert", entries, output_path(c_out, "converted.jsonl"), c_rejects, workers(c_workers),
                            [&](const Entry& e) {
                                auto r = convert_stage(e, cached, opts);
                                if (auto* out = std::get_if<Entry>(&r); out && synthetic.count(*e.entry_id))
                                    out->entry_id.reset();
                                return r;
                            });
    });

    // filter-trivial -------------------------------------------------------
    std::optional<std::string> ft_in, ft_out, ft_rejects;
    auto* ftriv = app.add_subcommand("filter-trivial", "drop entries whose code only assigns and prints a literal");
    ftriv->add_option("--in", ft_in)->required();
    ftriv->add_option("--out", ft_out);
    ftriv->add_option("--rejects", ft_rejects);
    ftriv->callback([&] {
        status = run_filter("filter-trivial", read_entries(*ft_in), output_path(ft_out, "nontrivial.jsonl"), ft_rejects, 1,
                            [](const Entry& e) { return trivial_stage(e); });
    });

    // exec-filter ----------------------------------------------------------
    std::optional<std::string> ex_in, ex_out, ex_rejects, ex_runner;
    std::optional<double> ex_timeout;
    std::optional<std::size_t> ex_workers;
    auto* exf = app.add_subcommand("exec-filter", "run every code span, inject results, drop entries with none");
    exf->add_option("--in", ex_in)->required();
    exf->add_option("--out", ex_out);
    exf->add_option("--rejects", ex_rejects);
    exf->add_option("--runner", ex_runner, "runner command; gets --mode exec and the code on stdin");
    exf->add_option("--timeout", ex_timeout, "seconds per span (default 30)");
    exf->add_option("--workers", ex_workers);
    exf->callback([&] {
        auto runner = make_runner(ex_runner);
        const Seconds timeout(pick<double>(ex_timeout, "timeout", 30));
        if (timeout.count() <= 0) throw ConfigError("timeout must be positive");
        status = run_filter("exec-filter", read_entries(*ex_in), output_path(ex_out, "executed.jsonl"), ex_rejects,
                            workers(ex_workers), [&](const Entry& e) { return exec_stage(e, *runner, timeout); });
    });

    // consistency-filter ---------------------------------------------------
    std::optional<std::string> cf_in, cf_out, cf_rejects;
    auto* cons = app.add_subcommand("consistency-filter", "drop entries whose results are not restated afterwards");
    cons->add_option("--in", cf_in)->required();
    cons->add_option("--out", cf_out);
    cons->add_option("--rejects", cf_rejects);
    cons->callback([&] {
        status = run_filter("consistency-filter", read_entries(*cf_in), output_path(cf_out, "consistent.jsonl"), cf_rejects, 1,
                            [](const Entry& e) { return consistency_stage(e); });
    });

    // stats ----------------------------------------------------------------
    std::optional<std::string> st_in, st_out;
    auto* stats = app.add_subcommand("stats", "per-source entry, tool-call and library counts");
    stats->add_option("--in", st_in)->required();
    stats->add_option("--out", st_out);
    stats->callback([&] {
        StatsReport rep;
        for_each_line(*st_in, [&](const std::string& line, std::size_t n) {
            try {
                rep.add(parse_entry(line));
            } catch (const Error& ex) {
                throw DataError(*st_in + ":" + std::to_string(n) + ": " + ex.what());
            }
        });
        auto j = rep.to_json();
        if (st_out) write_json(*st_out, j);
        emit(j, "stats: " + std::to_string(rep.entries()) + " entries, " + std::to_string(rep.tool_calls()) +
                    " tool calls, " + std::to_string(rep.library_usage().size()) + " libraries");
    });

    // strip-baseline -------------------------------------------------------
    std::optional<std::string> sb_in, sb_out;
    auto* strip = app.add_subcommand("strip-baseline", "remove every tool span to build the no-tool baseline");
    strip->add_option("--in", sb_in)->required();
    strip->add_option("--out", sb_out);
    strip->callback([&] {
        auto entries = read_entries(*sb_in);
        std::size_t spans = 0;
        for (auto& e : entries) {
            for (const auto& m : e.messages)
                if (m.role == Role::Assistant) spans += count_code(segment(m.content));
            e = strip_tool_spans(e);
        }
        write_entries(output_path(sb_out, "baseline.jsonl"), entries);
        emit(ojson{{"entries", entries.size()}, {"spans_removed", spans}},
             "strip-baseline: " + std::to_string(spans) + " spans removed");
    });

    // gen-randomqa ---------------------------------------------------------
    std::size_t gq_n = 1000;
    std::optional<std::uint64_t> gq_seed;
    std::optional<std::string> gq_templates, gq_out;
    auto* gen = app.add_subcommand("gen-randomqa", "generate templated QA pairs with typed gold answers");
    gen->add_option("-n,--count", gq_n, "number of pairs")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gq_seed);
    gen->add_option("--templates", gq_templates, "subset, e.g. 1,5,8-10");
    gen->add_option("--out", gq_out);
    gen->callback([&] {
        std::vector<int> subset;
        if (gq_templates) subset = parse_template_list(*gq_templates);
        auto pairs = bench::gen_randomqa(gq_n, pick<std::uint64_t>(gq_seed, "seed", 0), subset);
        auto path = output_path(gq_out, "randomqa.jsonl");
        bench::write_randomqa(path, pairs);
        emit(ojson{{"pairs", pairs.size()}, {"out", path.string()}}, "gen-randomqa: " + std::to_string(pairs.size()) + " pairs");
    });

    // emit-fact-prompts ----------------------------------------------------
    std::optional<std::string> fp_out;
    auto* fact = app.add_subcommand("emit-fact-prompts", "print the 15 factual-QA drafting prompts");
    fact->add_option("--out", fp_out, "write one prompt per line");
    fact->callback([&] {
        auto prompts = bench::emit_fact_prompts();
        if (fp_out) {
            std::ofstream out(*fp_out, std::ios::binary | std::ios::trunc);
            for (const auto& p : prompts) out << p << '\n';
            std::cerr << "emit-fact-prompts: " << prompts.size() << " prompts" << std::endl;
        } else {
            for (const auto& p : prompts) std::cout << p << '\n';
        }
    });

    // eval -----------------------------------------------------------------
    std::optional<std::string> ev_pairs, ev_fact, ev_predictions, ev_runner, ev_out;
    std::optional<std::size_t> ev_workers, ev_max_tokens;
    std::optional<double> ev_timeout;
    bool ev_gold_echo = false;
    EndpointFlags ev_ep;
    auto* eval = app.add_subcommand("eval", "score model answers against gold");
    eval->add_option("--pairs", ev_pairs, "RandomQA JSONL");
    eval->add_option("--fact", ev_fact, "factual pairs JSONL {question, answer}");
    eval->add_option("--predictions", ev_predictions, "JSONL {question, predicted}");
    eval->add_flag("--gold-echo", ev_gold_echo, "answer every question with its own gold (self-check)");
    eval->add_option("--runner", ev_runner, "run the tool loop against the endpoint with this runner");
    eval->add_option("--max-new-tokens", ev_max_tokens);
    eval->add_option("--timeout", ev_timeout);
    eval->add_option("--workers", ev_workers);
    eval->add_option("--out", ev_out);
    add_endpoint_flags(eval, ev_ep);
    eval->callback([&] {
        std::vector<bench::EvalItem> items;
        if (ev_pairs) items = bench::eval_items(bench::read_randomqa(*ev_pairs));
        if (ev_fact) {
            auto more = bench::eval_items(bench::load_fact_pairs(*ev_fact));
            items.insert(items.end(), more.begin(), more.end());
        }
        if (!ev_pairs && !ev_fact) throw ConfigError("eval needs --pairs or --fact");
        bench::Session session;
        std::map<std::string, std::string> predicted;
        std::map<std::string, std::string> gold_text;
        std::unique_ptr<annotate::ChatClient> client;
        std::unique_ptr<Executor> runner;
        runtime::GenConfig gen;
        if (ev_gold_echo) {
            for (const auto& it : items) gold_text[it.question] = bench::format_gold(it.gold);
            session = [&](const std::string& q) { return gold_text.at(q); };
        } else if (ev_predictions) {
            for_each_line(*ev_predictions, [&](const std::string& line, std::size_t n) {
                try {
                    auto j = json::parse(line);
                    predicted[j.at("question").get<std::string>()] = j.at("predicted").get<std::string>();
                } catch (const json::exception& ex) {
                    throw DataError(*ev_predictions + ":" + std::to_string(n) + ": " + ex.what());
                }
            });
            session = [&](const std::string& q) {
                auto it = predicted.find(q);
                if (it == predicted.end()) throw DataError("no prediction for question");
                return it->second;
            };
        } else {
            client = make_client(ev_ep, "model");
            gen.max_new_tokens = pick<std::size_t>(ev_max_tokens, "max_new_tokens", 512);
            gen.timeout = Seconds(pick<double>(ev_timeout, "timeout", 30));
            if (ev_runner || g_config.get<std::string>("runner")) runner = make_runner(ev_runner);
            session = [&](const std::string& q) {
                if (!runner) {
                    annotate::ChatRequest req;
                    req.messages.push_back({Role::User, q});
                    req.tag = q;
                    return client->complete(req);
                }
                runtime::ChatTokenSource src(*client, gen.temperature);
                auto r = runtime::run_inference(runtime::split_on_special(q), src, *runner, gen);
                return runtime::join(r.outputs);
            };
        }
        auto report = bench::evaluate(items, session, workers(ev_workers));
        auto j = report.to_json();
        if (ev_out) write_json(*ev_out, j);
        std::ostringstream acc;
        acc.setf(std::ios::fixed);
        acc.precision(3);
        acc << report.accuracy();
        emit(ev_out ? ojson{{"total", report.records.size()}, {"matched", report.matched()}, {"accuracy", report.accuracy()}} : j,
             "eval: accuracy " + acc.str() + " (" + std::to_string(report.matched()) + "/" +
                 std::to_string(report.records.size()) + ")");
    });

    // run-infer ------------------------------------------------------------
    std::optional<std::string> ri_prompt, ri_script, ri_runner, ri_out;
    std::optional<std::size_t> ri_max_tokens;
    std::optional<double> ri_timeout;
    EndpointFlags ri_ep;
    auto* infer = app.add_subcommand("run-infer", "generate with live tool execution");
    infer->add_option("--prompt-file", ri_prompt)->required();
    infer->add_option("--script", ri_script, "JSON list of tokens to replay instead of a model");
    infer->add_option("--runner", ri_runner);
    infer->add_option("--max-new-tokens", ri_max_tokens);
    infer->add_option("--timeout", ri_timeout);
    infer->add_option("--out", ri_out);
    add_endpoint_flags(infer, ri_ep);
    infer->callback([&] {
        std::ifstream in(*ri_prompt, std::ios::binary);
        if (!in) throw ConfigError("cannot open prompt " + *ri_prompt);
        std::string prompt_text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        auto prompt = runtime::split_on_special(prompt_text);
        if (prompt.empty()) throw DataError("prompt is empty");
        runtime::GenConfig gen;
        gen.max_new_tokens = pick<std::size_t>(ri_max_tokens, "max_new_tokens", 512);
        gen.timeout = Seconds(pick<double>(ri_timeout, "timeout", 30));
        if (gen.max_new_tokens == 0) throw ConfigError("max-new-tokens must be positive");
        auto runner = make_runner(ri_runner);
        std::unique_ptr<runtime::TokenSource> src;
        std::unique_ptr<annotate::ChatClient> client;
        if (ri_script) {
            src = std::make_unique<runtime::ScriptTokenSource>(runtime::ScriptTokenSource::from_file(*ri_script));
        } else {
            client = make_client(ri_ep, "model");
            src = std::make_unique<runtime::ChatTokenSource>(*client, gen.temperature);
        }
        auto r = runtime::run_inference(prompt, *src, *runner, gen);
        ojson j;
        j["output"] = runtime::join(r.outputs);
        j["tokens"] = r.outputs;
        j["emitted"] = r.emitted;
        j["executor_calls"] = r.executor_calls;
        j["failed_spans"] = r.failed_spans;
        j["budget_exhausted"] = r.budget_exhausted;
        j["abandoned_span"] = r.abandoned_span;
        j["stray_closes"] = r.stray_closes;
        if (ri_out) write_json(*ri_out, j);
        emit(j, "run-infer: " + std::to_string(r.emitted) + " tokens, " + std::to_string(r.executor_calls) +
                    " tool calls");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        switch (e.category()) {
            case Error::Category::Config: return kExitConfig;
            case Error::Category::Endpoint: return kExitEndpoint;
            case Error::Category::Data: return kExitData;
        }
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitData;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitData;
    }
    return status;
}
