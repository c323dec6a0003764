// Command-line front end: generate datasets, train policies, solve instances
// and run classical baselines, emitting CSV artifacts throughout.

#include <atomic>
#include <chrono>
#ifdef __GLIBC__
#include <malloc.h>
#endif
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "anycsp/baselines.hpp"
#include "anycsp/checkpoint.hpp"
#include "anycsp/instances.hpp"
#include "anycsp/search.hpp"
#include "anycsp/train.hpp"

namespace fs = std::filesystem;
using namespace anycsp;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

uint64_t mix_seed(uint64_t base, uint64_t a, uint64_t b) {
    uint64_t z = base + 0x9E3779B97F4A7C15ull * (a + 1) + 0xBF58476D1CE4E5B9ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

int jobs_from(int flag) {
    if (const char* env = std::getenv("ANYCSP_THREADS")) {
        const int j = std::atoi(env);
        if (j > 0) return j;
    }
    return std::max(1, flag);
}

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int j = 0; j < std::min(jobs, n); ++j)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) body(i);
        });
    for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------- instances

struct NamedInstance {
    std::string id;
    CspInstance csp;
    Cnf cnf;          // populated for .cnf inputs
    Graph graph;      // populated for .col inputs
    bool is_cnf = false;
    bool is_graph = false;
};

NamedInstance load_instance(const std::string& path, int colors) {
    NamedInstance out;
    out.id = fs::path(path).stem().string();
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const std::string ext = fs::path(path).extension().string();
    try {
        if (ext == ".cnf") {
            out.cnf = normalize_cnf(parse_dimacs_cnf(text), &std::cerr);
            out.csp = reduce_cnf(out.cnf);
            out.is_cnf = true;
        } else if (ext == ".col") {
            out.graph = parse_dimacs_col(text, &std::cerr);
            const int k = colors > 0 ? colors : choose_training_k(out.graph);
            out.csp = reduce_coloring(out.graph, k);
            out.is_graph = true;
        } else {
            out.csp = parse_csp_json(text);
        }
        out.csp.validate();
    } catch (const std::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    return out;
}

// ---------------------------------------------------------------- CSV output

// One row per (instance, run); `run < 0` marks the per-instance aggregate.
struct ResultRow {
    std::string instance_id;
    int run = 0;
    uint64_t seed = 0;
    double best_quality = 0.0;
    double unsat_count = 0.0;
    double steps_to_best = 0.0;
    double total_steps = 0.0;
    double wall_ms = 0.0;
    double solved = 0.0;
};

const char* kResultHeader =
    "instance_id,run,seed,best_quality,unsat_count,steps_to_best,total_steps,wall_ms,solved\n";

void write_results(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << kResultHeader;
    for (const auto& r : rows) {
        os << r.instance_id << ',';
        if (r.run < 0)
            os << "mean,,";
        else
            os << r.run << ',' << r.seed << ',';
        os << fmt(r.best_quality) << ',' << fmt(r.unsat_count) << ',' << fmt(r.steps_to_best)
           << ',' << fmt(r.total_steps) << ',' << fmt(r.wall_ms) << ',' << fmt(r.solved) << '\n';
    }
}

ResultRow aggregate(const std::string& id, const std::vector<ResultRow>& runs) {
    ResultRow agg;
    agg.instance_id = id;
    agg.run = -1;
    for (const auto& r : runs) {
        agg.best_quality += r.best_quality;
        agg.unsat_count += r.unsat_count;
        agg.steps_to_best += r.steps_to_best;
        agg.total_steps += r.total_steps;
        agg.wall_ms += r.wall_ms;
        agg.solved += r.solved;
    }
    const double n = static_cast<double>(runs.size());
    agg.best_quality /= n;
    agg.unsat_count /= n;
    agg.steps_to_best /= n;
    agg.total_steps /= n;
    agg.wall_ms /= n;
    agg.solved /= n;
    return agg;
}

void write_survival(const std::string& path, const std::vector<ResultRow>& rows) {
    std::vector<double> times;
    for (const auto& r : rows)
        if (r.run >= 0 && r.solved >= 1.0) times.push_back(r.wall_ms);
    std::sort(times.begin(), times.end());
    std::ofstream os(path);
    os << "wall_ms,solved\n";
    for (size_t i = 0; i < times.size(); ++i) os << fmt(times[i]) << ',' << (i + 1) << '\n';
}

void require_out(std::ostream& os, const std::string& what) {
    if (!os) throw std::runtime_error("cannot write " + what);
}

// ---------------------------------------------------------------- generate

struct GenOpts {
    std::string dist;
    std::string out_dir = ".";
    int count = 1;
    uint64_t seed = 0;
    int n = 30;
    int k = 3;
    double ratio_lo = 3.8, ratio_hi = 4.2;
    double alpha = 0.8, r = 1.5, p = 0.3;
    bool rb_training = false;
    std::string graph = "er";
    double er_p = 0.5;
    int ba_m = 3;
    double radius = 0.2;
    int colors = 0;  // 0 = greedy-derived
};

Graph gen_graph(const GenOpts& o, Rng& rng) {
    if (o.graph == "er") return gen_erdos_renyi(o.n, o.er_p, rng);
    if (o.graph == "ba") return gen_barabasi_albert(o.n, o.ba_m, rng);
    if (o.graph == "geo") return gen_geometric(o.n, o.radius, rng);
    throw CLI::ValidationError("--graph", "unknown graph model: " + o.graph);
}

std::string write_col(const Graph& g) {
    std::ostringstream os;
    os << "p edge " << g.n << ' ' << g.edges.size() << '\n';
    for (auto [u, v] : g.edges) os << "e " << u + 1 << ' ' << v + 1 << '\n';
    return os.str();
}

int cmd_generate(const GenOpts& o) {
    fs::create_directories(o.out_dir);
    nlohmann::ordered_json manifest;
    manifest["dist"] = o.dist;
    manifest["count"] = o.count;
    manifest["seed"] = o.seed;
    manifest["instances"] = nlohmann::ordered_json::array();
    for (int i = 0; i < o.count; ++i) {
        const uint64_t iseed = mix_seed(o.seed, 0, i);
        Rng rng(iseed);
        CspInstance inst;
        std::string native_ext, native_text;
        if (o.dist == "rb") {
            if (o.rb_training) {
                inst = gen_model_rb_training(o.n, o.k, rng);
            } else {
                RbParams rb;
                rb.k = o.k == 3 ? 2 : o.k;  // Model RB is binary unless asked otherwise
                rb.n = o.n;
                rb.alpha = o.alpha;
                rb.r = o.r;
                rb.p = o.p;
                inst = gen_model_rb(rb, rng);
            }
        } else if (o.dist == "col") {
            Graph g = gen_graph(o, rng);
            const int k = o.colors > 0 ? o.colors : choose_training_k(g);
            inst = reduce_coloring(g, k);
            native_ext = ".col";
            native_text = write_col(g);
        } else if (o.dist == "maxcut") {
            Graph g = gen_graph(o, rng);
            inst = reduce_maxcut(g);
            native_ext = ".col";
            native_text = write_col(g);
        } else if (o.dist == "3sat" || o.dist == "maxksat") {
            const int k = o.dist == "3sat" ? 3 : o.k;
            Cnf cnf = gen_uniform_ksat(o.n, k, o.ratio_lo, o.ratio_hi, rng);
            inst = reduce_cnf(cnf);
            native_ext = ".cnf";
            native_text = write_dimacs_cnf(cnf);
        } else {
            throw CLI::ValidationError("--dist", "unknown distribution: " + o.dist);
        }
        const std::string stem = o.dist + "_" + std::to_string(i);
        const std::string json_path = (fs::path(o.out_dir) / (stem + ".json")).string();
        std::ofstream js(json_path);
        js << write_csp_json(inst) << '\n';
        require_out(js, json_path);
        nlohmann::ordered_json entry;
        entry["file"] = stem + ".json";
        entry["seed"] = iseed;
        if (!native_ext.empty()) {
            const std::string np = (fs::path(o.out_dir) / (stem + native_ext)).string();
            std::ofstream ns(np);
            ns << native_text;
            require_out(ns, np);
            entry["native"] = stem + native_ext;
        }
        manifest["instances"].push_back(entry);
    }
    const std::string mpath = (fs::path(o.out_dir) / "manifest.json").string();
    std::ofstream ms(mpath);
    ms << manifest.dump(2) << '\n';
    require_out(ms, mpath);
    std::cout << "wrote " << o.count << " instance(s) to " << o.out_dir << '\n';
    return 0;
}

// ---------------------------------------------------------------- train

struct TrainOpts {
    GenOpts gen;  // reuses the distribution flags
    TrainConfig cfg;
    int d = 128;
    std::string agg = "sum";
    std::string mode = "global";
    std::string out = "policy.bin";
    std::string log;
    std::string resume;
    long long log_every = 50;
    int val_count = 20;
    bool no_timing = false;
};

SearchMode mode_from(const std::string& m) {
    if (m == "global") return SearchMode::Global;
    if (m == "local") return SearchMode::Local;
    if (m == "qual") return SearchMode::QualityReward;
    throw CLI::ValidationError("--mode", "unknown mode: " + m);
}

InstanceSampler sampler_for(const GenOpts& o) {
    if (o.dist == "rb") {
        return [o](Rng& rng) { return gen_model_rb_training(o.n, o.k, rng); };
    }
    if (o.dist == "col") {
        return [o](Rng& rng) {
            Graph g = gen_graph(o, rng);
            const int k = o.colors > 0 ? o.colors : choose_training_k(g);
            return reduce_coloring(g, k);
        };
    }
    if (o.dist == "maxcut") {
        return [o](Rng& rng) { return reduce_maxcut(gen_graph(o, rng)); };
    }
    if (o.dist == "3sat" || o.dist == "maxksat") {
        const int k = o.dist == "3sat" ? 3 : o.k;
        return [o, k](Rng& rng) {
            return reduce_cnf(gen_uniform_ksat(o.n, k, o.ratio_lo, o.ratio_hi, rng));
        };
    }
    throw CLI::ValidationError("--dist", "unknown distribution: " + o.dist);
}

long long read_meta_step(const std::string& ckpt) {
    std::ifstream in(ckpt + ".meta.json");
    if (!in) return 0;
    nlohmann::json j;
    in >> j;
    return j.value("step", 0ll);
}

void write_meta_step(const std::string& ckpt, long long step) {
    std::ofstream os(ckpt + ".meta.json");
    os << nlohmann::json{{"step", step}}.dump() << '\n';
}

int cmd_train(TrainOpts& o) {
    o.cfg.mode = mode_from(o.mode);
    PolicyParameters params;
    long long start_step = 0;
    Rng rng(o.cfg.seed);
    if (!o.resume.empty()) {
        params = load_checkpoint(o.resume);
        if (params.d != o.d || params.agg != agg_from_name(o.agg))
            throw DataError("resume checkpoint disagrees with --d/--agg");
        start_step = read_meta_step(o.resume);
        rng.seed(mix_seed(o.cfg.seed, 77, static_cast<uint64_t>(start_step)));
    } else {
        params = PolicyParameters::create(o.d, agg_from_name(o.agg));
        params.init(rng);
    }
    AdamState opt = AdamState::create(params);
    opt.step = start_step;
    const InstanceSampler sampler = sampler_for(o.gen);

    std::vector<CspInstance> val_set;
    if (o.cfg.val_every > 0) {
        Rng vrng(mix_seed(o.cfg.seed, 42, 0));
        for (int i = 0; i < o.val_count; ++i) val_set.push_back(sampler(vrng));
    }

    std::ofstream log;
    if (!o.log.empty()) {
        log.open(o.log, start_step > 0 ? std::ios::app : std::ios::out);
        require_out(log, o.log);
        if (start_step == 0) log << "step,mean_total_reward,mean_best_quality,lr,wall_ms\n";
    }

    double best_val = std::numeric_limits<double>::infinity();
    const auto t0 = std::chrono::steady_clock::now();
    for (long long step = start_step; step < o.cfg.steps; ++step) {
        const double lr = learning_rate_at(o.cfg, step);
        const TrainStepStats st = train_step(params, opt, sampler, o.cfg, lr, rng);
        if (st.skipped) std::cerr << "step " << step << ": non-finite gradient, skipped\n";
        const bool last = step + 1 == o.cfg.steps;
        if (log && (step % o.log_every == 0 || last)) {
            const double ms =
                o.no_timing
                    ? 0.0
                    : std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               t0)
                          .count();
            log << step << ',' << fmt(st.mean_total_reward) << ',' << fmt(st.mean_best_quality)
                << ',' << fmt(lr) << ',' << fmt(ms) << '\n';
            log.flush();
        }
        if (o.cfg.val_every > 0 && ((step + 1) % o.cfg.val_every == 0 || last)) {
            const double v = validate(params, val_set, o.cfg.t_val, mix_seed(o.cfg.seed, 43, 0));
            std::cout << "step " << step + 1 << " val_unsat " << fmt(v) << '\n';
            if (v < best_val) {
                best_val = v;
                save_checkpoint(o.out + ".best", params);
            }
        }
        if (last || (step + 1) % 500 == 0) {
            save_checkpoint(o.out, params);
            write_meta_step(o.out, step + 1);
        }
    }
    save_checkpoint(o.out, params);
    write_meta_step(o.out, o.cfg.steps);
    std::cout << "saved " << o.out << '\n';
    return 0;
}

// ---------------------------------------------------------------- solve

struct SolveOpts {
    std::string checkpoint;
    std::vector<std::string> files;
    std::string out = "-";
    std::string survival;
    std::string trace_dir;
    std::string mode = "global";
    int steps = 0;
    double timeout = 0.0;
    int runs = 1;
    uint64_t seed = 0;
    int jobs = 1;
    int colors = 0;
    bool no_timing = false;
};

void write_trace(const std::string& path, const EpisodeTrace& tr) {
    std::ofstream os(path);
    os << "step,quality,best_quality,reward,wall_ms\n";
    for (size_t t = 0; t < tr.qualities.size(); ++t)
        os << t + 1 << ',' << fmt(tr.qualities[t]) << ',' << fmt(tr.best_curve[t]) << ','
           << fmt(tr.rewards[t]) << ',' << fmt(tr.wall_ms[t]) << '\n';
}

int cmd_solve(const SolveOpts& o) {
    if (o.steps <= 0 && o.timeout <= 0.0)
        throw CLI::ValidationError("--steps", "need --steps and/or --timeout");
    const PolicyParameters params = load_checkpoint(o.checkpoint);
    std::vector<NamedInstance> instances;
    for (const auto& f : o.files) instances.push_back(load_instance(f, o.colors));
    if (!o.trace_dir.empty()) fs::create_directories(o.trace_dir);

    SearchConfig cfg;
    cfg.max_steps = o.steps > 0 ? o.steps : std::numeric_limits<int>::max();
    cfg.timeout_s = o.timeout;
    cfg.mode = mode_from(o.mode);

    const int total = static_cast<int>(instances.size()) * o.runs;
    std::vector<ResultRow> flat(total);
    std::mutex trace_mutex;
    parallel_for(total, jobs_from(o.jobs), [&](int idx) {
        const int ii = idx / o.runs;
        const int run = idx % o.runs;
        const NamedInstance& ni = instances[ii];
        const uint64_t rseed = mix_seed(o.seed, ii, run);
        Rng rng(rseed);
        CvGraph g = build_graph(ni.csp);
        const EpisodeTrace tr = rollout(params, ni.csp, g, cfg, rng);
        ResultRow row;
        row.instance_id = ni.id;
        row.run = run;
        row.seed = rseed;
        row.best_quality = tr.best_quality;
        row.unsat_count = (1.0 - tr.best_quality) * ni.csp.num_constraints();
        row.steps_to_best = tr.steps_to_best;
        row.total_steps = tr.steps;
        row.wall_ms = o.no_timing ? 0.0
                                  : (tr.wall_ms.empty() ? 0.0 : tr.wall_ms.back());
        row.solved = tr.solved ? 1.0 : 0.0;
        flat[idx] = std::move(row);
        if (!o.trace_dir.empty()) {
            std::lock_guard<std::mutex> lock(trace_mutex);
            write_trace(
                (fs::path(o.trace_dir) / (ni.id + "_run" + std::to_string(run) + ".csv")).string(),
                tr);
        }
    });

    std::vector<ResultRow> rows;
    for (size_t ii = 0; ii < instances.size(); ++ii) {
        std::vector<ResultRow> per(flat.begin() + ii * o.runs, flat.begin() + (ii + 1) * o.runs);
        rows.insert(rows.end(), per.begin(), per.end());
        rows.push_back(aggregate(instances[ii].id, per));
    }
    if (o.out == "-") {
        write_results(std::cout, rows);
    } else {
        std::ofstream os(o.out);
        require_out(os, o.out);
        write_results(os, rows);
    }
    if (!o.survival.empty()) write_survival(o.survival, rows);
    return 0;
}

// ---------------------------------------------------------------- baseline

struct BaselineOpts {
    std::string name;
    std::vector<std::string> files;
    std::string out = "-";
    std::string survival;
    long long flips = 10000;
    int restarts = 10;
    double noise = 0.5;
    int steps = 1000;
    int runs = 1;
    uint64_t seed = 0;
    int jobs = 1;
    int colors = 0;
    bool no_timing = false;
};

ResultRow run_baseline(const BaselineOpts& o, const NamedInstance& ni, int ii, int run) {
    const uint64_t rseed = mix_seed(o.seed, ii, run);
    Rng rng(rseed);
    ResultRow row;
    row.instance_id = ni.id;
    row.run = run;
    row.seed = rseed;
    const auto t0 = std::chrono::steady_clock::now();
    if (o.name == "walksat" || o.name == "maxwalksat") {
        if (!ni.is_cnf) throw DataError(ni.id + ": " + o.name + " needs a .cnf instance");
        const double m = static_cast<double>(ni.cnf.clauses.size());
        int best_unsat = static_cast<int>(m);
        long long flips = 0;
        for (int r = 0; r < o.restarts; ++r) {
            const WalksatResult res = o.name == "walksat"
                                          ? walksat(ni.cnf, o.flips, o.noise, rng)
                                          : max_walksat(ni.cnf, o.flips, o.noise, rng);
            flips += res.flips;
            if (res.best_unsat < best_unsat) {
                best_unsat = res.best_unsat;
                row.steps_to_best = static_cast<double>(flips);
            }
            if (res.satisfied) break;
        }
        row.unsat_count = best_unsat;
        row.best_quality = m > 0 ? 1.0 - best_unsat / m : 1.0;
        row.total_steps = static_cast<double>(flips);
        row.solved = best_unsat == 0 ? 1.0 : 0.0;
    } else if (o.name == "greedy-col" || o.name == "dsatur") {
        if (!ni.is_graph) throw DataError(ni.id + ": " + o.name + " needs a .col instance");
        const ColoringResult res =
            o.name == "dsatur" ? dsatur(ni.graph) : greedy_coloring(ni.graph);
        row.unsat_count = coloring_conflicts(ni.graph, res.colors);
        row.best_quality = ni.graph.edges.empty()
                               ? 1.0
                               : 1.0 - row.unsat_count / static_cast<double>(ni.graph.edges.size());
        row.solved = row.unsat_count == 0 ? 1.0 : 0.0;
        if (run == 0) std::cerr << ni.id << ": colors=" << res.num_colors << '\n';
    } else if (o.name == "greedy-cut") {
        if (!ni.is_graph) throw DataError(ni.id + ": greedy-cut needs a .col instance");
        const CutResult res = greedy_maxcut(ni.graph);
        const double m = static_cast<double>(ni.graph.edges.size());
        row.best_quality = m > 0 ? res.cut / m : 1.0;
        row.unsat_count = m - res.cut;
        row.solved = res.cut == static_cast<int>(m) ? 1.0 : 0.0;
    } else if (o.name == "random") {
        const RandomSearchResult res = random_search(ni.csp, o.steps, rng);
        row.best_quality = res.best_quality;
        row.unsat_count = (1.0 - res.best_quality) * ni.csp.num_constraints();
        row.total_steps = static_cast<double>(res.best_curve.size());
        for (size_t t = 0; t < res.best_curve.size(); ++t)
            if (res.best_curve[t] == res.best_quality) {
                row.steps_to_best = static_cast<double>(t + 1);
                break;
            }
        row.solved = res.best_quality >= 1.0 ? 1.0 : 0.0;
    } else {
        throw CLI::ValidationError("name", "unknown baseline: " + o.name);
    }
    row.wall_ms = o.no_timing
                      ? 0.0
                      : std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                                  t0)
                            .count();
    return row;
}

int cmd_baseline(const BaselineOpts& o) {
    std::vector<NamedInstance> instances;
    for (const auto& f : o.files) instances.push_back(load_instance(f, o.colors));
    const int total = static_cast<int>(instances.size()) * o.runs;
    std::vector<ResultRow> flat(total);
    std::exception_ptr err;
    std::mutex err_mutex;
    parallel_for(total, jobs_from(o.jobs), [&](int idx) {
        try {
            flat[idx] = run_baseline(o, instances[idx / o.runs], idx / o.runs, idx % o.runs);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!err) err = std::current_exception();
        }
    });
    if (err) std::rethrow_exception(err);
    std::vector<ResultRow> rows;
    for (size_t ii = 0; ii < instances.size(); ++ii) {
        std::vector<ResultRow> per(flat.begin() + ii * o.runs, flat.begin() + (ii + 1) * o.runs);
        rows.insert(rows.end(), per.begin(), per.end());
        rows.push_back(aggregate(instances[ii].id, per));
    }
    if (o.out == "-") {
        write_results(std::cout, rows);
    } else {
        std::ofstream os(o.out);
        require_out(os, o.out);
        write_results(os, rows);
    }
    if (!o.survival.empty()) write_survival(o.survival, rows);
    return 0;
}

void add_graph_flags(CLI::App* cmd, GenOpts& o) {
    cmd->add_option("--graph", o.graph, "graph model: er, ba, geo")->capture_default_str();
    cmd->add_option("--p", o.er_p, "edge probability (er)")->capture_default_str();
    cmd->add_option("--m", o.ba_m, "edges per new vertex (ba)")->capture_default_str();
    cmd->add_option("--radius", o.radius, "connection radius (geo)")->capture_default_str();
    cmd->add_option("--colors", o.colors, "color count, 0 = greedy minus one");
}

}  // namespace

int main(int argc, char** argv) {
#ifdef __GLIBC__
    // Keep freed rollout buffers cached in the allocator instead of
    // returning them to the kernel; the training loop reallocates
    // similar sizes every step and the mmap round trips dominate sys time.
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
    CLI::App app{"stochastic constraint solver driven by a learned policy"};
    app.require_subcommand(1);

    GenOpts gen;
    auto* cg = app.add_subcommand("generate", "write seeded instance files plus a manifest");
    cg->add_option("--dist", gen.dist, "rb, col, maxcut, 3sat, maxksat")->required();
    cg->add_option("--out", gen.out_dir, "output directory")->capture_default_str();
    cg->add_option("--count", gen.count, "number of instances")->capture_default_str();
    cg->add_option("--seed", gen.seed, "base seed")->capture_default_str();
    cg->add_option("--n", gen.n, "variables / vertices")->capture_default_str();
    cg->add_option("--k", gen.k, "clause width or constraint arity")->capture_default_str();
    cg->add_option("--ratio-lo", gen.ratio_lo, "clause ratio lower bound")->capture_default_str();
    cg->add_option("--ratio-hi", gen.ratio_hi, "clause ratio upper bound")->capture_default_str();
    cg->add_option("--alpha", gen.alpha, "Model RB domain exponent")->capture_default_str();
    cg->add_option("--r", gen.r, "Model RB constraint density")->capture_default_str();
    cg->add_option("--tightness", gen.p, "Model RB forbidden fraction")->capture_default_str();
    cg->add_flag("--rb-training", gen.rb_training, "sample the Model RB training distribution");
    add_graph_flags(cg, gen);

    TrainOpts to;
    auto* ct = app.add_subcommand("train", "train a policy with REINFORCE");
    ct->add_option("--dist", to.gen.dist, "rb, col, maxcut, 3sat, maxksat")->required();
    ct->add_option("--steps", to.cfg.steps, "training steps")->capture_default_str();
    ct->add_option("--batch", to.cfg.batch, "instances per step")->capture_default_str();
    ct->add_option("--T", to.cfg.t_train, "rollout length during training")->capture_default_str();
    ct->add_option("--d", to.d, "hidden width")->capture_default_str();
    ct->add_option("--agg", to.agg, "aggregation: sum, mean, max")->capture_default_str();
    ct->add_option("--mode", to.mode, "global, local, qual")->capture_default_str();
    ct->add_option("--discount", to.cfg.discount, "reward discount")->capture_default_str();
    ct->add_option("--lr-start", to.cfg.lr_start, "initial learning rate")->capture_default_str();
    ct->add_option("--lr-end", to.cfg.lr_end, "final learning rate")->capture_default_str();
    ct->add_flag("--clip", to.cfg.clip, "clip gradients at global norm 10");
    ct->add_option("--seed", to.cfg.seed, "seed")->capture_default_str();
    ct->add_option("--out", to.out, "checkpoint path")->capture_default_str();
    ct->add_option("--log", to.log, "training CSV path");
    ct->add_option("--log-every", to.log_every, "log period in steps")->capture_default_str();
    ct->add_flag("--no-timing", to.no_timing, "report wall_ms as 0 for reproducible CSVs");
    ct->add_option("--val-every", to.cfg.val_every, "validation period, 0 = off")
        ->capture_default_str();
    ct->add_option("--val-count", to.val_count, "validation set size")->capture_default_str();
    ct->add_option("--t-val", to.cfg.t_val, "validation rollout length")->capture_default_str();
    ct->add_option("--resume", to.resume, "checkpoint to continue from");
    ct->add_option("--n", to.gen.n, "variables / vertices")->capture_default_str();
    ct->add_option("--k", to.gen.k, "clause width or arity")->capture_default_str();
    ct->add_option("--ratio-lo", to.gen.ratio_lo)->capture_default_str();
    ct->add_option("--ratio-hi", to.gen.ratio_hi)->capture_default_str();
    add_graph_flags(ct, to.gen);

    SolveOpts so;
    auto* cs = app.add_subcommand("solve", "run a trained policy on instance files");
    cs->add_option("--checkpoint", so.checkpoint, "policy checkpoint")->required();
    cs->add_option("files", so.files, "instance files (.json, .cnf, .col)")->required();
    cs->add_option("--steps", so.steps, "step budget per run");
    cs->add_option("--timeout", so.timeout, "timeout in seconds per run");
    cs->add_option("--runs", so.runs, "independent seeded runs per instance")
        ->capture_default_str();
    cs->add_option("--seed", so.seed, "base seed")->capture_default_str();
    cs->add_option("--mode", so.mode, "global, local, qual")->capture_default_str();
    cs->add_option("--out", so.out, "results CSV, - for stdout")->capture_default_str();
    cs->add_option("--survival", so.survival, "survival-curve CSV path");
    cs->add_option("--trace-dir", so.trace_dir, "write per-run trace CSVs here");
    cs->add_option("--jobs", so.jobs, "worker threads")->capture_default_str();
    cs->add_option("--colors", so.colors, "colors for .col inputs, 0 = greedy minus one");
    cs->add_flag("--no-timing", so.no_timing, "report wall_ms as 0 for reproducible CSVs");

    BaselineOpts bo;
    auto* cb = app.add_subcommand("baseline", "run a classical baseline");
    cb->add_option("name", bo.name, "walksat, maxwalksat, greedy-col, dsatur, greedy-cut, random")
        ->required();
    cb->add_option("files", bo.files, "instance files")->required();
    cb->add_option("--flips", bo.flips, "flips per restart")->capture_default_str();
    cb->add_option("--restarts", bo.restarts, "restarts")->capture_default_str();
    cb->add_option("--noise", bo.noise, "walk probability")->capture_default_str();
    cb->add_option("--steps", bo.steps, "samples for random search")->capture_default_str();
    cb->add_option("--runs", bo.runs, "independent runs per instance")->capture_default_str();
    cb->add_option("--seed", bo.seed, "base seed")->capture_default_str();
    cb->add_option("--out", bo.out, "results CSV, - for stdout")->capture_default_str();
    cb->add_option("--survival", bo.survival, "survival-curve CSV path");
    cb->add_option("--jobs", bo.jobs, "worker threads")->capture_default_str();
    cb->add_option("--colors", bo.colors, "colors for .col inputs");
    cb->add_flag("--no-timing", bo.no_timing, "report wall_ms as 0 for reproducible CSVs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }
    try {
        if (cg->parsed()) return cmd_generate(gen);
        if (ct->parsed()) return cmd_train(to);
        if (cs->parsed()) return cmd_solve(so);
        if (cb->parsed()) return cmd_baseline(bo);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
