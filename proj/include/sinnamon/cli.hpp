// Copyright 2026-present the sinnamon project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sinnamon/analysis/inner_product_error.hpp"
#include "sinnamon/analysis/profile.hpp"
#include "sinnamon/analysis/simulation.hpp"
#include "sinnamon/analysis/sketch_error.hpp"
#include "sinnamon/analysis/value_dist.hpp"
#include "sinnamon/bench.hpp"
#include "sinnamon/datagen.hpp"
#include "sinnamon/error.hpp"
#include "sinnamon/eval.hpp"
#include "sinnamon/index_io.hpp"
#include "sinnamon/storage.hpp"
#include "sinnamon/trec.hpp"

namespace sinnamon::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kInputFormat = 3,
    kIo = 4,
    kState = 5,
    kNumeric = 6,
    kIndexFormat = 7,
};

inline const char* exit_code_name(int code) {
    switch (code) {
        case kOk: return "ok";
        case kUsage: return "usage";
        case kInputFormat: return "input-format";
        case kIo: return "io";
        case kState: return "state";
        case kNumeric: return "numeric";
        case kIndexFormat: return "index-format";
        default: return "internal";
    }
}

/// A flag combination that cannot be honoured.
class UsageError : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

namespace detail {

/// Output stream that is either the caller's stream (path "-") or a file.
class Output {
  public:
    Output(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
        if (!*file_) {
            throw IoError("cannot open '" + path + "' for writing");
        }
        stream_ = file_.get();
    }
    std::ostream& operator*() { return *stream_; }
    void close() {
        stream_->flush();
        if (!*stream_) {
            throw IoError("write failed");
        }
    }

  private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

inline void reject_if(bool bad, const std::string& message) {
    if (bad) {
        throw UsageError(message);
    }
}

inline bool given(const CLI::Option* opt) { return opt->count() > 0; }

inline std::vector<std::string> format_names() { return {"text", "binary"}; }

/// Engine flags shared by `index` and `bench-insert`.
struct EngineFlags {
    std::string engine;
    std::uint32_t dims = 0;
    std::uint32_t m = 0;
    std::uint32_t h = 1;
    std::uint64_t seed = 0;
    CLI::Option* m_opt = nullptr;
    CLI::Option* h_opt = nullptr;
    CLI::Option* seed_opt = nullptr;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--engine", engine, "linscan | linscan-compressed | sinnamon | sinnamon-plus")
            ->required()
            ->check(CLI::IsMember({"linscan", "linscan-compressed", "sinnamon", "sinnamon-plus"}));
        cmd->add_option("--dims", dims, "dimensionality n")->required()->check(CLI::PositiveNumber);
        m_opt = cmd->add_option("--m", m, "sketch rows per half (sinnamon only)")->check(CLI::PositiveNumber);
        h_opt = cmd->add_option("--h", h, "number of random mappings (sinnamon only)")->check(CLI::PositiveNumber);
        seed_opt = cmd->add_option("--seed", seed, "mapping seed (sinnamon only)");
    }

    EngineKind kind() const { return parse_engine_kind(engine); }

    EngineConfig config() const {
        EngineKind k = kind();
        if (is_sketch_engine(k)) {
            reject_if(!given(m_opt), "--engine " + engine + " requires --m");
        } else {
            reject_if(given(m_opt) || given(h_opt) || given(seed_opt),
                      "--m, --h and --seed apply only to sinnamon engines");
        }
        EngineConfig c;
        c.dims = dims;
        c.rows = m;
        c.mappings = h;
        c.seed = seed;
        c.nonneg = k == EngineKind::SinnamonPlus;
        return c;
    }
};

inline EngineKind peek_engine_kind(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::array<char, 8> magic{};
    std::uint32_t version = 0;
    std::uint32_t kind = 0;
    if (!in.read(magic.data(), magic.size()) || magic != sinnamon::detail::kIndexMagic ||
        !sinnamon::detail::get_le(in, version) || !sinnamon::detail::get_le(in, kind)) {
        throw IndexFormatError("not an index file");
    }
    if (version != sinnamon::detail::kIndexVersion) {
        throw IndexFormatError("index version " + std::to_string(version) + " not supported");
    }
    if (kind > static_cast<std::uint32_t>(EngineKind::SinnamonPlus)) {
        throw IndexFormatError("unknown engine kind " + std::to_string(kind));
    }
    return static_cast<EngineKind>(kind);
}

inline std::string tsv_number(double v) { return format_double(v); }

}  // namespace detail

/// Runs the command line; returns the process exit code. Normal output goes
/// to `out`; errors are reported on `err` as `error: <code-name>: <message>`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    using detail::given;
    using detail::reject_if;

    CLI::App app{"Sparse maximum inner product search: exact and sketch-based engines"};
    app.name("sinnamon");
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);

    // gen
    GenSpec gen;
    std::string gen_dist = "gaussian:0,1";
    std::string gen_out;
    std::string gen_format = "binary";
    std::uint32_t gen_threads = 1;
    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic collection");
    gen_cmd->add_option("--count", gen.count, "number of vectors")->required();
    gen_cmd->add_option("--dims", gen.dims, "dimensionality n")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--psi", gen.psi, "mean active coordinates per vector")->required();
    gen_cmd->add_option("--dist", gen_dist, "gaussian:mu,sigma | uniform:a,b")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
    gen_cmd->add_option("--first-id", gen.first_id, "external id of the first vector")->capture_default_str();
    gen_cmd->add_option("--out", gen_out, "output file")->required();
    gen_cmd->add_option("--format", gen_format, "text | binary")
        ->check(CLI::IsMember(detail::format_names()))
        ->capture_default_str();
    gen_cmd->add_option("--threads", gen_threads, "generator threads")->check(CLI::PositiveNumber);

    // index
    detail::EngineFlags index_flags;
    std::string index_input;
    std::string index_format = "binary";
    std::string index_out;
    auto* index_cmd = app.add_subcommand("index", "build an index and vector store from a vector file");
    index_cmd->add_option("--input", index_input, "vector file")->required();
    index_cmd->add_option("--format", index_format, "text | binary")
        ->check(CLI::IsMember(detail::format_names()))
        ->capture_default_str();
    index_flags.add_to(index_cmd);
    index_cmd->add_option("--out", index_out, "index file")->required();

    // query
    std::string query_index;
    std::string query_file;
    std::string query_format = "binary";
    std::string query_out = "-";
    std::string query_tag;
    QueryParams params;
    double budget_ms = 0.0;
    auto* query_cmd = app.add_subcommand("query", "run queries and write a TREC run");
    query_cmd->add_option("--index", query_index, "index file")->required();
    query_cmd->add_option("--queries", query_file, "query vector file")->required();
    query_cmd->add_option("--format", query_format, "text | binary")
        ->check(CLI::IsMember(detail::format_names()))
        ->capture_default_str();
    query_cmd->add_option("--k", params.k, "hits per query")->check(CLI::PositiveNumber)->capture_default_str();
    auto* kprime_opt = query_cmd->add_option("--kprime", params.k_prime, "re-rank pool size")
                           ->check(CLI::PositiveNumber)
                           ->capture_default_str();
    auto* budget_opt =
        query_cmd->add_option("--budget-ms", budget_ms, "scoring time budget in ms (omit for infinite)")
            ->check(CLI::NonNegativeNumber);
    query_cmd->add_option("--threads", params.threads, "worker threads")->check(CLI::PositiveNumber);
    query_cmd->add_option("--out", query_out, "run file ('-' for stdout)");
    query_cmd->add_option("--tag", query_tag, "run tag (default: engine name)");

    // bench-insert
    detail::EngineFlags bi_flags;
    std::string bi_input;
    std::string bi_format = "binary";
    std::string bi_out = "-";
    std::size_t bi_bucket = 1000;
    std::size_t bi_trials = 1;
    auto* bi_cmd = app.add_subcommand("bench-insert", "measure insertion throughput against index size");
    bi_cmd->add_option("--input", bi_input, "vector file")->required();
    bi_cmd->add_option("--format", bi_format, "text | binary")
        ->check(CLI::IsMember(detail::format_names()))
        ->capture_default_str();
    bi_flags.add_to(bi_cmd);
    bi_cmd->add_option("--bucket", bi_bucket, "vectors per sample")->check(CLI::PositiveNumber);
    bi_cmd->add_option("--trials", bi_trials, "repeated runs averaged per sample")->check(CLI::PositiveNumber);
    bi_cmd->add_option("--out", bi_out, "TSV output ('-' for stdout)");

    // bench-delete
    std::string bd_index;
    std::size_t bd_count = 0;
    std::uint64_t bd_seed = 0;
    std::string bd_out = "-";
    auto* bd_cmd = app.add_subcommand("bench-delete", "measure per-deletion latency on a loaded index");
    bd_cmd->add_option("--index", bd_index, "index file")->required();
    bd_cmd->add_option("--count", bd_count, "number of random live ids to delete")->required();
    bd_cmd->add_option("--seed", bd_seed, "seed for choosing ids");
    bd_cmd->add_option("--out", bd_out, "TSV output ('-' for stdout)");

    // analyze
    std::string an_formula;
    std::string an_dist = "gaussian:0,1";
    double an_np = 120.0;
    std::vector<double> an_m{60, 120, 240};
    std::vector<std::uint32_t> an_h{1};
    std::vector<double> an_delta{0.1};
    double an_epsilon = 0.1;
    double an_sigma = 1.0;
    std::uint64_t an_trials = 100000;
    std::uint32_t an_workers = 1;
    std::uint64_t an_seed = 0;
    std::uint32_t an_psi_q = 16;
    std::string an_index;
    std::string an_queries;
    std::string an_qformat = "binary";
    double an_tolerance = 0.03;
    std::string an_out = "-";
    auto* an_cmd = app.add_subcommand("analyze", "evaluate error formulas, simulations and empirical profiles");
    an_cmd
        ->add_option("--formula", an_formula,
                     "prob | prob-gaussian | cdf | cdf-gaussian | expected | moments | min-rows | sketch-sim | "
                     "z-sim | profile")
        ->required()
        ->check(CLI::IsMember({"prob", "prob-gaussian", "cdf", "cdf-gaussian", "expected", "moments", "min-rows",
                               "sketch-sim", "z-sim", "profile"}));
    auto* dist_opt = an_cmd->add_option("--dist", an_dist, "gaussian:mu,sigma | uniform:a,b");
    auto* np_opt = an_cmd->add_option("--np", an_np, "expected count of other active coordinates");
    auto* m_opt = an_cmd->add_option("--m", an_m, "sketch rows per half (list)");
    auto* h_opt = an_cmd->add_option("--h", an_h, "number of mappings (list)");
    auto* delta_opt = an_cmd->add_option("--delta", an_delta, "error threshold (list)");
    auto* eps_opt = an_cmd->add_option("--epsilon", an_epsilon, "target error probability");
    auto* sigma_opt = an_cmd->add_option("--sigma", an_sigma, "Gaussian deviation for closed forms");
    auto* trials_opt = an_cmd->add_option("--trials", an_trials, "Monte-Carlo trials");
    auto* workers_opt = an_cmd->add_option("--workers", an_workers, "Monte-Carlo workers")->check(CLI::PositiveNumber);
    auto* aseed_opt = an_cmd->add_option("--seed", an_seed, "Monte-Carlo seed");
    auto* psiq_opt = an_cmd->add_option("--psi-q", an_psi_q, "query active coordinates for z-sim");
    auto* aindex_opt = an_cmd->add_option("--index", an_index, "sinnamon index file for profile");
    auto* aqueries_opt = an_cmd->add_option("--queries", an_queries, "query vectors for profile");
    auto* aqformat_opt = an_cmd->add_option("--format", an_qformat, "query file format")
                             ->check(CLI::IsMember(detail::format_names()));
    auto* tol_opt = an_cmd->add_option("--tolerance", an_tolerance, "profile agreement tolerance");
    an_cmd->add_option("--out", an_out, "TSV output ('-' for stdout)");

    // eval
    std::string ev_metric;
    std::string ev_run;
    std::string ev_exact;
    std::string ev_qrels;
    std::size_t ev_k = 10;
    std::size_t ev_cutoff = 0;
    std::string ev_out = "-";
    auto* ev_cmd = app.add_subcommand("eval", "recall against an exact run, or MRR / NDCG against qrels");
    ev_cmd->add_option("--metric", ev_metric, "recall | mrr | ndcg")
        ->required()
        ->check(CLI::IsMember({"recall", "mrr", "ndcg"}));
    ev_cmd->add_option("--run", ev_run, "run file")->required();
    auto* exact_opt = ev_cmd->add_option("--exact", ev_exact, "exact run (recall)");
    auto* qrels_opt = ev_cmd->add_option("--qrels", ev_qrels, "qrels (mrr, ndcg)");
    auto* k_opt = ev_cmd->add_option("--k", ev_k, "recall cutoff")->check(CLI::PositiveNumber);
    auto* cutoff_opt = ev_cmd->add_option("--cutoff", ev_cutoff, "rank cutoff (mrr 10, ndcg 1000)")
                           ->check(CLI::PositiveNumber);
    ev_cmd->add_option("--out", ev_out, "report output ('-' for stdout)");

    auto fail = [&](int code, const std::string& message) {
        err << "error: " << exit_code_name(code) << ": " << message << '\n';
        return code;
    };

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kOk;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return kOk;
        } catch (const CLI::ParseError& e) {
            return fail(kUsage, e.what());
        }

        if (gen_cmd->parsed()) {
            gen.dist = analysis::ValueDist::parse(gen_dist);
            gen.validate();
            auto vectors = generate(gen, gen_threads);
            write_vectors(gen_out, parse_vector_format(gen_format), vectors);
            return kOk;
        }

        if (index_cmd->parsed()) {
            EngineConfig config = index_flags.config();
            auto collection = make_collection(index_flags.kind(), config);
            auto vectors = read_vectors(index_input, parse_vector_format(index_format));
            std::visit(
                [&](auto& col) {
                    for (const auto& v : vectors) {
                        col.insert(v);
                    }
                },
                collection);
            save_collection(index_out, collection);
            return kOk;
        }

        if (query_cmd->parsed()) {
            EngineKind kind = detail::peek_engine_kind(query_index);
            bool sketch = is_sketch_engine(kind);
            reject_if(!sketch && given(kprime_opt) && !given(budget_opt),
                      "--kprime applies to linscan only together with --budget-ms");
            if (given(budget_opt)) {
                params.budget = Budget::millis(budget_ms);
            }
            if (!given(kprime_opt)) {
                params.k_prime = std::max(params.k_prime, params.k);
            }
            reject_if(params.k_prime < params.k, "--kprime must be >= --k");
            params.validate();
            auto collection = load_collection(query_index);
            auto queries = read_vectors(query_file, parse_vector_format(query_format));
            std::string tag = query_tag.empty() ? std::string(engine_name(kind)) : query_tag;
            detail::Output o(query_out, out);
            std::visit(
                [&](auto& col) {
                    for (const auto& q : queries) {
                        write_run_entries(*o, std::to_string(q.id), col.search(q, params), tag);
                    }
                },
                collection);
            o.close();
            return kOk;
        }

        if (bi_cmd->parsed()) {
            EngineConfig config = bi_flags.config();
            EngineKind kind = bi_flags.kind();
            auto vectors = read_vectors(bi_input, parse_vector_format(bi_format));
            detail::Output o(bi_out, out);
            auto run = [&](auto make) {
                auto report = bench_insert(make, vectors, bi_bucket, bi_trials);
                write_insert_tsv(*o, report);
                for (const auto& [name, value] : report.work) {
                    err << "# " << name << '\t' << value << '\n';
                }
            };
            switch (kind) {
                case EngineKind::LinScan:
                    run([&] { return Collection<RawLinScan>(RawLinScan(config.dims)); });
                    break;
                case EngineKind::LinScanCompressed:
                    run([&] { return Collection<CompressedLinScan>(CompressedLinScan(config.dims)); });
                    break;
                case EngineKind::Sinnamon:
                case EngineKind::SinnamonPlus:
                    run([&] { return Collection<SinnamonIndex>(SinnamonIndex(config)); });
                    break;
            }
            o.close();
            return kOk;
        }

        if (bd_cmd->parsed()) {
            auto collection = load_collection(bd_index);
            detail::Output o(bd_out, out);
            std::visit(
                [&](auto& col) {
                    auto snapshot = col.store().snapshot();
                    reject_if(bd_count > snapshot.size(), "--count exceeds the number of live vectors");
                    std::vector<ExternalId> ids;
                    ids.reserve(snapshot.size());
                    for (const auto& v : snapshot) {
                        ids.push_back(v.id);
                    }
                    std::mt19937_64 rng(bd_seed);
                    std::shuffle(ids.begin(), ids.end(), rng);
                    ids.resize(bd_count);
                    auto report = bench_delete(col, ids);
                    write_delete_tsv(*o, report);
                    for (const auto& [name, value] : report.work) {
                        err << "# " << name << '\t' << value << '\n';
                    }
                },
                collection);
            o.close();
            return kOk;
        }

        if (an_cmd->parsed()) {
            using namespace analysis;
            const std::string& f = an_formula;
            bool gaussian_closed = f == "prob-gaussian" || f == "cdf-gaussian" || f == "min-rows";
            bool simulated = f == "sketch-sim" || f == "z-sim";
            reject_if(given(dist_opt) && gaussian_closed, "--dist does not apply to --formula " + f);
            reject_if(given(sigma_opt) && f != "cdf-gaussian" && f != "min-rows",
                      "--sigma applies only to cdf-gaussian and min-rows");
            reject_if(given(eps_opt) && f != "min-rows", "--epsilon applies only to min-rows");
            reject_if(given(delta_opt) && f != "cdf" && f != "cdf-gaussian" && f != "min-rows" &&
                          f != "sketch-sim" && f != "profile",
                      "--delta does not apply to --formula " + f);
            reject_if((given(trials_opt) || given(workers_opt) || given(aseed_opt)) && !simulated,
                      "--trials, --workers and --seed apply only to simulations");
            reject_if(given(psiq_opt) && f != "z-sim", "--psi-q applies only to z-sim");
            reject_if((given(aindex_opt) || given(aqueries_opt) || given(aqformat_opt) || given(tol_opt)) &&
                          f != "profile",
                      "--index, --queries, --format and --tolerance apply only to profile");
            reject_if(f == "profile" && !given(aindex_opt), "--formula profile requires --index");
            reject_if(f == "profile" && (given(np_opt) || given(m_opt) || given(h_opt)),
                      "--np, --m and --h are read from the index for profile");
            reject_if(f == "min-rows" && given(m_opt), "--m is the output of min-rows");

            detail::Output o(an_out, out);
            std::ostream& os = *o;
            auto num = detail::tsv_number;
            // Evaluates a quadrature-backed value; on non-convergence reports
            // the best estimate with the tolerance flag cleared.
            auto guarded = [](auto&& fn) -> std::pair<double, int> {
                try {
                    return {fn(), 1};
                } catch (const QuadratureError& e) {
                    return {e.estimate(), 0};
                }
            };

            if (f == "profile") {
                auto collection = load_collection(an_index);
                auto* col = std::get_if<Collection<SinnamonIndex>>(&collection);
                reject_if(col == nullptr, "--formula profile needs a sinnamon index");
                std::vector<SparseVector> queries;
                if (given(aqueries_opt)) {
                    queries = read_vectors(an_queries, parse_vector_format(an_qformat));
                }
                auto dist = ValueDist::parse(an_dist);
                auto profile = empirical_error_profile(col->engine(), col->store(), queries);
                const auto& c = col->engine().config();
                SketchParams sp{static_cast<double>(c.rows), c.mappings, std::max(profile.mean_nnz, 1e-9)};
                os << "quantity\tdelta\tempirical\ttheory\tok\n";
                for (double d : an_delta) {
                    double emp = profile.upper.cdf(d);
                    auto [theory, conv] = guarded([&] { return error_cdf(dist, sp, d); });
                    int ok = conv && std::fabs(emp - theory) <= an_tolerance ? 1 : 0;
                    os << "cdf\t" << num(d) << '\t' << num(emp) << '\t' << num(theory) << '\t' << ok << '\n';
                }
                auto [pt, pconv] = guarded([&] { return prob_overestimate(dist, sp); });
                double pe = profile.upper.prob_positive();
                os << "prob_overestimate\t0\t" << num(pe) << '\t' << num(pt) << '\t'
                   << (pconv && std::fabs(pe - pt) <= an_tolerance ? 1 : 0) << '\n';
                auto [et, econv] = guarded([&] { return expected_error(dist, sp); });
                double ee = profile.upper.mean();
                os << "expected_error\t-\t" << num(ee) << '\t' << num(et) << '\t'
                   << (econv && std::fabs(ee - et) <= an_tolerance ? 1 : 0) << '\n';
                if (!profile.inner_product.empty()) {
                    os << "inner_product_error_mean\t-\t" << num(profile.inner_product.mean()) << "\t-\t1\n";
                    os << "inner_product_error_min\t-\t" << num(profile.inner_product.sorted().front())
                       << "\t-\t" << (profile.inner_product.sorted().front() >= 0.0 ? 1 : 0) << '\n';
                }
                o.close();
                return kOk;
            }

            if (f == "min-rows") {
                os << "sigma\tdelta\tepsilon\th\tnp\tvalue\tok\n";
                for (auto h : an_h) {
                    for (double d : an_delta) {
                        auto m = min_sketch_rows(an_sigma, d, an_epsilon, h, an_np);
                        os << num(an_sigma) << '\t' << num(d) << '\t' << num(an_epsilon) << '\t' << h << '\t'
                           << num(an_np) << '\t' << m << "\t1\n";
                    }
                }
                o.close();
                return kOk;
            }

            auto dist = ValueDist::parse(an_dist);
            SimulationConfig sim{an_trials, an_workers, an_seed};
            if (f == "prob" || f == "expected" || f == "moments") {
                os << (f == "moments" ? "dist\tm\th\tnp\tmean\tvariance\tok\n" : "dist\tm\th\tnp\tvalue\tok\n");
            } else if (f == "prob-gaussian") {
                os << "m\th\tnp\tvalue\tok\n";
            } else if (f == "cdf") {
                os << "dist\tm\th\tnp\tdelta\tvalue\tok\n";
            } else if (f == "cdf-gaussian") {
                os << "sigma\tm\th\tnp\tdelta\tvalue\tok\n";
            } else if (f == "sketch-sim") {
                os << "dist\tm\th\tnp\ttrials\tstatistic\tvalue\tok\n";
            } else {
                os << "dist\tm\th\tnp\tpsi_q\ttrials\tstatistic\tvalue\tok\n";
            }
            for (double m : an_m) {
                for (auto h : an_h) {
                    SketchParams sp{m, h, an_np};
                    sp.validate();
                    std::string head = dist.describe() + '\t' + num(m) + '\t' + std::to_string(h) + '\t' + num(an_np);
                    if (f == "prob") {
                        auto [v, ok] = guarded([&] { return prob_overestimate(dist, sp); });
                        os << head << '\t' << num(v) << '\t' << ok << '\n';
                    } else if (f == "expected") {
                        auto [v, ok] = guarded([&] { return expected_error(dist, sp); });
                        os << head << '\t' << num(v) << '\t' << ok << '\n';
                    } else if (f == "moments") {
                        int ok = 1;
                        Moments mo{};
                        try {
                            mo = error_moments(dist, sp);
                        } catch (const QuadratureError&) {
                            ok = 0;
                        }
                        os << head << '\t' << num(mo.mean) << '\t' << num(mo.variance) << '\t' << ok << '\n';
                    } else if (f == "prob-gaussian") {
                        os << num(m) << '\t' << h << '\t' << num(an_np) << '\t'
                           << num(prob_overestimate_gaussian(sp)) << "\t1\n";
                    } else if (f == "cdf") {
                        for (double d : an_delta) {
                            auto [v, ok] = guarded([&] { return error_cdf(dist, sp, d); });
                            os << head << '\t' << num(d) << '\t' << num(v) << '\t' << ok << '\n';
                        }
                    } else if (f == "cdf-gaussian") {
                        for (double d : an_delta) {
                            os << num(an_sigma) << '\t' << num(m) << '\t' << h << '\t' << num(an_np) << '\t'
                               << num(d) << '\t' << num(error_cdf_gaussian(an_sigma, sp, d)) << "\t1\n";
                        }
                    } else if (f == "sketch-sim") {
                        auto s = simulate_sketch_error(dist, sp, sim);
                        std::string row = head + '\t' + std::to_string(an_trials) + '\t';
                        os << row << "prob_overestimate\t" << num(s.prob_positive()) << "\t1\n";
                        os << row << "mean_error\t" << num(s.mean()) << "\t1\n";
                        for (double d : an_delta) {
                            os << row << "cdf@" << num(d) << '\t' << num(s.cdf(d)) << "\t1\n";
                        }
                    } else {
                        auto z = simulate_z(dist, sp, an_psi_q, sim);
                        std::string row = head + '\t' + std::to_string(an_psi_q) + '\t' + std::to_string(an_trials) + '\t';
                        os << row << "mean\t" << num(z.mean()) << "\t1\n";
                        os << row << "std\t" << num(z.stddev()) << "\t1\n";
                    }
                }
            }
            o.close();
            return kOk;
        }

        if (ev_cmd->parsed()) {
            bool recall = ev_metric == "recall";
            reject_if(recall && !given(exact_opt), "--metric recall requires --exact");
            reject_if(recall && (given(qrels_opt) || given(cutoff_opt)),
                      "--qrels and --cutoff do not apply to --metric recall");
            reject_if(!recall && !given(qrels_opt), "--metric " + ev_metric + " requires --qrels");
            reject_if(!recall && (given(exact_opt) || given(k_opt)),
                      "--exact and --k apply only to --metric recall");
            auto run = read_run(ev_run);
            MetricReport report;
            if (recall) {
                report = recall_wrt_exact(run, read_run(ev_exact), ev_k);
            } else if (ev_metric == "mrr") {
                report = mrr_at(run, read_qrels(ev_qrels), ev_cutoff == 0 ? 10 : ev_cutoff);
            } else {
                report = ndcg_at(run, read_qrels(ev_qrels), ev_cutoff == 0 ? 1000 : ev_cutoff);
            }
            detail::Output o(ev_out, out);
            write_report(*o, report);
            o.close();
            return kOk;
        }
        return fail(kUsage, "no subcommand");
    } catch (const FormatError& e) {
        return fail(kInputFormat, e.what());
    } catch (const IndexFormatError& e) {
        return fail(kIndexFormat, e.what());
    } catch (const IoError& e) {
        return fail(kIo, e.what());
    } catch (const DuplicateId& e) {
        return fail(kState, e.what());
    } catch (const UnknownId& e) {
        return fail(kState, e.what());
    } catch (const MissingVector& e) {
        return fail(kState, e.what());
    } catch (const NumericError& e) {
        return fail(kNumeric, e.what());
    } catch (const InvalidArgument& e) {
        return fail(kUsage, e.what());
    } catch (const std::exception& e) {
        return fail(kInternal, e.what());
    }
}

}  // namespace sinnamon::cli
