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
#include <cmath>
#include <cstddef>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "sinnamon/error.hpp"
#include "sinnamon/storage.hpp"
#include "sinnamon/trec.hpp"

namespace sinnamon {

/// Per-query metric values plus their mean over all queries.
struct MetricReport {
    std::map<std::string, double> per_query;
    double mean = 0.0;
};

namespace detail {

inline MetricReport finish(std::map<std::string, double> per_query) {
    MetricReport r;
    double total = 0.0;
    for (const auto& [qid, v] : per_query) {
        total += v;
    }
    r.mean = per_query.empty() ? 0.0 : total / static_cast<double>(per_query.size());
    r.per_query = std::move(per_query);
    return r;
}

inline std::set<std::string> top_docs(const std::vector<RunEntry>& entries, std::size_t k) {
    std::set<std::string> out;
    for (std::size_t i = 0; i < entries.size() && i < k; ++i) {
        out.insert(entries[i].doc);
    }
    return out;
}

}  // namespace detail

/// |approx@k ∩ exact@k| / |exact@k| per query over the union of query ids; a
/// query whose exact list is empty scores 1.
inline MetricReport recall_wrt_exact(const Run& approx, const Run& exact, std::size_t k) {
    if (k < 1) {
        throw InvalidArgument("recall cutoff must be >= 1");
    }
    std::set<std::string> qids;
    for (const auto& [q, e] : approx) {
        qids.insert(q);
    }
    for (const auto& [q, e] : exact) {
        qids.insert(q);
    }
    static const std::vector<RunEntry> none;
    std::map<std::string, double> per_query;
    for (const auto& q : qids) {
        auto a = approx.find(q);
        auto e = exact.find(q);
        auto truth = detail::top_docs(e == exact.end() ? none : e->second, k);
        auto found = detail::top_docs(a == approx.end() ? none : a->second, k);
        if (truth.empty()) {
            per_query[q] = 1.0;
            continue;
        }
        std::size_t hit = 0;
        for (const auto& d : found) {
            hit += truth.count(d);
        }
        per_query[q] = static_cast<double>(hit) / static_cast<double>(truth.size());
    }
    return detail::finish(std::move(per_query));
}

namespace detail {

inline std::set<std::string> judged_queries(const Run& run, const Qrels& qrels) {
    std::set<std::string> qids;
    for (const auto& [q, e] : run) {
        qids.insert(q);
    }
    for (const auto& [q, e] : qrels) {
        qids.insert(q);
    }
    return qids;
}

inline int relevance(const Qrels& qrels, const std::string& qid, const std::string& doc) {
    auto q = qrels.find(qid);
    if (q == qrels.end()) {
        return 0;
    }
    auto d = q->second.find(doc);
    return d == q->second.end() ? 0 : d->second;
}

}  // namespace detail

/// Mean reciprocal rank of the first relevant (rel > 0) document within
/// `cutoff`. Queries without relevant documents count as 0.
inline MetricReport mrr_at(const Run& run, const Qrels& qrels, std::size_t cutoff = 10) {
    if (cutoff < 1) {
        throw InvalidArgument("cutoff must be >= 1");
    }
    std::map<std::string, double> per_query;
    for (const auto& q : detail::judged_queries(run, qrels)) {
        double rr = 0.0;
        auto it = run.find(q);
        if (it != run.end()) {
            for (std::size_t i = 0; i < it->second.size() && i < cutoff; ++i) {
                if (detail::relevance(qrels, q, it->second[i].doc) > 0) {
                    rr = 1.0 / static_cast<double>(i + 1);
                    break;
                }
            }
        }
        per_query[q] = rr;
    }
    return detail::finish(std::move(per_query));
}

/// NDCG at `cutoff` with gain 2^rel - 1 and discount log2(rank + 1).
/// Queries without relevant documents count as 0.
inline MetricReport ndcg_at(const Run& run, const Qrels& qrels, std::size_t cutoff = 1000) {
    if (cutoff < 1) {
        throw InvalidArgument("cutoff must be >= 1");
    }
    auto gain = [](int rel) { return rel > 0 ? std::exp2(static_cast<double>(rel)) - 1.0 : 0.0; };
    std::map<std::string, double> per_query;
    for (const auto& q : detail::judged_queries(run, qrels)) {
        std::vector<double> ideal;
        if (auto j = qrels.find(q); j != qrels.end()) {
            for (const auto& [doc, rel] : j->second) {
                if (rel > 0) {
                    ideal.push_back(gain(rel));
                }
            }
        }
        std::sort(ideal.begin(), ideal.end(), std::greater<>());
        double idcg = 0.0;
        for (std::size_t i = 0; i < ideal.size() && i < cutoff; ++i) {
            idcg += ideal[i] / std::log2(static_cast<double>(i) + 2.0);
        }
        double dcg = 0.0;
        if (auto it = run.find(q); it != run.end()) {
            for (std::size_t i = 0; i < it->second.size() && i < cutoff; ++i) {
                dcg += gain(detail::relevance(qrels, q, it->second[i].doc)) / std::log2(static_cast<double>(i) + 2.0);
            }
        }
        per_query[q] = idcg > 0.0 ? dcg / idcg : 0.0;
    }
    return detail::finish(std::move(per_query));
}

/// `qid<TAB>value` rows then `ALL<TAB>mean`.
inline void write_report(std::ostream& out, const MetricReport& r) {
    for (const auto& [q, v] : r.per_query) {
        out << q << '\t' << format_double(v) << '\n';
    }
    out << "ALL\t" << format_double(r.mean) << '\n';
}

}  // namespace sinnamon
