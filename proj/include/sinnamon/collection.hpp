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

#include <utility>

#include "sinnamon/storage.hpp"
#include "sinnamon/types.hpp"

namespace sinnamon {

/// An engine paired with the raw vector store it re-ranks against. Keeps the
/// two in step: inserts go to both, deletes fetch the stored vector to find
/// the postings to remove.
template <typename Engine>
class Collection {
  public:
    explicit Collection(Engine engine) : engine_(std::move(engine)) {}
    Collection(Engine engine, VectorStore store) : engine_(std::move(engine)), store_(std::move(store)) {}

    void insert(const SparseVector& v) {
        if (store_.contains(v.id)) {
            throw DuplicateId(v.id);
        }
        engine_.insert(v);
        store_.put(v);
    }

    void erase(ExternalId id) {
        if (!engine_.id_map().contains(id)) {
            throw UnknownId(id);
        }
        engine_.erase(store_.fetch(id));
        store_.remove(id);
    }

    TopKResult search(const SparseVector& q, const QueryParams& params) {
        return engine_.search(q, params, store_);
    }

    Engine& engine() noexcept { return engine_; }
    const Engine& engine() const noexcept { return engine_; }
    const VectorStore& store() const noexcept { return store_; }
    std::size_t size() const noexcept { return engine_.size(); }

  private:
    Engine engine_;
    VectorStore store_;
};

}  // namespace sinnamon
