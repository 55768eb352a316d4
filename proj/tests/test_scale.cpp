// Copyright 2026-present the reis-sim authors
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


#include <cmath>
#include <cstdio>

#include "dataset/dataset.hpp"
#include "doctest.h"
#include "engine/engine.hpp"
#include "layout/device.hpp"
#include "ssd/config.hpp"
#include "vectordb/quantizer.hpp"

using namespace reis;

namespace {

dataset::GeneratorParams params(std::uint64_t n, std::uint64_t seed) {
  dataset::GeneratorParams p;
  p.n = n;
  p.dim = 128;
  p.clusters = 100;
  p.latent_dim = 16;
  p.queries = 100;
  p.seed = seed;
  p.doc_min_bytes = 8;
  p.doc_max_bytes = 16;
  return p;
}

std::uint32_t calibrated(std::uint64_t n, const vdb::VectorSet& sample) {
  auto data = dataset::generate(params(n, 77));
  const auto q = vdb::train_quantizer(data.vectors);
  layout::SsdDevice dev(ssd::preset_config("reis-ssd1"));
  const auto& db = dev.deploy_flat(0, data.vectors, std::move(data.documents), q);
  return engine::calibrate_filter_threshold(dev, db, sample, 0.01, 10);
}

}  // namespace

TEST_CASE("calibrated threshold barely moves from 100k to 1M vectors") {
  // Same seed: same blob structure, so both sets share one distribution.
  const auto sample = dataset::generate(params(1000, 77)).queries;
  const auto small = calibrated(100'000, sample);
  const auto large = calibrated(1'000'000, sample);
  std::printf("threshold 100k=%u 1M=%u\n", small, large);
  CHECK(small > 0);
  CHECK(std::abs(double(large) - double(small)) <= 0.02 * double(small));
}
