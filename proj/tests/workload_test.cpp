/*
 * Copyright 2026 The aradse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include "aradse/errors.hpp"
#include "aradse/workload.hpp"
#include "test_util.hpp"

namespace aradse {
namespace {

TEST(Kernels, Builtins) {
  const auto k = builtin_kernels();
  ASSERT_EQ(k.size(), 4u);
  EXPECT_EQ(k.at("gradient").port_count, 6u);
  EXPECT_EQ(k.at("segmentation").port_count, 8u);
  EXPECT_EQ(k.at("rician").port_count, 12u);
  EXPECT_EQ(k.at("gaussian").port_count, 5u);
  EXPECT_EQ(k.at("gaussian").pages_in, 4u);
  // one 128x128 slice of 4-byte pixels
  EXPECT_EQ(k.at("gradient").pages_in, 128u * 128 * 4 / 4096);
  for (const auto& [name, d] : k) {
    EXPECT_EQ(d.name, name);
    EXPECT_NO_THROW(d.validate());
    EXPECT_EQ(d.reuse_factor, 1.0);
  }
}

TEST(Kernels, MatchReferencePorts) {
  const auto spec = testing::medical5();
  const auto k = builtin_kernels();
  for (const auto& t : spec.acc_types) EXPECT_EQ(k.at(t.name).port_count, t.port_count);
}

TEST(Kernels, ReuseScalesInputOnly) {
  const auto base = builtin_kernels().at("gradient");
  auto r = base;
  r.reuse_factor = 0.2;
  EXPECT_EQ(r.fetched_pages(1), 4u);  // ceil(3.2)
  EXPECT_EQ(r.fetched_pages(64), 205u);  // ceil(204.8)
  EXPECT_EQ(r.output_pages(3), base.output_pages(3));
  EXPECT_EQ(r.compute_cycles(3), base.compute_cycles(3));
  auto half = base;
  half.reuse_factor = 0.5;
  EXPECT_EQ(half.fetched_pages(1), 8u);
  EXPECT_THROW(with_reuse(builtin_kernels(), 0.0), ConfigError);
}

TEST(Kernels, Overrides) {
  const auto j = nlohmann::json::parse(R"({"gaussian": {"compute_cycles_per_page": 9},
                                           "fft": {"port_count": 4, "pages_in": 8, "pages_out": 8}})");
  const auto k = merge_kernel_overrides(builtin_kernels(), j);
  EXPECT_EQ(k.at("gaussian").compute_cycles_per_page, 9u);
  EXPECT_EQ(k.at("gaussian").pages_in, 4u);
  EXPECT_EQ(k.at("fft").port_count, 4u);
  EXPECT_THROW(merge_kernel_overrides(builtin_kernels(), nlohmann::json::parse(R"({"x": {"color": 1}})")),
               ConfigError);
}

TEST(Trace, SingleRun) {
  const auto w = load_trace("0 app0 run gaussian 1\n");
  ASSERT_EQ(w.events.size(), 1u);
  EXPECT_EQ(w.events[0].verb, Verb::run);
  EXPECT_EQ(w.events[0].kernel, "gaussian");
  EXPECT_EQ(w.events[0].line, 1u);
}

TEST(Trace, ExplicitProtocol) {
  const auto w = load_trace(
      "# comment\n"
      "0 a reserve gradient\n"
      "5 a check_reserved gradient\n"
      "6 a send_param gradient 3\n"
      "\n"
      "9 a check_done gradient\n"
      "9 a free gradient\n");
  ASSERT_EQ(w.events.size(), 5u);
  EXPECT_EQ(w.events[2].multiplier, 3u);
  EXPECT_EQ(w.events[4].verb, Verb::free);
}

TEST(Trace, StableSortByTime) {
  const auto w = load_trace("10 b run gaussian\n0 a run rician\n10 c run gradient\n");
  EXPECT_EQ(w.events[0].app, "a");
  EXPECT_EQ(w.events[1].app, "b");
  EXPECT_EQ(w.events[2].app, "c");
}

TEST(Trace, SendParamWithoutReserve) {
  try {
    load_trace("0 a run gaussian\n4 a send_param gradient\n");
    FAIL() << "expected TraceError";
  } catch (const TraceError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("send_param without a prior reserve"), std::string::npos);
  }
}

TEST(Trace, UnfreedReservation) {
  EXPECT_THROW(load_trace("0 a reserve gradient\n1 a send_param gradient\n"), TraceError);
}

TEST(Trace, UnknownVerb) {
  try {
    load_trace("0 a run gaussian\n1 a launch gaussian\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Trace, BadFields) {
  EXPECT_THROW(load_trace("0 a run\n"), ParseError);
  EXPECT_THROW(load_trace("x a run gaussian\n"), ParseError);
  EXPECT_THROW(load_trace("0 a run gaussian 0\n"), ParseError);
}

TEST(Trace, TextRoundTrip) {
  const auto w = load_trace("0 a reserve gradient\n6 a send_param gradient 3\n9 a free gradient\n2 b run rician 2\n");
  const auto again = load_trace(to_trace_text(w));
  ASSERT_EQ(again.events.size(), w.events.size());
  for (std::size_t i = 0; i < w.events.size(); ++i) {
    EXPECT_EQ(again.events[i].time, w.events[i].time);
    EXPECT_EQ(again.events[i].verb, w.events[i].verb);
    EXPECT_EQ(again.events[i].app, w.events[i].app);
  }
}

TEST(Synth, Single) {
  WorkloadPattern p;
  p.kernel = "gaussian";
  EXPECT_EQ(synth_workload(p, testing::medical5()).events.size(), 1u);
}

TEST(Synth, AllParallel) {
  WorkloadPattern p;
  p.kind = WorkloadPattern::Kind::all_parallel;
  const auto w = synth_workload(p, testing::medical5());
  ASSERT_EQ(w.events.size(), 5u);
  for (const auto& e : w.events) EXPECT_EQ(e.time, 0u);
  EXPECT_NO_THROW(validate_protocol(w));
  p.only = {"gradient"};
  EXPECT_EQ(synth_workload(p, testing::medical5()).events.size(), 2u);
}

TEST(Synth, PoissonDeterministic) {
  WorkloadPattern p;
  p.kind = WorkloadPattern::Kind::poisson;
  p.count = 100;
  p.seed = 42;
  const auto a = synth_workload(p, testing::medical5());
  const auto b = synth_workload(p, testing::medical5());
  EXPECT_EQ(a.events, b.events);
  p.seed = 43;
  EXPECT_NE(a.events, synth_workload(p, testing::medical5()).events);
  for (std::size_t i = 1; i < a.events.size(); ++i) EXPECT_LE(a.events[i - 1].time, a.events[i].time);
}

TEST(Synth, Stream) {
  WorkloadPattern p;
  p.kind = WorkloadPattern::Kind::stream;
  p.kernel = "gradient";
  p.count = 7;
  const auto w = synth_workload(p, testing::medical5());
  EXPECT_EQ(w.events.size(), 7u);
  for (const auto& e : w.events) EXPECT_EQ(e.app, "app0");
}

}  // namespace
}  // namespace aradse
