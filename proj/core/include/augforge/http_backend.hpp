// Copyright 2026 The augforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AUGFORGE_HTTP_BACKEND_HPP_
#define AUGFORGE_HTTP_BACKEND_HPP_

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "augforge/backend.hpp"

namespace augforge {

// Counters exposed for tests and diagnostics.
struct HttpBackendStats {
  std::atomic<int> attempts{0};
  std::atomic<int> transport_failures{0};
  std::atomic<int> peak_in_flight{0};
};

// Wire-protocol client. Transport failures are retried up to `retries` times;
// HTTP error statuses are never retried. At most `max_in_flight` requests are
// outstanding at once across all threads sharing the handle.
class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(BackendDescriptor desc);
  ~HttpBackend() override;

  BackendInfo info() override;
  Image inpaint_raw(const InpaintRequest& req) override;
  std::vector<ScoredMask> segment_raw(const SegmentRequest& req) override;
  TrackResult track_raw(const TrackRequest& req) override;

  const HttpBackendStats& stats() const { return stats_; }

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
  HttpBackendStats stats_;
};

// Serves any Backend over the wire protocol; used to stand up local mock
// services and in protocol tests.
class BackendServer {
 public:
  explicit BackendServer(std::shared_ptr<Backend> backend);
  ~BackendServer();

  BackendServer(const BackendServer&) = delete;
  BackendServer& operator=(const BackendServer&) = delete;

  // Binds and serves on a background thread; port 0 picks a free port.
  // Returns the bound port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();
  // Blocks on the calling thread until stop() is called from elsewhere.
  void listen_blocking(const std::string& host, int port);

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace augforge

#endif  // AUGFORGE_HTTP_BACKEND_HPP_
