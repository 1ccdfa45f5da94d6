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

#include "augforge/http_backend.hpp"

#include <condition_variable>
#include <mutex>

#include "augforge/error.hpp"
#include "augforge/wire.hpp"
#include "httplib.h"

namespace augforge {

class HttpBackend::Impl {
 public:
  Impl(BackendDescriptor desc, HttpBackendStats& stats) : desc_(std::move(desc)), stats_(stats) {}

  std::string post(const char* path, const std::string& body) {
    return send(path, &body);
  }
  std::string get(const char* path) { return send(path, nullptr); }

  BackendInfo info() {
    std::call_once(health_once_, [&] { health_ = wire::decode_health(get(wire::kHealthPath)); });
    return health_;
  }

 private:
  class Slot {
   public:
    explicit Slot(Impl& impl) : impl_(impl) {
      std::unique_lock lock(impl_.mu_);
      impl_.cv_.wait(lock, [&] { return impl_.in_flight_ < impl_.desc_.max_in_flight; });
      ++impl_.in_flight_;
      int peak = impl_.stats_.peak_in_flight.load();
      while (impl_.in_flight_ > peak &&
             !impl_.stats_.peak_in_flight.compare_exchange_weak(peak, impl_.in_flight_)) {
      }
    }
    ~Slot() {
      {
        std::lock_guard lock(impl_.mu_);
        --impl_.in_flight_;
      }
      impl_.cv_.notify_one();
    }

   private:
    Impl& impl_;
  };

  std::string send(const char* path, const std::string* body) {
    Slot slot(*this);
    const auto seconds = static_cast<time_t>(desc_.timeout_seconds);
    const auto micros = static_cast<time_t>((desc_.timeout_seconds - seconds) * 1e6);
    std::string last_error;
    for (int attempt = 0; attempt <= desc_.retries; ++attempt) {
      ++stats_.attempts;
      httplib::Client client(desc_.endpoint);
      client.set_connection_timeout(seconds, micros);
      client.set_read_timeout(seconds, micros);
      client.set_write_timeout(seconds, micros);
      httplib::Result res = body != nullptr
                                ? client.Post(path, *body, "application/json")
                                : client.Get(path);
      if (!res) {
        ++stats_.transport_failures;
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        throw BackendError(std::string(path) + ": server replied " + std::to_string(res->status) +
                           ": " + wire::decode_error(res->body));
      }
      return res->body;
    }
    throw BackendError(std::string(path) + ": transport failure after " +
                       std::to_string(desc_.retries + 1) + " attempts: " + last_error);
  }

  BackendDescriptor desc_;
  HttpBackendStats& stats_;
  std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
  std::once_flag health_once_;
  BackendInfo health_;
};

HttpBackend::HttpBackend(BackendDescriptor desc) {
  desc.validate();
  if (desc.kind != BackendKind::kHttp) throw InvariantError("HttpBackend needs an http descriptor");
  impl_ = std::make_unique<Impl>(std::move(desc), stats_);
}

HttpBackend::~HttpBackend() = default;

BackendInfo HttpBackend::info() { return impl_->info(); }

namespace {

template <typename F>
auto decode_reply(const char* path, F&& decode) {
  try {
    return decode();
  } catch (const FormatError& e) {
    throw BackendError(std::string(path) + ": malformed reply: " + e.what());
  }
}

}  // namespace

Image HttpBackend::inpaint_raw(const InpaintRequest& req) {
  const std::string body = impl_->post(wire::kInpaintPath, wire::encode_inpaint_request(req));
  return decode_reply(wire::kInpaintPath, [&] { return wire::decode_inpaint_reply(body); });
}

std::vector<ScoredMask> HttpBackend::segment_raw(const SegmentRequest& req) {
  const std::string body = impl_->post(wire::kSegmentPath, wire::encode_segment_request(req));
  return decode_reply(wire::kSegmentPath, [&] { return wire::decode_segment_reply(body); });
}

TrackResult HttpBackend::track_raw(const TrackRequest& req) {
  const std::string body = impl_->post(wire::kTrackPath, wire::encode_track_request(req));
  return decode_reply(wire::kTrackPath, [&] { return wire::decode_track_reply(body); });
}

std::shared_ptr<Backend> make_http_backend(const BackendDescriptor& desc) {
  return std::make_shared<HttpBackend>(desc);
}

class BackendServer::Impl {
 public:
  explicit Impl(std::shared_ptr<Backend> backend) : backend_(std::move(backend)) {
    handle(wire::kInpaintPath, [this](const std::string& body) {
      InpaintRequest req = wire::decode_inpaint_request(body);
      return wire::encode_inpaint_reply(inpaint(*backend_, req));
    });
    handle(wire::kSegmentPath, [this](const std::string& body) {
      return wire::encode_segment_reply(segment(*backend_, wire::decode_segment_request(body)));
    });
    handle(wire::kTrackPath, [this](const std::string& body) {
      return wire::encode_track_reply(track(*backend_, wire::decode_track_request(body)));
    });
    server_.Get(wire::kHealthPath, [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(wire::encode_health(backend_->info()), "application/json");
    });
  }

  int start(const std::string& host, int port) {
    const int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return bound;
  }

  void listen_blocking(const std::string& host, int port) {
    if (!server_.listen(host, port)) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

 private:
  template <typename F>
  void handle(const char* path, F fn) {
    server_.Post(path, [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        res.set_content(fn(req.body), "application/json");
      } catch (const FormatError& e) {
        res.status = 400;
        res.set_content(wire::encode_error(e.what()), "application/json");
      } catch (const InvariantError& e) {
        res.status = 400;
        res.set_content(wire::encode_error(e.what()), "application/json");
      } catch (const DimensionError& e) {
        res.status = 400;
        res.set_content(wire::encode_error(e.what()), "application/json");
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(wire::encode_error(e.what()), "application/json");
      }
    });
  }

  std::shared_ptr<Backend> backend_;
  httplib::Server server_;
  std::thread thread_;
};

BackendServer::BackendServer(std::shared_ptr<Backend> backend)
    : impl_(std::make_unique<Impl>(std::move(backend))) {}

BackendServer::~BackendServer() { stop(); }

int BackendServer::start(const std::string& host, int port) { return impl_->start(host, port); }

void BackendServer::stop() { impl_->stop(); }

void BackendServer::listen_blocking(const std::string& host, int port) {
  impl_->listen_blocking(host, port);
}

}  // namespace augforge
