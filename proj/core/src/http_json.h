// Copyright 2026 The faithctl Authors.
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

#ifndef FAITHCTL_SRC_HTTP_JSON_H_
#define FAITHCTL_SRC_HTTP_JSON_H_

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>
#include <thread>

#include "faithctl/errors.h"
#include "json.hpp"

namespace faithctl::internal {

// scheme://host[:port][/base]
struct Endpoint {
  std::string scheme_host_port;
  std::string base_path;  // no trailing slash; may be empty
};

// Throws InvalidArgument on anything but an http:// URL.
Endpoint ParseEndpoint(const std::string& url);

// A JSON-over-HTTP client bound to one endpoint. Not thread-safe; use one
// instance per thread.
class JsonClient {
 public:
  JsonClient(const std::string& url, std::chrono::milliseconds timeout);
  ~JsonClient();
  JsonClient(const JsonClient&) = delete;
  JsonClient& operator=(const JsonClient&) = delete;

  // One attempt. Throws NetworkError on transport failure, ProtocolError on
  // a non-200 status or a body that is not a JSON object.
  nlohmann::json Post(const std::string& path, const nlohmann::json& body);
  nlohmann::json Get(const std::string& path);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Repeats `attempt` on NetworkError up to `max_retries` extra times, then
// throws BackendUnavailable. Other exceptions propagate untouched.
template <typename Fn>
auto WithRetries(std::size_t max_retries, const std::string& what, Fn&& attempt)
    -> decltype(attempt()) {
  std::string last_error;
  for (std::size_t i = 0; i <= max_retries; ++i) {
    try {
      return attempt();
    } catch (const NetworkError& e) {
      last_error = e.what();
      if (i < max_retries) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50 << i));
      }
    }
  }
  throw BackendUnavailable(what + " unavailable after " +
                           std::to_string(max_retries + 1) +
                           " attempt(s): " + last_error);
}


}  // namespace faithctl::internal

#endif  // FAITHCTL_SRC_HTTP_JSON_H_
