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

#include "http_json.h"

#include "httplib.h"

namespace faithctl::internal {

Endpoint ParseEndpoint(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) {
    throw InvalidArgument("endpoint must be an http:// URL: " + url);
  }
  const auto slash = url.find('/', scheme.size());
  Endpoint ep;
  ep.scheme_host_port = url.substr(0, slash);
  if (ep.scheme_host_port.size() == scheme.size()) {
    throw InvalidArgument("endpoint has no host: " + url);
  }
  if (slash != std::string::npos) {
    ep.base_path = url.substr(slash);
    while (!ep.base_path.empty() && ep.base_path.back() == '/') {
      ep.base_path.pop_back();
    }
  }
  return ep;
}

struct JsonClient::Impl {
  Endpoint endpoint;
  httplib::Client client;

  Impl(Endpoint ep, std::chrono::milliseconds timeout)
      : endpoint(std::move(ep)), client(endpoint.scheme_host_port) {
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    client.set_keep_alive(true);
    // Small JSON requests otherwise stall on Nagle plus delayed ACK.
    client.set_tcp_nodelay(true);
  }

  nlohmann::json Decode(const httplib::Result& res, const std::string& path) {
    if (!res) {
      throw NetworkError("request to " + endpoint.scheme_host_port + path +
                         " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw ProtocolError(path + " returned HTTP " + std::to_string(res->status));
    }
    nlohmann::json body = nlohmann::json::parse(res->body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      throw ProtocolError(path + " returned a body that is not a JSON object");
    }
    return body;
  }
};

JsonClient::JsonClient(const std::string& url, std::chrono::milliseconds timeout)
    : impl_(std::make_unique<Impl>(ParseEndpoint(url), timeout)) {}

JsonClient::~JsonClient() = default;

nlohmann::json JsonClient::Post(const std::string& path, const nlohmann::json& body) {
  const std::string full = impl_->endpoint.base_path + path;
  auto res = impl_->client.Post(full, body.dump(), "application/json");
  return impl_->Decode(res, full);
}

nlohmann::json JsonClient::Get(const std::string& path) {
  const std::string full = impl_->endpoint.base_path + path;
  auto res = impl_->client.Get(full);
  return impl_->Decode(res, full);
}

}  // namespace faithctl::internal
