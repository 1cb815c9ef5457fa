// Copyright 2026 The zsre Authors.
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

#ifndef ZSRE_COMMON_HTTP_H_
#define ZSRE_COMMON_HTTP_H_

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace zsre::http {

struct Response {
  int status = 0;
  std::string body;
};

// POSTs a JSON body to base_url + path. base_url may be http:// or https://
// with an optional port and path prefix. Transport failures return status 0.
Response PostJson(const std::string& base_url, const std::string& path, const std::string& body,
                  const std::vector<std::pair<std::string, std::string>>& headers,
                  std::chrono::milliseconds timeout);

}  // namespace zsre::http

#endif  // ZSRE_COMMON_HTTP_H_
