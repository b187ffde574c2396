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

#ifndef FAITHCTL_TOOLS_CLI_IO_H_
#define FAITHCTL_TOOLS_CLI_IO_H_

#include <filesystem>
#include <fstream>
#include <string>

namespace faithctl::cli {

// Opens `path` for reading or throws InvalidArgument.
std::ifstream OpenInput(const std::string& path);

// Output written to "<path>.tmp" and renamed onto `path` by Commit(). If the
// object is destroyed uncommitted (a command failed) the temporary file is
// removed, so a failed command never leaves a partial artifact behind.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path path);
  ~AtomicFile();
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ofstream& stream() { return stream_; }
  void Commit();

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::ofstream stream_;
  bool committed_ = false;
};

}  // namespace faithctl::cli

#endif  // FAITHCTL_TOOLS_CLI_IO_H_
