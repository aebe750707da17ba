// Copyright 2026 The segaug Authors
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

#include <fcntl.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <thread>

#include "segaug/base64.hpp"
#include "json.hpp"
#include "segaug/error.hpp"
#include "segaug/mask_io.hpp"
#include "segaug/segmenter.hpp"

namespace segaug
{
namespace fs = std::filesystem;
using Json = nlohmann::json;

struct SubprocessBackend::Impl
{
  std::string command;
  fs::path work_dir;
  pid_t pid = -1;
  int sock = -1;
  std::string buffer;
  bool broken = false;
  std::string identity;
  bool tail = false;

  void start()
  {
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
      throw BackendError(std::string("socketpair failed: ") + std::strerror(errno));
    }
    const pid_t child = ::fork();
    if (child < 0) {
      ::close(fds[0]);
      ::close(fds[1]);
      throw BackendError(std::string("fork failed: ") + std::strerror(errno));
    }
    if (child == 0) {
      ::dup2(fds[1], STDIN_FILENO);
      ::dup2(fds[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
      ::_exit(127);
    }
    ::close(fds[1]);
    pid = child;
    sock = fds[0];
  }

  void stop()
  {
    if (sock >= 0) {
      ::shutdown(sock, SHUT_RDWR);
      ::close(sock);
      sock = -1;
    }
    if (pid > 0) {
      int status = 0;
      for (int i = 0; i < 200; ++i) {
        if (::waitpid(pid, &status, WNOHANG) == pid) {
          pid = -1;
          return;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
      }
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      pid = -1;
    }
  }

  [[noreturn]] void fail(const std::string & what)
  {
    broken = true;
    stop();
    throw BackendError("worker '" + command + "': " + what);
  }

  void send_line(const std::string & line)
  {
    const std::string data = line + "\n";
    std::size_t off = 0;
    while (off < data.size()) {
      const ssize_t n = ::send(sock, data.data() + off, data.size() - off, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        fail(std::string("write failed: ") + std::strerror(errno));
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string read_line()
  {
    for (;;) {
      const auto nl = buffer.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer.substr(0, nl);
        buffer.erase(0, nl + 1);
        return line;
      }
      char chunk[4096];
      const ssize_t n = ::recv(sock, chunk, sizeof chunk, 0);
      if (n < 0) {
        if (errno == EINTR) continue;
        fail(std::string("read failed: ") + std::strerror(errno));
      }
      if (n == 0) fail("worker closed its output");
      buffer.append(chunk, static_cast<std::size_t>(n));
    }
  }

  Json call(const Json & request)
  {
    if (broken) throw BackendError("worker '" + command + "': stream aborted by an earlier error");
    send_line(request.dump());
    const std::string line = read_line();
    Json response;
    try {
      response = Json::parse(line);
    } catch (const Json::parse_error &) {
      fail("protocol error: response is not a JSON object: " + line.substr(0, 200));
    }
    if (!response.is_object()) fail("protocol error: response is not a JSON object");
    if (auto it = response.find("error"); it != response.end()) {
      throw BackendError(
        "worker '" + command + "' reported: " + (it->is_string() ? it->get<std::string>() : it->dump()));
    }
    return response;
  }

  Json base_request(const char * kind, const StreamContext & ctx, int clip_index) const
  {
    return {{"kind", kind}, {"video_id", ctx.video_id}, {"exp_id", ctx.exp_id},
            {"expression", ctx.expression}, {"clip_index", clip_index}};
  }

  fs::path scratch(const StreamContext & ctx) const { return work_dir / ctx.video_id / ctx.exp_id; }
};

SubprocessBackend::SubprocessBackend(std::string command, fs::path work_dir)
: impl_(std::make_unique<Impl>())
{
  impl_->command = std::move(command);
  impl_->work_dir = std::move(work_dir);
  impl_->start();
  const Json hello = impl_->call({{"kind", "hello"}});
  auto id = hello.find("identity");
  auto tail = hello.find("supports_tail_propagation");
  if (id == hello.end() || !id->is_string() || tail == hello.end() || !tail->is_boolean()) {
    impl_->fail("protocol error: malformed hello response");
  }
  impl_->identity = id->get<std::string>();
  impl_->tail = tail->get<bool>();
}

SubprocessBackend::~SubprocessBackend()
{
  if (impl_) impl_->stop();
}

std::string SubprocessBackend::identity() const { return impl_->identity; }

bool SubprocessBackend::supports_tail_propagation() const { return impl_->tail; }

std::vector<SegPrompt> SubprocessBackend::generate(
  const StreamContext & ctx, std::span<const CompressedClip> clips)
{
  const fs::path dir = impl_->scratch(ctx);
  std::vector<std::string> paths;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "clip_%03zu_key.png", i);
    write_rgb_png(dir / name, clips[i].key_frame.image);
    paths.push_back((dir / name).string());
    std::snprintf(name, sizeof name, "clip_%03zu_com.png", i);
    write_rgb_png(dir / name, clips[i].compressed.image);
    paths.push_back((dir / name).string());
  }

  std::vector<SegPrompt> out;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    Json req = impl_->base_request("prompt", ctx, static_cast<int>(i));
    req["image_paths"] = paths;
    const Json resp = impl_->call(req);
    auto it = resp.find("prompt_b64");
    if (it == resp.end() || !it->is_string()) impl_->fail("protocol error: prompt response lacks prompt_b64");
    std::string payload;
    try {
      payload = base64_decode(it->get<std::string>());
    } catch (const BackendError & e) {
      impl_->fail(std::string("protocol error: ") + e.what());
    }
    out.push_back({static_cast<int>(i), std::move(payload)});
  }
  return out;
}

std::vector<SoftMask> SubprocessBackend::decode(
  const StreamContext & ctx, std::span<const Frame> frames, const SegPrompt & prompt, bool propagate)
{
  const fs::path dir = impl_->scratch(ctx);
  std::vector<std::string> paths;
  std::vector<int> indices;
  for (const Frame & f : frames) {
    if (f.uri.empty()) {
      const fs::path p = dir / ("frame_" + frame_file_name(f.index));
      write_rgb_png(p, f.image);
      paths.push_back(p.string());
    } else {
      paths.push_back(f.uri);
    }
    indices.push_back(f.index);
  }
  Json req = impl_->base_request("decode", ctx, prompt.clip_index);
  req["prompt_b64"] = base64_encode(prompt.payload);
  req["image_paths"] = paths;
  req["frame_indices"] = indices;
  req["width"] = frames.empty() ? 0 : frames.front().image.width;
  req["height"] = frames.empty() ? 0 : frames.front().image.height;
  req["propagate"] = propagate;
  const Json resp = impl_->call(req);

  auto it = resp.find("mask_paths");
  if (it == resp.end() || !it->is_array()) impl_->fail("protocol error: decode response lacks mask_paths");
  std::vector<SoftMask> out;
  for (const Json & p : *it) {
    if (!p.is_string()) impl_->fail("protocol error: mask_paths entries must be strings");
    try {
      out.push_back(read_soft_mask_png(p.get<std::string>()));
    } catch (const IoError & e) {
      throw BackendError(e.what());
    }
  }
  return out;
}

BackendFactory make_backend_factory(const std::string & spec, std::uint64_t seed, const fs::path & work_dir)
{
  if (spec == "stub") {
    return [seed] { return std::make_unique<StubBackend>(seed, "stub"); };
  }
  if (spec.rfind("stub:", 0) == 0 && spec.size() > 5) {
    std::string tag = spec.substr(5);
    return [seed, tag] { return std::make_unique<StubBackend>(seed, tag); };
  }
  if (spec.rfind("cmd:", 0) == 0 && spec.size() > 4) {
    std::string command = spec.substr(4);
    auto counter = std::make_shared<std::atomic<int>>(0);
    return [command, work_dir, counter]() -> std::unique_ptr<SegmenterBackend> {
      const fs::path dir = work_dir / ("worker_" + std::to_string(counter->fetch_add(1)));
      return std::make_unique<SubprocessBackend>(command, dir);
    };
  }
  throw ValidationError("unknown backend '" + spec + "' (expected stub, stub:<tag> or cmd:<command>)");
}

}  // namespace segaug
