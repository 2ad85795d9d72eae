#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>

namespace testing {

/// Local completion endpoint on 127.0.0.1 serving `/v1/completions` with
/// `{"choices": [{"text": reply(prompt)}]}` after an optional service delay.
class StubServer {
 public:
  using Reply = std::function<std::string(const std::string& prompt)>;

  explicit StubServer(Reply reply, std::chrono::microseconds delay = {});
  ~StubServer();
  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  std::string url() const;
  /// Number of completion requests served.
  size_t requests() const;
  /// Respond to completions with this HTTP status instead of a reply.
  void fail_with(int status);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace testing
