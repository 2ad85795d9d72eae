#include "support/stub_server.hpp"

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <thread>

namespace testing {

struct StubServer::Impl {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::atomic<size_t> requests{0};
  std::atomic<int> status{200};
};

StubServer::StubServer(Reply reply, std::chrono::microseconds delay) : impl_(std::make_unique<Impl>()) {
  impl_->server.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok", "text/plain"); });
  impl_->server.Post("/v1/completions", [this, reply, delay](const httplib::Request& req, httplib::Response& res) {
    ++impl_->requests;
    if (delay.count() > 0) std::this_thread::sleep_for(delay);
    if (impl_->status != 200) {
      res.status = impl_->status;
      return;
    }
    auto body = nlohmann::json::parse(req.body);
    nlohmann::json out;
    out["choices"] = nlohmann::json::array({{{"text", reply(body.at("prompt").get<std::string>())}}});
    res.set_content(out.dump(), "application/json");
  });
  impl_->server.set_tcp_nodelay(true);
  impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

StubServer::~StubServer() {
  impl_->server.stop();
  impl_->thread.join();
}

std::string StubServer::url() const { return "http://127.0.0.1:" + std::to_string(impl_->port); }

size_t StubServer::requests() const { return impl_->requests; }

void StubServer::fail_with(int status) { impl_->status = status; }

}  // namespace testing
