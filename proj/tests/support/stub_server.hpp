#pragma once

#include <httplib.h>

#include <atomic>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace weave::testing {

/// Local OpenAI-compatible chat endpoint. Answers the first `fail_count`
/// requests with `fail_status`, then with a fixed completion.
class StubServer {
public:
    struct Request {
        nlohmann::json body;
        std::string authorization;
        std::string path;
    };

    explicit StubServer(int fail_status = 429, int fail_count = 0, std::string reply = "stub reply")
        : fail_status_(fail_status), fail_count_(fail_count), reply_(std::move(reply)) {
        server_.Post(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
            std::lock_guard lock(mutex_);
            requests_.push_back({nlohmann::json::parse(req.body, nullptr, false), req.get_header_value("Authorization"),
                                 req.path});
            if (static_cast<int>(requests_.size()) <= fail_count_) {
                res.status = fail_status_;
                res.set_content(R"({"error":{"message":"injected"}})", "application/json");
                return;
            }
            nlohmann::json body = {
                {"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", reply_}}}}}},
                {"usage", {{"prompt_tokens", 21}, {"completion_tokens", 4}}},
            };
            res.set_content(body.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~StubServer() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

    std::vector<Request> requests() const {
        std::lock_guard lock(mutex_);
        return requests_;
    }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    int fail_status_;
    int fail_count_;
    std::string reply_;
    mutable std::mutex mutex_;
    std::vector<Request> requests_;
};

}  // namespace weave::testing
