#include <doctest.h>

#include <atomic>
#include <mutex>
#include <set>
#include <thread>

#include <httplib.h>

#include "nameguess/error.hpp"
#include "nameguess/llmclient.hpp"

using namespace nameguess;

namespace {

// Completion server on a free local port. `handler` decides each response.
class LocalServer {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  explicit LocalServer(Handler handler) : handler_(std::move(handler)) {
    server_.Post("/v1/completions", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      handler_(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }

  EndpointConfig config() const {
    EndpointConfig c;
    c.base_url = "http://127.0.0.1:" + std::to_string(port_);
    c.model = "test-model";
    c.timeout_seconds = 5;
    c.max_retries = 3;
    c.backoff_initial_seconds = 0.001;
    c.backoff_max_seconds = 0.01;
    return c;
  }

  std::atomic<int> hits{0};

 private:
  Handler handler_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

void reply(httplib::Response& res, const std::string& text) {
  res.set_content(nlohmann::json{{"choices", {{{"text", text}}}}}.dump(), "application/json");
}

}  // namespace

TEST_CASE("request body and response parsing") {
  EndpointConfig c;
  c.model = "m";
  c.extra_body = {{"best_of", 5}};
  const auto body = completion_request_body("hello", c);
  CHECK(body["model"] == "m");
  CHECK(body["prompt"] == "hello");
  CHECK(body["max_tokens"] == 128);
  CHECK(body["temperature"] == 0.0);
  CHECK(body["stop"] == nlohmann::json::array({"."}));
  CHECK(body["best_of"] == 5);
  CHECK(parse_completion_response(R"({"choices":[{"text":" a | b."}]})") == " a | b.");
  CHECK(parse_completion_response(R"({"choices":[{"message":{"content":"x"}}]})") == "x");
  CHECK_THROWS_AS(parse_completion_response(R"({"error":"nope"})"), DecodeError);
}

TEST_CASE("endpoint config validation") {
  EndpointConfig c;
  c.max_in_flight = 0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = {};
  c.timeout_seconds = 0;
  CHECK_THROWS_AS(c.validate(), InputError);
  CHECK(endpoint_config_from_json({{"model", "x"}, {"max_in_flight", 3}}).max_in_flight == 3);
  CHECK_THROWS_AS(endpoint_config_from_json({{"modle", "x"}}), InputError);
}

TEST_CASE("backoff grows, caps, and jitters") {
  EndpointConfig c;
  c.backoff_initial_seconds = 0.5;
  c.backoff_max_seconds = 4;
  CHECK(backoff_delay(0, c, 1.0).count() == 500);
  CHECK(backoff_delay(2, c, 1.0).count() == 2000);
  CHECK(backoff_delay(10, c, 1.0).count() == 4000);
  CHECK(backoff_delay(2, c, 0.0).count() == 1000);
  CHECK(is_retryable_status(429));
  CHECK(is_retryable_status(503));
  CHECK_FALSE(is_retryable_status(400));
  CHECK_FALSE(is_retryable_status(404));
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("healthy endpoint returns the completion and sends auth") {
  std::string auth, model;
  LocalServer server([&](const httplib::Request& req, httplib::Response& res) {
    auth = req.get_header_value("Authorization");
    model = nlohmann::json::parse(req.body)["model"];
    reply(res, " Customer Name.");
  });
  auto c = server.config();
  c.api_key = "sk-test";
  const auto r = complete("prompt", c);
  CHECK(r.text == " Customer Name.");
  CHECK(r.attempts == 1);
  CHECK(auth == "Bearer sk-test");
  CHECK(model == "test-model");
}

TEST_CASE("two 429s then success") {
  LocalServer server([n = 0](const httplib::Request&, httplib::Response& res) mutable {
    if (n++ < 2) {
      res.status = 429;
      return;
    }
    reply(res, "ok");
  });
  const auto r = complete("p", server.config());
  CHECK(r.text == "ok");
  CHECK(r.attempts == 3);
  CHECK(server.hits == 3);
}

TEST_CASE("persistent 500 exhausts retries") {
  LocalServer server([](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  try {
    complete("p", server.config());
    FAIL("expected EndpointError");
  } catch (const EndpointError& e) {
    CHECK(e.status() == 500);
  }
  CHECK(server.hits == 4);
}

TEST_CASE("non-retryable 4xx fails at once") {
  LocalServer server([](const httplib::Request&, httplib::Response& res) { res.status = 400; });
  CHECK_THROWS_AS(complete("p", server.config()), EndpointError);
  CHECK(server.hits == 1);
}

TEST_CASE("unreachable endpoint is an endpoint error") {
  EndpointConfig c;
  c.base_url = "http://127.0.0.1:1";
  c.max_retries = 1;
  c.backoff_initial_seconds = 0.001;
  c.timeout_seconds = 1;
  try {
    complete("p", c);
    FAIL("expected EndpointError");
  } catch (const EndpointError& e) {
    CHECK(e.status() == 0);
  }
}

TEST_CASE("run_inference bounds concurrency and reports every bundle once") {
  std::vector<PromptBundle> bundles(40);
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    bundles[i].bundle_id = "t#" + std::to_string(i);
    bundles[i].prompt = "p" + std::to_string(i);
  }
  std::atomic<int> active{0}, peak{0};
  Completer completer = [&](const PromptBundle& b) {
    const int now = ++active;
    int prev = peak.load();
    while (now > prev && !peak.compare_exchange_weak(prev, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    --active;
    if (b.bundle_id == "t#7") throw EndpointError("boom", 503);
    return Completion{"ans " + b.prompt};
  };
  std::vector<InferenceResult> results;
  run_inference(bundles, completer, 3, [&](InferenceResult&& r) { results.push_back(std::move(r)); });
  CHECK(peak.load() <= 3);
  CHECK(peak.load() >= 2);
  REQUIRE(results.size() == bundles.size());
  std::set<std::string> ids;
  for (const auto& r : results) {
    ids.insert(r.bundle_id);
    if (r.bundle_id == "t#7") {
      CHECK_FALSE(r.completion);
      CHECK(r.status == 503);
    } else {
      CHECK(*r.completion == "ans p" + r.bundle_id.substr(2));
      CHECK(r.prompt_sha256 == sha256_hex("p" + r.bundle_id.substr(2)));
    }
  }
  CHECK(ids.size() == bundles.size());
}

TEST_CASE("cancelled runs still report every bundle") {
  std::vector<PromptBundle> bundles(10);
  for (std::size_t i = 0; i < bundles.size(); ++i) bundles[i].bundle_id = std::to_string(i);
  std::atomic<bool> cancel{true};
  std::size_t n = 0, cancelled = 0;
  run_inference(bundles, [](const PromptBundle&) { return Completion{"x"}; }, 2,
                [&](InferenceResult&& r) {
                  ++n;
                  cancelled += r.error == "cancelled";
                },
                &cancel);
  CHECK(n == 10);
  CHECK(cancelled == 10);
}

TEST_CASE("raw records round-trip") {
  InferenceResult r;
  r.bundle_id = "t#0";
  r.prompt_sha256 = "ab";
  r.completion = "x | y.";
  r.status = 200;
  r.latency_ms = 12;
  const auto back = inference_result_from_json(nlohmann::json::parse(to_json(r).dump()));
  CHECK(back.completion == r.completion);
  CHECK(back.latency_ms == 12);
  r.completion.reset();
  r.error = "boom";
  const auto failed = inference_result_from_json(nlohmann::json::parse(to_json(r).dump()));
  CHECK_FALSE(failed.completion);
  CHECK(failed.error == "boom");
}
