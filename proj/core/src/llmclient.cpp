#include "nameguess/llmclient.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <random>
#include <thread>

#include <httplib.h>
#include <openssl/evp.h>

#include "nameguess/error.hpp"

namespace nameguess {

void EndpointConfig::validate() const {
  if (max_in_flight < 1) throw InputError("max_in_flight must be at least 1");
  if (!(timeout_seconds > 0.0)) throw InputError("timeout must be positive");
  if (max_retries < 0) throw InputError("max_retries must be non-negative");
  if (max_new_tokens < 1) throw InputError("max_new_tokens must be at least 1");
  if (base_url.empty()) throw InputError("base_url is required");
}

EndpointConfig endpoint_config_from_json(const nlohmann::json& j) {
  EndpointConfig c;
  if (!j.is_object()) throw InputError("endpoint config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "base_url") c.base_url = v.get<std::string>();
      else if (key == "model") c.model = v.get<std::string>();
      else if (key == "max_new_tokens") c.max_new_tokens = v.get<int>();
      else if (key == "temperature") c.temperature = v.get<double>();
      else if (key == "stop") c.stop = v.get<std::vector<std::string>>();
      else if (key == "timeout_seconds") c.timeout_seconds = v.get<double>();
      else if (key == "max_retries") c.max_retries = v.get<int>();
      else if (key == "max_in_flight") c.max_in_flight = v.get<std::size_t>();
      else if (key == "backoff_initial_seconds") c.backoff_initial_seconds = v.get<double>();
      else if (key == "backoff_max_seconds") c.backoff_max_seconds = v.get<double>();
      else if (key == "extra_body") c.extra_body = v;
      else throw InputError("unknown endpoint config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad endpoint config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json completion_request_body(const std::string& prompt, const EndpointConfig& config) {
  nlohmann::json body = {{"model", config.model},
                         {"prompt", prompt},
                         {"max_tokens", config.max_new_tokens},
                         {"temperature", config.temperature},
                         {"stop", config.stop}};
  if (config.extra_body.is_object()) {
    for (const auto& [k, v] : config.extra_body.items()) body[k] = v;
  }
  return body;
}

std::string parse_completion_response(const std::string& body) {
  try {
    const auto j = nlohmann::json::parse(body);
    const auto& choice = j.at("choices").at(0);
    if (choice.contains("text")) return choice.at("text").get<std::string>();
    return choice.at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("unexpected completion response: ") + e.what());
  }
}

bool is_retryable_status(int status) noexcept {
  return status == 429 || (status >= 500 && status <= 599);
}

std::chrono::milliseconds backoff_delay(int attempt, const EndpointConfig& config,
                                        double jitter01) {
  const double base = std::min(config.backoff_max_seconds,
                               config.backoff_initial_seconds * std::ldexp(1.0, attempt));
  const double scaled = base * (0.5 + 0.5 * std::clamp(jitter01, 0.0, 1.0));
  return std::chrono::milliseconds(static_cast<std::int64_t>(scaled * 1000.0));
}

Completion complete(const std::string& prompt, const EndpointConfig& config) {
  config.validate();
  httplib::Client client(config.base_url);
  const auto secs = static_cast<time_t>(config.timeout_seconds);
  const auto usecs = static_cast<time_t>((config.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  std::string key;
  if (config.api_key) {
    key = *config.api_key;
  } else if (const char* env = std::getenv("NAMEGUESS_API_KEY")) {
    key = env;
  }
  if (!key.empty()) client.set_bearer_token_auth(key);

  const std::string body = completion_request_body(prompt, config).dump();
  std::mt19937_64 jitter_rng(std::random_device{}());
  std::uniform_real_distribution<double> jitter(0.0, 1.0);

  int last_status = 0;
  std::string last_error;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(backoff_delay(attempt - 1, config, jitter(jitter_rng)));
    auto res = client.Post("/v1/completions", body, "application/json");
    if (!res) {
      last_status = 0;
      last_error = httplib::to_string(res.error());
      continue;
    }
    last_status = res->status;
    if (res->status >= 200 && res->status < 300) {
      return {parse_completion_response(res->body), res->status, attempt + 1};
    }
    last_error = "HTTP " + std::to_string(res->status);
    if (!is_retryable_status(res->status)) {
      throw EndpointError("completion request rejected: " + last_error + ": " + res->body,
                          res->status);
    }
  }
  throw EndpointError("completion request failed after " + std::to_string(config.max_retries + 1) +
                          " attempts: " + last_error,
                      last_status);
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

nlohmann::ordered_json to_json(const InferenceResult& r) {
  nlohmann::ordered_json j;
  j["bundle_id"] = r.bundle_id;
  j["prompt_sha256"] = r.prompt_sha256;
  j["completion"] = r.completion ? nlohmann::ordered_json(*r.completion) : nullptr;
  j["latency_ms"] = r.latency_ms;
  j["status"] = r.status;
  if (!r.completion) j["error"] = r.error;
  return j;
}

InferenceResult inference_result_from_json(const nlohmann::json& j) {
  InferenceResult r;
  try {
    r.bundle_id = j.at("bundle_id").get<std::string>();
    r.prompt_sha256 = j.value("prompt_sha256", "");
    if (auto it = j.find("completion"); it != j.end() && !it->is_null()) {
      r.completion = it->get<std::string>();
    }
    r.latency_ms = j.value("latency_ms", std::int64_t{0});
    r.status = j.value("status", 0);
    r.error = j.value("error", "");
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("malformed raw completion record: ") + e.what());
  }
  return r;
}

void run_inference(std::span<const PromptBundle> bundles, const Completer& completer,
                   std::size_t max_in_flight,
                   const std::function<void(InferenceResult&&)>& sink,
                   const std::atomic<bool>* cancel) {
  if (max_in_flight < 1) throw InputError("max_in_flight must be at least 1");
  std::atomic<std::size_t> next{0};
  std::mutex sink_mu;
  std::exception_ptr sink_error;

  auto emit = [&](InferenceResult&& r) {
    std::lock_guard lock(sink_mu);
    if (sink_error) return;
    try {
      sink(std::move(r));
    } catch (...) {
      sink_error = std::current_exception();
    }
  };

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= bundles.size()) return;
      const PromptBundle& b = bundles[i];
      InferenceResult r;
      r.bundle_id = b.bundle_id;
      r.prompt_sha256 = sha256_hex(b.prompt);
      if (cancel && cancel->load()) {
        r.error = "cancelled";
        emit(std::move(r));
        continue;
      }
      const auto start = std::chrono::steady_clock::now();
      try {
        auto c = completer(b);
        r.completion = std::move(c.text);
        r.status = c.status;
      } catch (const TransportError& e) {
        r.error = e.what();
        r.status = e.status();
      } catch (const std::exception& e) {
        r.error = e.what();
      }
      r.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
      emit(std::move(r));
    }
  };

  const std::size_t n = std::min(max_in_flight, std::max<std::size_t>(bundles.size(), 1));
  {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (sink_error) std::rethrow_exception(sink_error);
}

}  // namespace nameguess
