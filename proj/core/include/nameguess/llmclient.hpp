#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nameguess/promptkit.hpp"

namespace nameguess {

struct EndpointConfig {
  std::string base_url = "http://127.0.0.1:8000";
  std::string model;
  int max_new_tokens = 128;
  double temperature = 0.0;
  std::vector<std::string> stop{"."};
  double timeout_seconds = 60.0;
  int max_retries = 4;
  std::size_t max_in_flight = 4;
  double backoff_initial_seconds = 0.5;
  double backoff_max_seconds = 30.0;
  nlohmann::json extra_body = nlohmann::json::object();  // passed through (e.g. beam settings)
  std::optional<std::string> api_key;  // defaults to NAMEGUESS_API_KEY

  /// Throws InputError unless max_in_flight >= 1, timeout > 0, retries >= 0.
  void validate() const;
};

EndpointConfig endpoint_config_from_json(const nlohmann::json& j);

/// {"model", "prompt", "max_tokens", "temperature", "stop"} plus extra_body.
nlohmann::json completion_request_body(const std::string& prompt, const EndpointConfig& config);

/// Text of choices[0] from an OpenAI-style completion response. Throws
/// DecodeError on any other shape.
std::string parse_completion_response(const std::string& body);

bool is_retryable_status(int status) noexcept;

/// Delay before retry number `attempt` (0-based): initial * 2^attempt capped
/// at max, scaled by a jitter factor in [0.5, 1].
std::chrono::milliseconds backoff_delay(int attempt, const EndpointConfig& config,
                                        double jitter01);

struct Completion {
  std::string text;
  int status = 200;
  int attempts = 1;
};

/// Posts one prompt to {base_url}/v1/completions. Retries on transport
/// errors, 429 and 5xx; throws EndpointError when retries run out or the
/// server answers with another non-2xx status.
Completion complete(const std::string& prompt, const EndpointConfig& config);

using Completer = std::function<Completion(const PromptBundle&)>;

struct InferenceResult {
  std::string bundle_id;
  std::string prompt_sha256;
  std::optional<std::string> completion;
  std::string error;  // set when completion is absent
  int status = 0;
  std::int64_t latency_ms = 0;
};

nlohmann::ordered_json to_json(const InferenceResult& r);
InferenceResult inference_result_from_json(const nlohmann::json& j);

std::string sha256_hex(const std::string& data);

/// Runs `completer` over every bundle with at most `max_in_flight` calls at
/// once. `sink` is called exactly once per bundle, serialized, as results
/// arrive. Setting `cancel` stops new calls; bundles not started are
/// reported with the error "cancelled".
void run_inference(std::span<const PromptBundle> bundles, const Completer& completer,
                   std::size_t max_in_flight,
                   const std::function<void(InferenceResult&&)>& sink,
                   const std::atomic<bool>* cancel = nullptr);

}  // namespace nameguess
