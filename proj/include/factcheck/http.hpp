#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

namespace factcheck::http {

struct Endpoint {
    std::string scheme_host_port;  // "https://api.example.com:443"
    std::string path_prefix;       // "/v1"
};

/// Splits "http://host:port/v1" into the client origin and path prefix.
/// Throws ConfigError on a URL without scheme.
Endpoint parse_base_url(const std::string& base_url);

struct RetryPolicy {
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{500};
};

struct PostOptions {
    std::chrono::duration<double> timeout{60.0};
    std::vector<std::pair<std::string, std::string>> headers;
    RetryPolicy retry;
};

/// POSTs a JSON body and returns the response body on HTTP 200. Transport
/// failures, 429 and 5xx are retried with exponential backoff; other statuses
/// fail immediately. Throws ProviderError with status and a body excerpt.
std::string post_json(const std::string& base_url, const std::string& path, const std::string& body,
                      const PostOptions& options);

/// Count of HTTP requests attempted by this process.
std::size_t request_count() noexcept;

}  // namespace factcheck::http
