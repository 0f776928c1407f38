#include "factcheck/http.hpp"

#include <atomic>
#include <thread>

#include <httplib.h>

#include "factcheck/errors.hpp"

namespace factcheck::http {

namespace {

std::atomic<std::size_t> g_requests{0};

bool retryable(int status) { return status == 408 || status == 429 || status >= 500; }

std::string excerpt(const std::string& body) { return body.size() > 300 ? body.substr(0, 300) + "..." : body; }

}  // namespace

Endpoint parse_base_url(const std::string& base_url) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("base_url lacks a scheme: " + base_url);
    const auto path_start = base_url.find('/', scheme_end + 3);
    Endpoint ep;
    if (path_start == std::string::npos) {
        ep.scheme_host_port = base_url;
    } else {
        ep.scheme_host_port = base_url.substr(0, path_start);
        ep.path_prefix = base_url.substr(path_start);
        while (!ep.path_prefix.empty() && ep.path_prefix.back() == '/') ep.path_prefix.pop_back();
    }
    return ep;
}

std::string post_json(const std::string& base_url, const std::string& path, const std::string& body,
                      const PostOptions& options) {
    const auto ep = parse_base_url(base_url);
    httplib::Client client(ep.scheme_host_port);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers headers;
    for (const auto& [k, v] : options.headers) headers.emplace(k, v);

    const std::string full_path = ep.path_prefix + path;
    auto backoff = options.retry.initial_backoff;
    int last_status = 0;
    std::string last_body;
    std::string last_error;
    for (int attempt = 0; attempt <= options.retry.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        ++g_requests;
        auto res = client.Post(full_path, headers, body, "application/json");
        if (!res) {
            last_status = 0;
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) return res->body;
        last_status = res->status;
        last_body = res->body;
        last_error = "HTTP " + std::to_string(res->status);
        if (!retryable(res->status)) break;
    }
    throw ProviderError("POST " + ep.scheme_host_port + full_path + " failed: " + last_error, last_status,
                        excerpt(last_body));
}

std::size_t request_count() noexcept { return g_requests.load(); }

}  // namespace factcheck::http
