#pragma once

// Provider-agnostic chat-completion client. One request per sentence; the
// response is scanned for the first line that starts with a well-formed
// function-call expression, and `where X represents "..."` bindings are
// collected as the legend. A deterministic mock provider keeps the entire
// test suite off the network.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "l2l/ast.hpp"
#include "l2l/error.hpp"

namespace l2l {

// ── Errors ──────────────────────────────────────────────────────────────────

struct TransportError : Error {
    explicit TransportError(const std::string& what) : Error(what) {}
};

struct AuthError : Error {
    explicit AuthError(const std::string& what) : Error(what) {}
};

struct NoExpressionFoundError : Error {
    std::string raw_text;
    explicit NoExpressionFoundError(std::string raw)
        : Error("model response contains no expression line"), raw_text(std::move(raw)) {}
};

// ── Config ──────────────────────────────────────────────────────────────────

struct ProviderConfig {
    std::string base_url;                         // e.g. http://localhost:8080/v1/chat/completions
    std::string model_name;
    std::string api_key_env_var = "L2L_API_KEY";  // the key itself is never stored
    double timeout_seconds = 30.0;
    int max_retries = 2;
};

// ── Providers ───────────────────────────────────────────────────────────────

class Provider {
public:
    virtual ~Provider() = default;
    // Returns the raw model text for one prompt. Throws TransportError on
    // recoverable failures (the caller retries) and AuthError on 401/403.
    virtual std::string respond(const std::string& prompt) = 0;
};

// Deterministic stand-in: fixture responses keyed by the exact sentence
// embedded in the prompt, an optional schedule of failing call numbers, and
// an echo default for unmapped sentences.
class MockProvider : public Provider {
public:
    void set_response(std::string sentence, std::string response);
    // 1-based call numbers that throw TransportError instead of responding.
    void fail_on_calls(std::vector<int> calls);

    // Fixture file: either a flat {"sentence": "response"} map or
    // {"responses": {...}, "fail_calls": [...]}.
    static MockProvider from_json_file(const std::string& path);

    std::string respond(const std::string& prompt) override;
    int calls_made() const { return calls_; }

private:
    std::map<std::string, std::string> responses_;
    std::vector<int> fail_calls_;
    int calls_ = 0;
};

// Minimal HTTP result the provider needs; the transport is injectable so
// request building, retry and error mapping stay testable without sockets.
struct HttpResult {
    int status = 0;
    std::string body;
};

struct HttpRequest {
    std::string url;
    std::string body;  // JSON
    std::vector<std::pair<std::string, std::string>> headers;
    double timeout_seconds = 30.0;
};

using HttpTransport = std::function<HttpResult(const HttpRequest&)>;

// POSTs {"model": ..., "messages": [{"role": "user", "content": prompt}]}
// and reads choices[0].message.content. The API key comes from the
// environment variable named in the config at request time.
class HttpProvider : public Provider {
public:
    explicit HttpProvider(ProviderConfig config, HttpTransport transport = {});
    std::string respond(const std::string& prompt) override;

private:
    ProviderConfig config_;
    HttpTransport transport_;
};

// ── Prompt ──────────────────────────────────────────────────────────────────

using SymbolBinding = std::pair<std::string, std::string>;  // (symbol, phrase)

// Instantiates the shipped prompt template: the known-symbol legend and the
// target sentence. Byte-deterministic for identical inputs.
std::string build_prompt(std::string_view sentence, std::span<const SymbolBinding> known_atoms);

// ── Translation ─────────────────────────────────────────────────────────────

struct LlmTranslation {
    int sentence_index = 0;
    std::string raw_text;   // verbatim model output
    std::string expr_text;  // extracted expression (substring of raw_text)
    std::vector<SymbolBinding> legend;
};

using Sleeper = std::function<void(double seconds)>;

// One request for one sentence, with retries on TransportError using
// exponential backoff (base 1s, factor 2). AuthError is not retried.
// Throws NoExpressionFoundError when no line of the response parses.
LlmTranslation translate_sentence(std::string_view sentence,
                                  std::span<const SymbolBinding> known_atoms,
                                  Provider& provider, int max_retries = 2,
                                  const Sleeper& sleep = {});

// Response scanning, exposed for tests: the first line whose prefix parses
// as an expression (any trailing text must be a legend continuation), plus
// every `X represents "..."` binding in the text.
std::optional<std::string> extract_expression_line(const std::string& raw_text);
std::vector<SymbolBinding> extract_legend(const std::string& raw_text);

}  // namespace l2l
