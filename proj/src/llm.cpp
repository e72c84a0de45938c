#include "l2l/llm.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "l2l/embedded_assets.hpp"

// httplib spawns no server here; client-only use.
#include <httplib.h>

namespace l2l {

// ── MockProvider ────────────────────────────────────────────────────────────

void MockProvider::set_response(std::string sentence, std::string response) {
    responses_[std::move(sentence)] = std::move(response);
}

void MockProvider::fail_on_calls(std::vector<int> calls) { fail_calls_ = std::move(calls); }

MockProvider MockProvider::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open fixture file: " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    MockProvider mock;
    const nlohmann::json& responses =
        doc.is_object() && doc.contains("responses") ? doc.at("responses") : doc;
    for (const auto& [sentence, response] : responses.items())
        mock.set_response(sentence, response.get<std::string>());
    if (doc.is_object() && doc.contains("fail_calls"))
        mock.fail_on_calls(doc.at("fail_calls").get<std::vector<int>>());
    return mock;
}

namespace {

// The template ends with "Sentence: <text>"; everything after the last
// marker is the sentence.
std::string sentence_from_prompt(const std::string& prompt) {
    static constexpr std::string_view kMarker = "Sentence: ";
    std::size_t pos = prompt.rfind(kMarker);
    if (pos == std::string::npos) return {};
    std::string s = prompt.substr(pos + kMarker.size());
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' '))
        s.pop_back();
    return s;
}

}  // namespace

std::string MockProvider::respond(const std::string& prompt) {
    ++calls_;
    for (int f : fail_calls_)
        if (f == calls_) throw TransportError("scripted failure on call " + std::to_string(f));
    std::string sentence = sentence_from_prompt(prompt);
    auto it = responses_.find(sentence);
    if (it != responses_.end()) return it->second;
    // Echo default: the whole sentence as a single fresh proposition.
    return "P\nwhere P represents \"" + sentence + "\"";
}

// ── HttpProvider ────────────────────────────────────────────────────────────

namespace {

HttpResult httplib_transport(const HttpRequest& req) {
    // Split scheme://host[:port]/path for httplib.
    std::string url = req.url;
    std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw TransportError("bad base url: " + req.url);
    std::size_t path_start = url.find('/', scheme_end + 3);
    std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(std::chrono::milliseconds(
        static_cast<long long>(req.timeout_seconds * 1000)));
    client.set_read_timeout(std::chrono::milliseconds(
        static_cast<long long>(req.timeout_seconds * 1000)));
    httplib::Headers headers;
    for (const auto& [k, v] : req.headers) headers.emplace(k, v);
    auto result = client.Post(path, headers, req.body, "application/json");
    if (!result) throw TransportError("http request failed: " + httplib::to_string(result.error()));
    return HttpResult{result->status, result->body};
}

}  // namespace

HttpProvider::HttpProvider(ProviderConfig config, HttpTransport transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
    if (!transport_) transport_ = httplib_transport;
}

std::string HttpProvider::respond(const std::string& prompt) {
    nlohmann::json body = {
        {"model", config_.model_name},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
    };
    HttpRequest req;
    req.url = config_.base_url;
    req.body = body.dump();
    req.timeout_seconds = config_.timeout_seconds;
    // The key is resolved per request and lives only on this stack frame.
    if (const char* key = std::getenv(config_.api_key_env_var.c_str()); key && *key)
        req.headers.emplace_back("Authorization", std::string("Bearer ") + key);

    HttpResult res = transport_(req);
    if (res.status == 401 || res.status == 403)
        throw AuthError("authentication rejected (HTTP " + std::to_string(res.status) + ")");
    if (res.status >= 500 || res.status == 0)
        throw TransportError("server failure (HTTP " + std::to_string(res.status) + ")");
    if (res.status != 200)
        throw TransportError("unexpected HTTP status " + std::to_string(res.status));
    try {
        nlohmann::json doc = nlohmann::json::parse(res.body);
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("malformed completion response: ") + e.what());
    }
}

// ── Prompt ──────────────────────────────────────────────────────────────────

namespace {

std::string replace_all(std::string text, std::string_view needle, std::string_view with) {
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), with);
        pos += with.size();
    }
    return text;
}

}  // namespace

std::string build_prompt(std::string_view sentence,
                         std::span<const SymbolBinding> known_atoms) {
    std::string known;
    if (known_atoms.empty()) {
        known = "  (none)";
    } else {
        for (const auto& [symbol, phrase] : known_atoms) {
            if (!known.empty()) known += '\n';
            known += "  " + symbol + " = \"" + phrase + "\"";
        }
    }
    std::string prompt(assets::kPromptTemplate);
    prompt = replace_all(std::move(prompt), "{{KNOWN_ATOMS}}", known);
    prompt = replace_all(std::move(prompt), "{{SENTENCE}}", sentence);
    return prompt;
}

// ── Response scanning ───────────────────────────────────────────────────────

std::optional<std::string> extract_expression_line(const std::string& raw_text) {
    std::istringstream in(raw_text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        AtomTable scratch;
        auto prefix = try_parse_prefix(line, scratch, SymbolMode::register_new);
        if (!prefix) continue;
        std::string_view rest = std::string_view(line).substr(prefix->consumed);
        while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t'))
            rest.remove_prefix(1);
        if (!rest.empty() && rest.front() == ',') {
            rest.remove_prefix(1);
            while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
        }
        // Only a legend continuation may follow the expression on its line.
        if (!rest.empty() && rest.substr(0, 5) != "where" && rest.substr(0, 5) != "Where")
            continue;
        std::string expr = line.substr(0, prefix->consumed);
        while (!expr.empty() && (expr.front() == ' ' || expr.front() == '\t'))
            expr.erase(expr.begin());
        return expr;
    }
    return std::nullopt;
}

std::vector<SymbolBinding> extract_legend(const std::string& raw_text) {
    static const std::regex kBinding(
        R"re(([A-Za-z][A-Za-z0-9_]*)\s+represents\s+"([^"]*)")re");
    std::vector<SymbolBinding> legend;
    auto begin = std::sregex_iterator(raw_text.begin(), raw_text.end(), kBinding);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        std::string symbol = (*it)[1].str();
        bool seen = false;
        for (const auto& [s, _] : legend)
            if (s == symbol) seen = true;
        if (!seen) legend.emplace_back(symbol, (*it)[2].str());  // first binding wins
    }
    return legend;
}

// ── translate_sentence ──────────────────────────────────────────────────────

LlmTranslation translate_sentence(std::string_view sentence,
                                  std::span<const SymbolBinding> known_atoms,
                                  Provider& provider, int max_retries, const Sleeper& sleep) {
    const std::string prompt = build_prompt(sentence, known_atoms);
    auto do_sleep = [&](double seconds) {
        if (sleep)
            sleep(seconds);
        else
            std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    };

    std::string raw;
    double backoff = 1.0;
    for (int attempt = 0;; ++attempt) {
        try {
            raw = provider.respond(prompt);
            break;
        } catch (const TransportError&) {
            if (attempt >= max_retries) throw;
            do_sleep(backoff);
            backoff *= 2.0;
        }
    }

    LlmTranslation t;
    t.raw_text = raw;
    auto expr = extract_expression_line(raw);
    if (!expr) throw NoExpressionFoundError(raw);
    t.expr_text = *expr;
    t.legend = extract_legend(raw);
    return t;
}

}  // namespace l2l
