#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "aprkit/generation.hpp"
#include "aprkit/mock_generator.hpp"
#include "aprkit/subprocess.hpp"
#include "aprkit/tokenizer.hpp"

namespace aprkit::protocol {

// Generator wire protocol. One JSON object per message; the stdio framing
// puts one message per line, the HTTP framing POSTs the same object to
// /rpc and reads the reply from the response body.
//
//   {"op":"hello"}
//     -> {"checkpoint":int,"max_in":int,"max_out":int,"overhead":int}
//   {"op":"generate","id":str,"input":text,"beam":int}
//     -> {"id":str,"candidates":[{"text":str,"score":float},...]}  (descending score)
//   {"op":"tokenize","text":str}
//     -> {"ids":[int,...]}
//
// Malformed requests get {"error":str}; the connection stays up.

class protocol_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Hello {
    int checkpoint = 0;
    std::size_t max_in = 512;
    std::size_t max_out = 256;
    std::size_t overhead = 2;
    // Optional extension fields; RoBERTa-style ids are assumed when absent.
    SpecialTokens specials { 0, 2, 1, 3 };
};

nlohmann::json hello_request();
nlohmann::json generate_request(const std::string& id, const std::string& input, std::size_t beam);
nlohmann::json tokenize_request(const std::string& text);

nlohmann::json encode_hello(const Hello& hello);
nlohmann::json encode_candidates(const std::string& id, const std::vector<generation::ScoredText>& candidates);
nlohmann::json encode_ids(const std::vector<TokenId>& ids);
nlohmann::json encode_error(const std::string& message);

/// The parse_* functions validate schema and throw protocol_error.
Hello parse_hello(const nlohmann::json& reply);
std::vector<generation::ScoredText> parse_candidates(const nlohmann::json& reply, const std::string& expected_id);
std::vector<TokenId> parse_ids(const nlohmann::json& reply);

/// What a protocol server exposes.
class Backend {
public:
    virtual ~Backend() = default;
    virtual Hello hello() = 0;
    virtual std::vector<generation::ScoredText> generate(const std::string& input, std::size_t beam) = 0;
    virtual std::vector<TokenId> tokenize(const std::string& text) = 0;
};

/// Mock checkpoint served over the protocol, used for conformance testing.
class MockBackend final : public Backend {
public:
    MockBackend(int checkpoint, std::uint64_t seed, std::size_t max_in = 512, std::size_t max_out = 256);

    Hello hello() override;
    std::vector<generation::ScoredText> generate(const std::string& input, std::size_t beam) override;
    std::vector<TokenId> tokenize(const std::string& text) override;

private:
    int checkpoint_;
    std::uint64_t seed_;
    std::size_t max_in_;
    std::size_t max_out_;
    WhitespaceTokenizer tokenizer_;
};

/// Answers one request line; never throws.
std::string handle_message(Backend& backend, const std::string& line);

/// Serves line-delimited messages until EOF on `in`.
void serve_stdio(Backend& backend, std::istream& in, std::ostream& out);

/// Serves POST /rpc on host:port until the process is stopped. port 0 picks
/// a free port; `on_ready` receives the bound port before serving starts.
void serve_http(Backend& backend, const std::string& host, int port,
                const std::function<void(int)>& on_ready = {});

/// Request/reply channel to one generator process. Serializes callers.
class Transport {
public:
    virtual ~Transport() = default;
    virtual nlohmann::json request(const nlohmann::json& message) = 0;
    virtual std::string describe() const = 0;
};

/// Spawns `command` and talks over its stdin/stdout.
class StdioTransport final : public Transport {
public:
    explicit StdioTransport(const std::string& command, std::chrono::milliseconds timeout = std::chrono::minutes(10));

    nlohmann::json request(const nlohmann::json& message) override;
    std::string describe() const override { return "exec:" + command_; }

private:
    std::string command_;
    std::chrono::milliseconds timeout_;
    std::mutex mutex_;
    proc::LineChild child_;
};

/// POSTs to <base_url>/rpc, e.g. base_url = "http://127.0.0.1:8601".
class HttpTransport final : public Transport {
public:
    explicit HttpTransport(const std::string& base_url, std::chrono::seconds timeout = std::chrono::minutes(10));
    ~HttpTransport() override;

    nlohmann::json request(const nlohmann::json& message) override;
    std::string describe() const override { return base_url_; }

private:
    struct Impl;
    std::string base_url_;
    std::mutex mutex_;
    std::unique_ptr<Impl> impl_;
};

/// Creates a transport from "exec:<command>" or "http://host:port".
std::shared_ptr<Transport> make_transport(const std::string& spec);

/// A checkpoint living in another process.
class RemoteGenerator final : public generation::PatchGenerator {
public:
    explicit RemoteGenerator(std::shared_ptr<Transport> transport);

    const Hello& hello() const { return hello_; }

    std::vector<CandidatePatch> generate(const encoding::EncodedSample& sample, std::size_t beam) override;
    std::string describe() const override { return transport_->describe(); }

private:
    std::shared_ptr<Transport> transport_;
    Hello hello_;
    std::uint64_t next_id_ = 0;
};

/// Tokenizer served by a generator process through the tokenize op. Cannot decode.
class RemoteTokenizer final : public Tokenizer {
public:
    explicit RemoteTokenizer(std::shared_ptr<Transport> transport);

    std::vector<TokenId> encode(std::string_view text) const override;
    std::optional<std::string> decode(std::span<const TokenId>) const override { return std::nullopt; }
    SpecialTokens specials() const override { return hello_.specials; }
    std::size_t marker_overhead() const override { return hello_.overhead; }

private:
    std::shared_ptr<Transport> transport_;
    Hello hello_;
};

}  // namespace aprkit::protocol
