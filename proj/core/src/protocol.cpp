#include "aprkit/protocol.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "httplib.h"

namespace aprkit::protocol {

using nlohmann::json;

json hello_request()
{
    return json { { "op", "hello" } };
}

json generate_request(const std::string& id, const std::string& input, std::size_t beam)
{
    return json { { "op", "generate" }, { "id", id }, { "input", input }, { "beam", beam } };
}

json tokenize_request(const std::string& text)
{
    return json { { "op", "tokenize" }, { "text", text } };
}

json encode_hello(const Hello& h)
{
    return json {
        { "checkpoint", h.checkpoint },
        { "max_in", h.max_in },
        { "max_out", h.max_out },
        { "overhead", h.overhead },
        { "bos", h.specials.bos },
        { "eos", h.specials.eos },
        { "pad", h.specials.pad },
        { "unk", h.specials.unk },
    };
}

json encode_candidates(const std::string& id, const std::vector<generation::ScoredText>& candidates)
{
    json list = json::array();
    for (const auto& c : candidates)
        list.push_back(json { { "text", c.text }, { "score", c.score } });
    return json { { "id", id }, { "candidates", std::move(list) } };
}

json encode_ids(const std::vector<TokenId>& ids)
{
    return json { { "ids", ids } };
}

json encode_error(const std::string& message)
{
    return json { { "error", message } };
}

namespace {

void check_not_error(const json& reply)
{
    if (!reply.is_object())
        throw protocol_error("reply is not a JSON object");
    if (reply.contains("error"))
        throw protocol_error("generator error: " + reply["error"].dump());
}

std::size_t non_negative(const json& reply, const char* field)
{
    if (!reply.contains(field) || !reply[field].is_number_integer())
        throw protocol_error(std::string("hello reply lacks integer '") + field + "'");
    auto v = reply[field].get<long long>();
    if (v < 0)
        throw protocol_error(std::string("hello reply has negative '") + field + "'");
    return static_cast<std::size_t>(v);
}

}  // namespace

Hello parse_hello(const json& reply)
{
    check_not_error(reply);
    Hello h;
    if (!reply.contains("checkpoint") || !reply["checkpoint"].is_number_integer())
        throw protocol_error("hello reply lacks integer 'checkpoint'");
    h.checkpoint = reply["checkpoint"].get<int>();
    h.max_in = non_negative(reply, "max_in");
    h.max_out = non_negative(reply, "max_out");
    h.overhead = non_negative(reply, "overhead");
    if (reply.contains("bos"))
        h.specials.bos = reply["bos"].get<TokenId>();
    if (reply.contains("eos"))
        h.specials.eos = reply["eos"].get<TokenId>();
    if (reply.contains("pad"))
        h.specials.pad = reply["pad"].get<TokenId>();
    if (reply.contains("unk"))
        h.specials.unk = reply["unk"].get<TokenId>();
    return h;
}

std::vector<generation::ScoredText> parse_candidates(const json& reply, const std::string& expected_id)
{
    check_not_error(reply);
    if (!reply.contains("id") || !reply["id"].is_string())
        throw protocol_error("generate reply lacks string 'id'");
    if (reply["id"].get<std::string>() != expected_id)
        throw protocol_error("generate reply id mismatch: expected " + expected_id);
    if (!reply.contains("candidates") || !reply["candidates"].is_array())
        throw protocol_error("generate reply lacks 'candidates' array");
    std::vector<generation::ScoredText> out;
    double previous = std::numeric_limits<double>::infinity();
    for (const auto& c : reply["candidates"]) {
        if (!c.is_object() || !c.contains("text") || !c["text"].is_string() || !c.contains("score")
            || !c["score"].is_number())
            throw protocol_error("malformed candidate " + c.dump());
        double score = c["score"].get<double>();
        if (!std::isfinite(score))
            throw protocol_error("non-finite candidate score");
        if (score > previous)
            throw protocol_error("candidates are not sorted by descending score");
        previous = score;
        out.push_back({ c["text"].get<std::string>(), score });
    }
    return out;
}

std::vector<TokenId> parse_ids(const json& reply)
{
    check_not_error(reply);
    if (!reply.contains("ids") || !reply["ids"].is_array())
        throw protocol_error("tokenize reply lacks 'ids' array");
    std::vector<TokenId> ids;
    for (const auto& v : reply["ids"]) {
        if (!v.is_number_integer())
            throw protocol_error("token id is not an integer");
        ids.push_back(v.get<TokenId>());
    }
    return ids;
}

MockBackend::MockBackend(int checkpoint, std::uint64_t seed, std::size_t max_in, std::size_t max_out)
    : checkpoint_(checkpoint)
    , seed_(seed)
    , max_in_(max_in)
    , max_out_(max_out)
{
}

Hello MockBackend::hello()
{
    Hello h;
    h.checkpoint = checkpoint_;
    h.max_in = max_in_;
    h.max_out = max_out_;
    h.overhead = tokenizer_.marker_overhead();
    h.specials = tokenizer_.specials();
    return h;
}

std::vector<generation::ScoredText> MockBackend::generate(const std::string& input, std::size_t beam)
{
    return generation::mock_generate_text(input, beam, seed_);
}

std::vector<TokenId> MockBackend::tokenize(const std::string& text)
{
    return tokenizer_.encode(text);
}

std::string handle_message(Backend& backend, const std::string& line)
{
    try {
        auto msg = json::parse(line);
        if (!msg.is_object() || !msg.contains("op") || !msg["op"].is_string())
            return encode_error("message must be an object with a string 'op'").dump();
        const auto op = msg["op"].get<std::string>();
        if (op == "hello")
            return encode_hello(backend.hello()).dump();
        if (op == "tokenize") {
            if (!msg.contains("text") || !msg["text"].is_string())
                return encode_error("tokenize needs a string 'text'").dump();
            return encode_ids(backend.tokenize(msg["text"].get<std::string>())).dump();
        }
        if (op == "generate") {
            if (!msg.contains("id") || !msg["id"].is_string())
                return encode_error("generate needs a string 'id'").dump();
            if (!msg.contains("input") || !msg["input"].is_string())
                return encode_error("generate needs a string 'input'").dump();
            if (!msg.contains("beam") || !msg["beam"].is_number_integer() || msg["beam"].get<long long>() < 1)
                return encode_error("generate needs a positive integer 'beam'").dump();
            auto id = msg["id"].get<std::string>();
            auto cands = backend.generate(msg["input"].get<std::string>(), msg["beam"].get<std::size_t>());
            return encode_candidates(id, cands).dump();
        }
        return encode_error("unknown op '" + op + "'").dump();
    } catch (const std::exception& e) {
        return encode_error(e.what()).dump();
    }
}

void serve_stdio(Backend& backend, std::istream& in, std::ostream& out)
{
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        out << handle_message(backend, line) << '\n';
        out.flush();
    }
}

void serve_http(Backend& backend, const std::string& host, int port, const std::function<void(int)>& on_ready)
{
    httplib::Server server;
    std::mutex one_at_a_time;
    server.Post("/rpc", [&](const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(one_at_a_time);
        res.set_content(handle_message(backend, req.body), "application/json");
    });
    int bound = port;
    if (port == 0) {
        bound = server.bind_to_any_port(host);
    } else if (!server.bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound < 0)
        throw protocol_error("cannot bind " + host + ":" + std::to_string(port));
    if (on_ready)
        on_ready(bound);
    server.listen_after_bind();
}

StdioTransport::StdioTransport(const std::string& command, std::chrono::milliseconds timeout)
    : command_(command)
    , timeout_(timeout)
    , child_(proc::LineChild::spawn(command))
{
}

json StdioTransport::request(const json& message)
{
    std::lock_guard lock(mutex_);
    child_.write_line(message.dump());
    auto line = child_.read_line(timeout_);
    if (!line)
        throw protocol_error("no reply from generator process '" + command_ + "'");
    try {
        return json::parse(*line);
    } catch (const json::exception& e) {
        throw protocol_error("unparseable reply: " + std::string(e.what()));
    }
}

struct HttpTransport::Impl {
    httplib::Client client;

    explicit Impl(const std::string& base)
        : client(base)
    {
    }
};

HttpTransport::HttpTransport(const std::string& base_url, std::chrono::seconds timeout)
    : base_url_(base_url)
    , impl_(std::make_unique<Impl>(base_url))
{
    impl_->client.set_read_timeout(static_cast<time_t>(timeout.count()), 0);
    impl_->client.set_connection_timeout(5, 0);
}

HttpTransport::~HttpTransport() = default;

json HttpTransport::request(const json& message)
{
    std::lock_guard lock(mutex_);
    auto res = impl_->client.Post("/rpc", message.dump(), "application/json");
    if (!res)
        throw protocol_error("HTTP request to " + base_url_ + " failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw protocol_error("HTTP status " + std::to_string(res->status) + " from " + base_url_);
    try {
        return json::parse(res->body);
    } catch (const json::exception& e) {
        throw protocol_error("unparseable reply: " + std::string(e.what()));
    }
}

std::shared_ptr<Transport> make_transport(const std::string& spec)
{
    if (spec.rfind("exec:", 0) == 0)
        return std::make_shared<StdioTransport>(spec.substr(5));
    if (spec.rfind("http://", 0) == 0)
        return std::make_shared<HttpTransport>(spec);
    throw std::invalid_argument("generator spec must start with 'exec:' or 'http://': " + spec);
}

RemoteGenerator::RemoteGenerator(std::shared_ptr<Transport> transport)
    : transport_(std::move(transport))
    , hello_(parse_hello(transport_->request(hello_request())))
{
}

std::vector<CandidatePatch> RemoteGenerator::generate(const encoding::EncodedSample& sample, std::size_t beam)
{
    auto id = std::to_string(next_id_++);
    auto reply = transport_->request(generate_request(id, sample.input_text, beam));
    auto scored = parse_candidates(reply, id);
    if (scored.size() > beam)
        throw protocol_error("generator returned more candidates than the beam size");
    std::vector<CandidatePatch> out;
    out.reserve(scored.size());
    for (std::size_t i = 0; i < scored.size(); ++i) {
        CandidatePatch c;
        c.text = std::move(scored[i].text);
        c.score = scored[i].score;
        c.rank = i + 1;
        out.push_back(std::move(c));
    }
    return out;
}

RemoteTokenizer::RemoteTokenizer(std::shared_ptr<Transport> transport)
    : transport_(std::move(transport))
    , hello_(parse_hello(transport_->request(hello_request())))
{
}

std::vector<TokenId> RemoteTokenizer::encode(std::string_view text) const
{
    try {
        return parse_ids(transport_->request(tokenize_request(std::string(text))));
    } catch (const std::exception& e) {
        throw tokenizer_error(e.what());
    }
}

}  // namespace aprkit::protocol
