#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "dlec/connectors.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace dlec::connectors {

namespace {

// scheme://host[:port] and the rest
struct SplitUrl {
    std::string origin;
    std::string path;
    std::string host;
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw TransportError("malformed url: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    SplitUrl s;
    s.origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    s.path = path_start == std::string::npos ? "/" : url.substr(path_start);
    s.host = s.origin.substr(scheme_end + 3);
    if (const auto colon = s.host.find(':'); colon != std::string::npos)
        s.host = s.host.substr(0, colon);
    return s;
}

double parse_numeric(const std::string& text, const std::string& source_id) {
    try {
        std::size_t consumed = 0;
        const double v = std::stod(text, &consumed);
        while (consumed < text.size() &&
               std::isspace(static_cast<unsigned char>(text[consumed])))
            ++consumed;
        if (consumed != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ExtractedValueError("source '" + source_id + "': extracted text '" + text +
                                  "' is not numeric");
    }
}

double extract_value(const SourceDescriptor& desc, const std::string& body) {
    return std::visit(
        [&](const auto& rule) -> double {
            using T = std::decay_t<decltype(rule)>;
            if constexpr (std::is_same_v<T, JsonPointerRule>) {
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(body);
                } catch (const nlohmann::json::parse_error&) {
                    throw ExtractionError("source '" + desc.id +
                                          "': response body is not valid JSON");
                }
                nlohmann::json value;
                try {
                    value = j.at(nlohmann::json::json_pointer(rule.pointer));
                } catch (const nlohmann::json::exception&) {
                    throw ExtractionError("source '" + desc.id + "': pointer '" + rule.pointer +
                                          "' matched nothing");
                }
                if (value.is_number()) return value.get<double>();
                if (value.is_string()) return parse_numeric(value.get<std::string>(), desc.id);
                throw ExtractedValueError("source '" + desc.id + "': pointer '" + rule.pointer +
                                          "' is not a numeric field");
            } else if constexpr (std::is_same_v<T, RegexRule>) {
                std::smatch m;
                if (!std::regex_search(body, m, std::regex(rule.pattern)) || m.size() < 2)
                    throw ExtractionError("source '" + desc.id + "': pattern matched nothing");
                return parse_numeric(m[1].str(), desc.id);
            } else {
                throw ExtractionError("source '" + desc.id +
                                      "' is marked manual (value rendered client-side); "
                                      "refusing to fetch");
            }
        },
        desc.extraction);
}

}  // namespace

std::string digest(const std::string& body) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : body) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

FixtureTransport::FixtureTransport(std::filesystem::path fixture_dir,
                                   const std::vector<SourceDescriptor>& sources)
    : dir_(std::move(fixture_dir)) {
    for (const auto& s : sources) url_to_source_id_.emplace(s.url, s.id);
}

std::string FixtureTransport::get(const std::string& url) {
    auto it = url_to_source_id_.find(url);
    if (it == url_to_source_id_.end())
        throw TransportError("no fixture recorded for url " + url);
    const auto path = dir_ / (it->second + ".body");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TransportError("fixture file missing: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct HttpTransport::Impl {
    std::chrono::seconds timeout;
    std::mutex table_mutex;
    struct HostState {
        std::mutex in_flight;
        std::chrono::steady_clock::time_point last_request{};
    };
    std::map<std::string, std::unique_ptr<HostState>> hosts;

    HostState& host_state(const std::string& host) {
        std::lock_guard lock(table_mutex);
        auto& slot = hosts[host];
        if (!slot) slot = std::make_unique<HostState>();
        return *slot;
    }
};

HttpTransport::HttpTransport(std::chrono::seconds timeout) : impl_(std::make_unique<Impl>()) {
    impl_->timeout = timeout;
}

HttpTransport::~HttpTransport() = default;

std::string HttpTransport::get(const std::string& url) {
    const auto parts = split_url(url);
    auto& host = impl_->host_state(parts.host);

    // One request per host at a time, at least 1 s apart.
    std::lock_guard host_lock(host.in_flight);
    const auto now = std::chrono::steady_clock::now();
    const auto earliest = host.last_request + std::chrono::seconds(1);
    if (host.last_request.time_since_epoch().count() != 0 && now < earliest)
        std::this_thread::sleep_for(earliest - now);

    std::string last_error;
    for (int attempt = 0; attempt < 2; ++attempt) {
        httplib::Client client(parts.origin);
        client.set_follow_location(true);
        client.set_connection_timeout(impl_->timeout);
        client.set_read_timeout(impl_->timeout);
        client.set_default_headers({{"User-Agent", "dlec/1.0 (energy model data collector)"}});
        auto res = client.Get(parts.path);
        host.last_request = std::chrono::steady_clock::now();
        if (res && res->status >= 200 && res->status < 300) return res->body;
        last_error = res ? "http status " + std::to_string(res->status)
                         : "transport failure (" + httplib::to_string(res.error()) + ")";
    }
    throw TransportError("GET " + url + " failed: " + last_error);
}

FetchResult fetch(const SourceDescriptor& desc, Transport& transport,
                  const std::string& observed_at) {
    if (std::holds_alternative<ManualRule>(desc.extraction))
        throw ExtractionError("source '" + desc.id +
                              "': marked manual, value cannot be extracted from a body");
    const std::string body = transport.get(desc.url);
    double value = extract_value(desc, body);
    if (desc.post_scale) value *= *desc.post_scale;
    if (!std::isfinite(value) || value < 0.0)
        throw ExtractedValueError("source '" + desc.id + "': value " + std::to_string(value) +
                                  " is outside [0, inf)");
    return FetchResult{.source_id = desc.id,
                       .observed_at = observed_at,
                       .value = value,
                       .raw_hash = digest(body)};
}

std::vector<FetchResult> fetch_all(const std::vector<SourceDescriptor>& descs,
                                   Transport& transport, const std::string& observed_at,
                                   std::vector<std::string>* errors, unsigned parallelism) {
    std::vector<FetchResult> results;
    std::mutex out_mutex;
    std::atomic<std::size_t> next{0};

    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= descs.size()) return;
            try {
                auto r = fetch(descs[i], transport, observed_at);
                std::lock_guard lock(out_mutex);
                results.push_back(std::move(r));
            } catch (const Error& e) {
                std::lock_guard lock(out_mutex);
                if (errors) errors->push_back(e.what());
            }
        }
    };

    const unsigned n_threads =
        std::min<std::size_t>(std::max(1u, parallelism), descs.size());
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    // Deterministic output order regardless of completion order.
    std::sort(results.begin(), results.end(),
              [](const FetchResult& a, const FetchResult& b) { return a.source_id < b.source_id; });
    return results;
}

Dataset snapshot(const std::vector<FetchResult>& results, const Dataset& dataset,
                 const Date& snapshot_date) {
    Dataset out = dataset;
    out.snapshot_date = snapshot_date;
    for (const auto& r : results) {
        const SourceDescriptor* desc = nullptr;
        for (const auto& s : dataset.sources)
            if (s.id == r.source_id) desc = &s;
        if (!desc) throw UnknownNetworkError("result for unknown source '" + r.source_id + "'");
        NetworkProfile* network = nullptr;
        for (auto& n : out.networks)
            if (n.id == desc->network_id) network = &n;
        if (!network)
            throw UnknownNetworkError("source '" + desc->id + "' names unknown network '" +
                                      desc->network_id + "'");
        if (desc->metric == SourceMetric::validator_count) {
            network->n_val = static_cast<std::uint64_t>(std::llround(r.value));
        } else {
            double tps = r.value;
            if (desc->metric == SourceMetric::tx_per_day) tps = r.value / kSecondsPerDay;
            network->tps_contemporary = tps;
        }
    }
    return out;
}

}  // namespace dlec::connectors
