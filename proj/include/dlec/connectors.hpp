#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dlec/catalog.hpp"
#include "dlec/source_descriptor.hpp"

// Retrieval of current validator counts and throughput from public chain
// explorers. Transport is an injected capability: tests and the default CLI
// mode replay recorded response bodies, live HTTP is opt-in.

namespace dlec {

struct FetchResult {
    std::string source_id;
    std::string observed_at;  // ISO-8601 date
    double value = 0.0;
    std::string raw_hash;  // hex digest of the raw response body
};

namespace connectors {

/// Abstract HTTP-get capability. Implementations must follow redirects and
/// throw TransportError on failure.
class Transport {
  public:
    virtual ~Transport() = default;
    virtual std::string get(const std::string& url) = 0;
};

/// Replays recorded response bodies from a fixture directory: one file per
/// source id, named `<source_id>.body`, keyed back to URLs via the source
/// descriptors.
class FixtureTransport : public Transport {
  public:
    FixtureTransport(std::filesystem::path fixture_dir,
                     const std::vector<SourceDescriptor>& sources);
    std::string get(const std::string& url) override;

  private:
    std::filesystem::path dir_;
    std::map<std::string, std::string> url_to_source_id_;
};

/// Live HTTP transport with a timeout, one retry, and per-host politeness
/// (serialized requests, at least 1 s apart).
class HttpTransport : public Transport {
  public:
    explicit HttpTransport(std::chrono::seconds timeout = std::chrono::seconds(10));
    ~HttpTransport() override;
    std::string get(const std::string& url) override;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Hex FNV-1a 64-bit digest; identifies a raw body across replays.
std::string digest(const std::string& body);

/// Retrieve one value: GET the descriptor's URL, apply its extraction rule
/// and post-scale. `observed_at` is injected for determinism. Sources with a
/// manual extraction rule are refused (ExtractionError).
FetchResult fetch(const SourceDescriptor& desc, Transport& transport,
                  const std::string& observed_at);

/// Fetch every descriptor, at most `parallelism` requests in flight and
/// never more than one per host. Partial failures are reported in `errors`
/// (one message per failed source); successful results are still returned.
std::vector<FetchResult> fetch_all(const std::vector<SourceDescriptor>& descs,
                                   Transport& transport, const std::string& observed_at,
                                   std::vector<std::string>* errors = nullptr,
                                   unsigned parallelism = 4);

/// New dataset with n_val / tps_contemporary updated from the results and
/// the snapshot date refreshed. The input dataset is not modified.
Dataset snapshot(const std::vector<FetchResult>& results, const Dataset& dataset,
                 const Date& snapshot_date);

}  // namespace connectors
}  // namespace dlec
