#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sncode/group.hpp"
#include "sncode/perfect.hpp"

namespace sncode {

inline constexpr const char* kSchemaId = "sncode/1";
inline constexpr const char* kToolVersion = "1.0.0";

/// Flat, order-stable view of a classification result; the JSON form
/// round-trips losslessly.
struct ReportEnvelope {
    std::string schema = kSchemaId;
    int n = 0;
    std::vector<std::string> generators;
    uint64_t order = 0;
    std::string verdict;                    // "Perfect" | "NotPerfect"
    std::string provenance_kind;            // "oracle" | "theorem" | "reduced+oracle"
    std::string provenance_rule;
    std::vector<std::string> provenance_chain;
    std::vector<TraceEntry> rule_trace;
    std::string certificate_kind;           // "transversal" | "bad_double_coset" | "none"
    std::vector<std::string> certificate_data;  // canonical cycle strings
    std::vector<Discrepancy> discrepancies;
    double timing_ms = 0.0;
    int caps_ambient_degree = 0;
    uint64_t caps_subgroup_elements = 0;
    uint64_t caps_transversal_budget = 0;

    bool operator==(const ReportEnvelope&) const = default;
};

ReportEnvelope make_envelope(const ClassifyReport& rep, const Caps& caps);

std::string envelope_to_json(const ReportEnvelope& e, int indent = 2);
ReportEnvelope envelope_from_json(const std::string& text);

/// Append-only JSONL verdict cache keyed by degree, generators, tool
/// version and caps; a line with a different version or caps never hits.
class VerdictCache {
public:
    explicit VerdictCache(std::string path);

    struct Entry {
        std::string verdict;
        uint64_t certificate_digest = 0;
    };

    std::optional<Entry> lookup(int n, const std::vector<std::string>& generators,
                                const Caps& caps) const;
    void store(int n, const std::vector<std::string>& generators, const Caps& caps,
               const std::string& verdict, uint64_t certificate_digest);

private:
    std::string path_;
};

/// FNV-1a digest of the certificate's canonical cycle strings.
uint64_t certificate_digest(const std::vector<std::string>& certificate_data);

}  // namespace sncode
