#include "sncode/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sncode {

namespace {

using nlohmann::json;

const char* provenance_kind_name(ProvenanceKind k) {
    switch (k) {
        case ProvenanceKind::OracleProven: return "oracle";
        case ProvenanceKind::TheoremFastPath: return "theorem";
        case ProvenanceKind::ReducedThenOracle: return "reduced+oracle";
    }
    return "?";
}

std::string cache_key(int n, const std::vector<std::string>& generators, const Caps& caps) {
    std::vector<std::string> gens = generators;
    std::sort(gens.begin(), gens.end());
    std::ostringstream os;
    os << n << '|';
    for (const auto& g : gens) os << g << ';';
    os << '|' << kToolVersion << '|' << caps.ambient_degree_cap << ','
       << caps.subgroup_element_cap << ',' << caps.transversal_node_budget;
    return os.str();
}

}  // namespace

uint64_t certificate_digest(const std::vector<std::string>& certificate_data) {
    uint64_t h = 14695981039346656037ULL;
    for (const auto& s : certificate_data) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0xff;
        h *= 1099511628211ULL;
    }
    return h;
}

ReportEnvelope make_envelope(const ClassifyReport& rep, const Caps& caps) {
    ReportEnvelope e;
    e.n = rep.n;
    e.generators = rep.generators;
    e.order = rep.order;
    e.verdict = status_name(rep.verdict.status);
    e.provenance_kind = provenance_kind_name(rep.verdict.provenance.kind);
    e.provenance_rule = rep.verdict.provenance.rule;
    e.provenance_chain = rep.verdict.provenance.chain;
    e.rule_trace = rep.rule_trace;
    if (rep.certificate) {
        if (const auto* t = std::get_if<Transversal>(&*rep.certificate)) {
            e.certificate_kind = "transversal";
            for (const auto& p : t->representatives) e.certificate_data.push_back(format_cycles(p));
        } else {
            e.certificate_kind = "bad_double_coset";
            e.certificate_data.push_back(
                format_cycles(std::get<BadDoubleCoset>(*rep.certificate).representative));
        }
    } else {
        e.certificate_kind = "none";
    }
    e.discrepancies = rep.discrepancies;
    e.timing_ms = rep.timing_ms;
    e.caps_ambient_degree = caps.ambient_degree_cap;
    e.caps_subgroup_elements = caps.subgroup_element_cap;
    e.caps_transversal_budget = caps.transversal_node_budget;
    return e;
}

std::string envelope_to_json(const ReportEnvelope& e, int indent) {
    json trace = json::array();
    for (const auto& t : e.rule_trace)
        trace.push_back({{"rule", t.rule}, {"inputs", t.inputs}, {"outcome", t.outcome}});
    json disc = json::array();
    for (const auto& d : e.discrepancies)
        disc.push_back({{"source", d.source},
                        {"fast_verdict", d.fast_verdict},
                        {"oracle_verdict", d.oracle_verdict}});
    json j{{"schema", e.schema},
           {"n", e.n},
           {"generators", e.generators},
           {"order", e.order},
           {"verdict", e.verdict},
           {"provenance",
            {{"kind", e.provenance_kind}, {"rule", e.provenance_rule}, {"chain", e.provenance_chain}}},
           {"rule_trace", trace},
           {"certificate", {{"kind", e.certificate_kind}, {"data", e.certificate_data}}},
           {"discrepancies", disc},
           {"timing_ms", e.timing_ms},
           {"caps",
            {{"ambient_degree", e.caps_ambient_degree},
             {"subgroup_elements", e.caps_subgroup_elements},
             {"transversal_budget", e.caps_transversal_budget}}}};
    return j.dump(indent);
}

ReportEnvelope envelope_from_json(const std::string& text) {
    const json j = json::parse(text);
    ReportEnvelope e;
    e.schema = j.at("schema").get<std::string>();
    if (e.schema != kSchemaId) throw std::invalid_argument("unknown report schema: " + e.schema);
    e.n = j.at("n").get<int>();
    e.generators = j.at("generators").get<std::vector<std::string>>();
    e.order = j.at("order").get<uint64_t>();
    e.verdict = j.at("verdict").get<std::string>();
    const auto& prov = j.at("provenance");
    e.provenance_kind = prov.at("kind").get<std::string>();
    e.provenance_rule = prov.at("rule").get<std::string>();
    e.provenance_chain = prov.at("chain").get<std::vector<std::string>>();
    for (const auto& t : j.at("rule_trace"))
        e.rule_trace.push_back({t.at("rule").get<std::string>(), t.at("inputs").get<std::string>(),
                                t.at("outcome").get<std::string>()});
    const auto& cert = j.at("certificate");
    e.certificate_kind = cert.at("kind").get<std::string>();
    e.certificate_data = cert.at("data").get<std::vector<std::string>>();
    for (const auto& d : j.at("discrepancies"))
        e.discrepancies.push_back({d.at("source").get<std::string>(),
                                   d.at("fast_verdict").get<std::string>(),
                                   d.at("oracle_verdict").get<std::string>()});
    e.timing_ms = j.at("timing_ms").get<double>();
    const auto& caps = j.at("caps");
    e.caps_ambient_degree = caps.at("ambient_degree").get<int>();
    e.caps_subgroup_elements = caps.at("subgroup_elements").get<uint64_t>();
    e.caps_transversal_budget = caps.at("transversal_budget").get<uint64_t>();
    return e;
}

VerdictCache::VerdictCache(std::string path) : path_(std::move(path)) {}

std::optional<VerdictCache::Entry> VerdictCache::lookup(int n,
                                                        const std::vector<std::string>& generators,
                                                        const Caps& caps) const {
    std::ifstream in(path_);
    if (!in) return std::nullopt;
    const std::string key = cache_key(n, generators, caps);
    std::optional<Entry> found;  // last line wins
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error&) {
            continue;  // tolerate a torn trailing line
        }
        if (j.value("key", std::string{}) != key) continue;
        found = Entry{j.at("verdict").get<std::string>(), j.at("digest").get<uint64_t>()};
    }
    return found;
}

void VerdictCache::store(int n, const std::vector<std::string>& generators, const Caps& caps,
                         const std::string& verdict, uint64_t digest) {
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("cannot open cache file: " + path_);
    json j{{"key", cache_key(n, generators, caps)}, {"verdict", verdict}, {"digest", digest}};
    out << j.dump() << '\n';
}

}  // namespace sncode
