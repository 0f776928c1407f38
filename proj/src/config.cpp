#include "factcheck/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "factcheck/errors.hpp"
#include "factcheck/text.hpp"

namespace factcheck::config {

namespace {

std::size_t to_size(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size() || v < 0) throw std::invalid_argument(value);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a non-negative integer, got \"" + value + "\"");
    }
}

double to_real(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got \"" + value + "\"");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    const auto v = text::to_lower_ascii(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": expected a boolean, got \"" + value + "\"");
}

using Setter = void (*)(AppConfig&, const std::string&, const std::string&);

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"retrieval.max_chars", [](AppConfig& c, const std::string& k, const std::string& v) { c.retrieval.max_chars = to_size(k, v); }},
        {"retrieval.omega",
         [](AppConfig& c, const std::string& k, const std::string& v) {
             c.retrieval.omega = to_size(k, v);
             c.omega_explicit = true;
         }},
        {"retrieval.pool_size", [](AppConfig& c, const std::string& k, const std::string& v) { c.retrieval.pool_size = to_size(k, v); }},
        {"retrieval.k", [](AppConfig& c, const std::string& k, const std::string& v) { c.retrieval.k = to_size(k, v); }},
        {"retrieval.lambda", [](AppConfig& c, const std::string& k, const std::string& v) { c.retrieval.lambda = to_real(k, v); }},
        {"retrieval.k1", [](AppConfig& c, const std::string& k, const std::string& v) { c.retrieval.bm25.k1 = to_real(k, v); }},
        {"retrieval.b", [](AppConfig& c, const std::string& k, const std::string& v) { c.retrieval.bm25.b = to_real(k, v); }},
        {"retrieval.split",
         [](AppConfig& c, const std::string& k, const std::string& v) {
             if (v != "dev" && v != "test") throw ConfigError(k + ": expected dev or test");
             c.split = v;
         }},
        {"generator.l", [](AppConfig& c, const std::string& k, const std::string& v) { c.generator.l = to_size(k, v); }},
        {"generator.fewshot_count", [](AppConfig& c, const std::string& k, const std::string& v) { c.generator.fewshot_count = to_size(k, v); }},
        {"generator.max_retries", [](AppConfig& c, const std::string& k, const std::string& v) { c.generator.max_retries = to_size(k, v); }},
        {"generator.simplified", [](AppConfig& c, const std::string& k, const std::string& v) { c.generator.simplified = to_bool(k, v); }},
        {"generator.provider",
         [](AppConfig& c, const std::string& k, const std::string& v) {
             if (v == "http")
                 c.chat.kind = ChatProviderKind::Http;
             else if (v == "mock")
                 c.chat.kind = ChatProviderKind::Mock;
             else if (v == "echo")
                 c.chat.kind = ChatProviderKind::Echo;
             else
                 throw ConfigError(k + ": expected http, mock or echo");
         }},
        {"generator.model_name", [](AppConfig& c, const std::string&, const std::string& v) { c.chat.model_name = v; }},
        {"generator.base_url", [](AppConfig& c, const std::string&, const std::string& v) { c.chat.base_url = v; }},
        {"generator.temperature",
         [](AppConfig& c, const std::string& k, const std::string& v) {
             if (v.empty())
                 c.chat.temperature.reset();
             else
                 c.chat.temperature = to_real(k, v);
         }},
        {"generator.api_key_env", [](AppConfig& c, const std::string&, const std::string& v) { c.chat.api_key_env = v; }},
        {"generator.timeout_s", [](AppConfig& c, const std::string& k, const std::string& v) { c.chat.timeout_s = to_real(k, v); }},
        {"generator.mock_script", [](AppConfig& c, const std::string&, const std::string& v) { c.chat.mock_script = v; }},
        {"embedding.kind",
         [](AppConfig& c, const std::string& k, const std::string& v) {
             if (v == "http")
                 c.embedding.kind = embedding::ProviderKind::Http;
             else if (v == "mock")
                 c.embedding.kind = embedding::ProviderKind::Mock;
             else
                 throw ConfigError(k + ": expected http or mock");
         }},
        {"embedding.base_url", [](AppConfig& c, const std::string&, const std::string& v) { c.embedding.base_url = v; }},
        {"embedding.model_name", [](AppConfig& c, const std::string&, const std::string& v) { c.embedding.model_name = v; }},
        {"embedding.batch_size", [](AppConfig& c, const std::string& k, const std::string& v) { c.embedding.batch_size = to_size(k, v); }},
        {"embedding.timeout_s", [](AppConfig& c, const std::string& k, const std::string& v) { c.embedding.timeout_s = to_real(k, v); }},
        {"embedding.max_in_flight", [](AppConfig& c, const std::string& k, const std::string& v) { c.embedding.max_in_flight = to_size(k, v); }},
        {"embedding.max_retries", [](AppConfig& c, const std::string& k, const std::string& v) { c.embedding.max_retries = static_cast<int>(to_size(k, v)); }},
        {"embedding.api_key_env", [](AppConfig& c, const std::string&, const std::string& v) { c.embedding.api_key_env = v; }},
        {"embedding.dim", [](AppConfig& c, const std::string& k, const std::string& v) { c.embedding.mock_dim = to_size(k, v); }},
        {"ensemble.weight_external",
         [](AppConfig& c, const std::string& k, const std::string& v) {
             if (!c.ensemble) c.ensemble.emplace();
             c.ensemble->weight_external = to_real(k, v);
         }},
        {"ensemble.external_probs",
         [](AppConfig& c, const std::string&, const std::string& v) {
             c.external_probs = v;
             if (!v.empty() && !c.ensemble) c.ensemble.emplace();
         }},
        {"scoring.thresholds",
         [](AppConfig& c, const std::string& k, const std::string& v) {
             std::vector<double> out;
             std::stringstream ss(v);
             std::string item;
             while (std::getline(ss, item, ',')) {
                 const auto t = std::string(text::trim(item));
                 if (!t.empty()) out.push_back(to_real(k, t));
             }
             c.scoring.thresholds = std::move(out);
         }},
        {"scoring.mode",
         [](AppConfig& c, const std::string& k, const std::string& v) {
             if (v == "qa" || v == "QA" || v == "Q+A")
                 c.scoring.mode = scoring::MatchMode::QA;
             else if (v == "q" || v == "Q" || v == "q_only" || v == "Q_only")
                 c.scoring.mode = scoring::MatchMode::QOnly;
             else
                 throw ConfigError(k + ": expected QA or Q_only");
         }},
        {"paths.dataset", [](AppConfig& c, const std::string&, const std::string& v) { c.paths.dataset = v; }},
        {"paths.knowledge_store", [](AppConfig& c, const std::string&, const std::string& v) { c.paths.knowledge_store = v; }},
        {"paths.train_set", [](AppConfig& c, const std::string&, const std::string& v) { c.paths.train_set = v; }},
        {"paths.cache_dir", [](AppConfig& c, const std::string&, const std::string& v) { c.paths.cache_dir = v; }},
        {"paths.output_dir", [](AppConfig& c, const std::string&, const std::string& v) { c.paths.output_dir = v; }},
    };
    return table;
}

}  // namespace

void apply_setting(AppConfig& cfg, const std::string& key, const std::string& value) {
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown configuration key \"" + key + "\"");
    it->second(cfg, key, std::string(text::trim(value)));
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& [k, _] : setters()) out.push_back(k);
        return out;
    }();
    return keys;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& content) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const auto trimmed = text::trim(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        out.emplace_back(std::string(text::trim(trimmed.substr(0, eq))), std::string(text::trim(trimmed.substr(eq + 1))));
    }
    return out;
}

std::string env_var_for(const std::string& key) {
    std::string out = "FACTCHECK_";
    for (char c : key) out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::optional<std::string> process_env(const std::string& name) {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
}

AppConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env,
                      const std::vector<std::pair<std::string, std::string>>& flags) {
    AppConfig cfg;
    if (file) {
        std::ifstream in(*file);
        if (!in) throw ConfigError("cannot open config file " + file->string());
        std::ostringstream ss;
        ss << in.rdbuf();
        for (const auto& [k, v] : parse_config_text(ss.str())) apply_setting(cfg, k, v);
    }
    if (env)
        for (const auto& key : known_keys())
            if (auto v = env(env_var_for(key))) apply_setting(cfg, key, *v);
    for (const auto& [k, v] : flags) apply_setting(cfg, k, v);

    if (!cfg.omega_explicit) cfg.retrieval.omega = retriever::default_omega(cfg.split);
    validate(cfg);
    return cfg;
}

void validate(const AppConfig& cfg) {
    cfg.retrieval.validate();
    cfg.generator.validate();
    cfg.embedding.validate();
    cfg.scoring.validate();
    if (cfg.ensemble && !(cfg.ensemble->weight_external >= 0.0 && cfg.ensemble->weight_external <= 1.0))
        throw ConfigError("ensemble.weight_external must lie in [0,1]");
    if (cfg.chat.kind == ChatProviderKind::Mock && cfg.chat.mock_script.empty())
        throw ConfigError("generator.provider = mock requires generator.mock_script");
}

}  // namespace factcheck::config
