#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "factcheck/embedding.hpp"
#include "factcheck/generator.hpp"
#include "factcheck/retriever.hpp"
#include "factcheck/scoring.hpp"
#include "factcheck/verdict.hpp"

namespace factcheck::config {

enum class ChatProviderKind { Http, Mock, Echo };

struct ChatProviderConfig {
    ChatProviderKind kind = ChatProviderKind::Echo;
    std::string model_name;
    std::string base_url;
    std::optional<double> temperature;
    std::string api_key_env = "OPENAI_API_KEY";
    double timeout_s = 120.0;
    std::filesystem::path mock_script;
};

struct Paths {
    std::filesystem::path dataset;
    std::filesystem::path knowledge_store;
    std::filesystem::path train_set;
    std::filesystem::path cache_dir;
    std::filesystem::path output_dir = "out";
};

struct AppConfig {
    retriever::RetrievalConfig retrieval;
    std::string split = "dev";
    bool omega_explicit = false;
    generator::GeneratorConfig generator;
    ChatProviderConfig chat;
    embedding::EmbeddingProviderConfig embedding;
    std::optional<verdict::EnsembleConfig> ensemble;
    std::filesystem::path external_probs;
    scoring::ScoringConfig scoring;
    Paths paths;
};

/// Applies one "section.field = value" setting. Recognized keys:
///   retrieval.{max_chars,omega,pool_size,k,lambda,split,k1,b}
///   generator.{l,fewshot_count,max_retries,simplified,provider,model_name,
///              base_url,temperature,api_key_env,timeout_s,mock_script}
///   embedding.{kind,base_url,model_name,batch_size,timeout_s,max_in_flight,
///              max_retries,api_key_env,dim}
///   ensemble.{weight_external,external_probs}
///   scoring.{thresholds,mode}
///   paths.{dataset,knowledge_store,train_set,cache_dir,output_dir}
/// Throws ConfigError on an unknown key or a malformed value.
void apply_setting(AppConfig& cfg, const std::string& key, const std::string& value);

/// Every key apply_setting accepts.
const std::vector<std::string>& known_keys();

/// Parses "key = value" lines; '#' starts a comment. Throws ConfigError with the line number.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

/// Environment variable consulted for a key: "retrieval.k" -> "FACTCHECK_RETRIEVAL_K".
std::string env_var_for(const std::string& key);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
std::optional<std::string> process_env(const std::string& name);

/// Layers settings field by field: defaults < config file < environment < flags,
/// then resolves dependent defaults (omega from split) and validates.
AppConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env,
                      const std::vector<std::pair<std::string, std::string>>& flags);

/// Range checks across sections. Throws ConfigError.
void validate(const AppConfig& cfg);

}  // namespace factcheck::config
