#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "factcheck/types.hpp"

namespace factcheck::corpus {

/// Reads an AVeriTeC-style JSON array. Ids default to the element position
/// unless the element carries "claim_id" or "id".
std::vector<Claim> load_dataset(const std::filesystem::path& path);

/// Same as load_dataset but from an in-memory JSON text.
std::vector<Claim> parse_dataset(std::string_view json_text);

struct KnowledgeStore {
    std::vector<Document> documents;
    /// Lines whose sentence list was empty after dropping blank sentences.
    std::size_t dropped = 0;
};

/// Reads the JSON-lines knowledge store and keeps the documents of one claim.
/// Lines without a "claim_id" field are treated as belonging to the claim,
/// which is how per-claim store files are laid out.
KnowledgeStore load_knowledge_store(const std::filesystem::path& path, ClaimId claim_id);

/// Groups a multi-claim JSON-lines store by claim id in a single pass.
std::map<ClaimId, KnowledgeStore> load_knowledge_stores(const std::filesystem::path& path);

/// Rule-based segmentation: a sentence ends at . ! or ? (plus closing quotes
/// or brackets) when followed by whitespace and an uppercase letter or digit,
/// unless the token is a known abbreviation such as "Mr." or a single initial.
std::vector<std::string> split_sentences(std::string_view text);

/// Greedy packing of sentences into chunks of at most max_chars code points,
/// measured on sentences joined with single spaces. A sentence longer than
/// max_chars becomes a chunk of its own flagged oversized.
std::vector<Chunk> chunk_document(const Document& doc, std::size_t max_chars);

}  // namespace factcheck::corpus
