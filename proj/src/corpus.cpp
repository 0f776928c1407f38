#include "factcheck/corpus.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "factcheck/errors.hpp"
#include "factcheck/text.hpp"

namespace factcheck::corpus {

using json = nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string require_string(const json& obj, const char* field, const std::string& where) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_string())
        throw ParseError(where + ": field \"" + field + "\" missing or not a string");
    return it->get<std::string>();
}

std::optional<ClaimId> optional_id(const json& obj, const std::string& where) {
    for (const char* field : {"claim_id", "id"}) {
        auto it = obj.find(field);
        if (it == obj.end() || it->is_null()) continue;
        if (!it->is_number_integer()) throw ParseError(where + ": \"" + field + "\" is not an integer");
        return it->get<ClaimId>();
    }
    return std::nullopt;
}

GoldQA parse_question(const json& q, const std::string& where) {
    if (!q.is_object()) throw ParseError(where + ": question entry is not an object");
    GoldQA qa;
    qa.question = require_string(q, "question", where);
    auto answers = q.find("answers");
    if (answers == q.end() || !answers->is_array() || answers->empty()) {
        qa.answer_type = AnswerType::Unanswerable;
        return qa;
    }
    std::vector<std::string> texts;
    for (std::size_t i = 0; i < answers->size(); ++i) {
        const auto& a = (*answers)[i];
        if (!a.is_object()) throw ParseError(where + ": answer entry is not an object");
        texts.push_back(require_string(a, "answer", where));
        if (i == 0) {
            auto type = a.find("answer_type");
            if (type != a.end() && type->is_string()) {
                try {
                    qa.answer_type = parse_answer_type(type->get<std::string>());
                } catch (const ValidationError& e) {
                    throw ValidationError(where + ": " + e.what());
                }
            }
        }
    }
    qa.answer = text::join(texts, "; ");
    return qa;
}

Claim parse_claim(const json& element, std::size_t position) {
    const std::string where = "element " + std::to_string(position);
    if (!element.is_object()) throw ParseError(where + ": not a JSON object");

    Claim claim;
    claim.id = optional_id(element, where).value_or(static_cast<ClaimId>(position));
    claim.text = require_string(element, "claim", where);
    if (text::trim(claim.text).empty()) throw ValidationError(where + ": claim text is empty");

    if (auto it = element.find("claim_date"); it != element.end() && it->is_string())
        claim.claim_date = it->get<std::string>();

    if (auto it = element.find("label"); it != element.end() && !it->is_null()) {
        if (!it->is_string()) throw ParseError(where + ": \"label\" is not a string");
        try {
            claim.gold_label = parse_label(it->get<std::string>());
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
    }

    if (auto it = element.find("questions"); it != element.end() && !it->is_null()) {
        if (!it->is_array()) throw ParseError(where + ": \"questions\" is not an array");
        for (const auto& q : *it) claim.gold_evidence.push_back(parse_question(q, where));
    }

    if (claim.gold_label && claim.gold_evidence.empty())
        throw ValidationError(where + ": labelled claim has no gold evidence");
    return claim;
}

struct StoreLine {
    std::optional<ClaimId> claim_id;
    Document doc;
};

StoreLine parse_store_line(const std::string& line, std::size_t line_no) {
    const std::string where = "line " + std::to_string(line_no);
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(where + ": " + e.what());
    }
    if (!obj.is_object()) throw ParseError(where + ": not a JSON object");

    StoreLine out;
    out.claim_id = optional_id(obj, where);
    if (auto it = obj.find("url"); it != obj.end() && it->is_string()) out.doc.url = it->get<std::string>();
    auto sentences = obj.find("url2text");
    if (sentences != obj.end() && !sentences->is_null()) {
        if (!sentences->is_array()) throw ParseError(where + ": \"url2text\" is not an array");
        for (const auto& s : *sentences) {
            if (!s.is_string()) throw ParseError(where + ": \"url2text\" holds a non-string");
            auto str = s.get<std::string>();
            if (!text::trim(str).empty()) out.doc.sentences.push_back(std::move(str));
        }
    }
    return out;
}

template <typename Fn>
void for_each_store_line(const std::filesystem::path& path, Fn&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        fn(parse_store_line(line, line_no));
    }
}

}  // namespace

std::vector<Claim> parse_dataset(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("dataset: ") + e.what());
    }
    if (!root.is_array()) throw ParseError("dataset: top level is not a JSON array");

    std::vector<Claim> claims;
    claims.reserve(root.size());
    for (std::size_t i = 0; i < root.size(); ++i) claims.push_back(parse_claim(root[i], i));
    return claims;
}

std::vector<Claim> load_dataset(const std::filesystem::path& path) { return parse_dataset(read_file(path)); }

KnowledgeStore load_knowledge_store(const std::filesystem::path& path, ClaimId claim_id) {
    KnowledgeStore store;
    for_each_store_line(path, [&](StoreLine line) {
        if (line.claim_id && *line.claim_id != claim_id) return;
        if (line.doc.sentences.empty()) {
            ++store.dropped;
            return;
        }
        store.documents.push_back(std::move(line.doc));
    });
    return store;
}

std::map<ClaimId, KnowledgeStore> load_knowledge_stores(const std::filesystem::path& path) {
    std::map<ClaimId, KnowledgeStore> stores;
    std::size_t line_no = 0;
    for_each_store_line(path, [&](StoreLine line) {
        ++line_no;
        if (!line.claim_id)
            throw ParseError("record " + std::to_string(line_no) + ": multi-claim store line lacks claim_id");
        auto& store = stores[*line.claim_id];
        if (line.doc.sentences.empty())
            ++store.dropped;
        else
            store.documents.push_back(std::move(line.doc));
    });
    return stores;
}

namespace {

constexpr std::array<std::string_view, 40> kAbbreviations = {
    "Mr.",   "Mrs.",  "Ms.",   "Dr.",   "Prof.", "Sr.",   "Jr.",   "St.",   "vs.",   "etc.",
    "e.g.",  "i.e.",  "U.S.",  "U.K.",  "U.N.",  "Inc.",  "Ltd.",  "Co.",   "Corp.", "Gen.",
    "Gov.",  "Sen.",  "Rep.",  "Rev.",  "No.",   "Jan.",  "Feb.",  "Mar.",  "Apr.",  "Aug.",
    "Sept.", "Sep.",  "Oct.",  "Nov.",  "Dec.",  "Mt.",   "Ave.",  "approx.", "Lt.", "Col.",
};

bool is_upper_or_digit(unsigned char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// Length of a closing quote/bracket at pos, or 0.
std::size_t closer_len(std::string_view s, std::size_t pos) {
    const unsigned char c = static_cast<unsigned char>(s[pos]);
    if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
    if (s.substr(pos, 3) == "\xE2\x80\x9D" || s.substr(pos, 3) == "\xE2\x80\x99") return 3;
    return 0;
}

std::size_t opener_len(std::string_view s, std::size_t pos) {
    const unsigned char c = static_cast<unsigned char>(s[pos]);
    if (c == '"' || c == '\'' || c == '(' || c == '[') return 1;
    if (s.substr(pos, 3) == "\xE2\x80\x9C" || s.substr(pos, 3) == "\xE2\x80\x98") return 3;
    return 0;
}

bool is_abbreviation(std::string_view text, std::size_t period) {
    std::size_t start = period;
    while (start > 0 && !is_space(static_cast<unsigned char>(text[start - 1]))) --start;
    std::string_view word = text.substr(start, period - start + 1);
    while (!word.empty() && opener_len(word, 0) == 1 && word.size() > 1) word.remove_prefix(1);
    if (std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end()) return true;
    // Single initial such as "J."
    return word.size() == 2 && word[0] >= 'A' && word[0] <= 'Z';
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view input) {
    std::vector<std::string> out;
    auto emit = [&](std::size_t begin, std::size_t end) {
        auto piece = text::trim(input.substr(begin, end - begin));
        if (!piece.empty()) out.emplace_back(piece);
    };

    std::size_t begin = 0;
    std::size_t i = 0;
    while (i < input.size()) {
        const char c = input[i];
        if (c != '.' && c != '!' && c != '?') {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < input.size() && (input[j] == '.' || input[j] == '!' || input[j] == '?')) ++j;
        const std::size_t last_terminal = j - 1;
        while (j < input.size()) {
            auto n = closer_len(input, j);
            if (!n) break;
            j += n;
        }
        if (j >= input.size() || !is_space(static_cast<unsigned char>(input[j]))) {
            i = j;
            continue;
        }
        std::size_t k = j;
        while (k < input.size() && is_space(static_cast<unsigned char>(input[k]))) ++k;
        std::size_t next = k;
        if (next < input.size()) next += opener_len(input, next);
        const bool boundary = next < input.size() && is_upper_or_digit(static_cast<unsigned char>(input[next]));
        const bool abbreviated = input[last_terminal] == '.' && j - i == 1 && is_abbreviation(input, last_terminal);
        if (boundary && !abbreviated) {
            emit(begin, j);
            begin = k;
        }
        i = k;
    }
    emit(begin, input.size());
    return out;
}

std::vector<Chunk> chunk_document(const Document& doc, std::size_t max_chars) {
    std::vector<Chunk> chunks;
    std::vector<std::string> current;
    std::size_t current_len = 0;

    auto flush = [&](bool oversized) {
        if (current.empty()) return;
        Chunk chunk;
        chunk.doc_url = doc.url;
        chunk.index_in_doc = chunks.size();
        chunk.text = text::join(current, " ");
        chunk.oversized = oversized;
        chunk.sentences = std::move(current);
        chunks.push_back(std::move(chunk));
        current.clear();
        current_len = 0;
    };

    for (const auto& sentence : doc.sentences) {
        const std::size_t len = text::utf8_length(sentence);
        if (len > max_chars) {
            flush(false);
            current.push_back(sentence);
            flush(true);
            continue;
        }
        const std::size_t joined = current.empty() ? len : current_len + 1 + len;
        if (joined > max_chars) {
            flush(false);
            current_len = len;
        } else {
            current_len = joined;
        }
        current.push_back(sentence);
    }
    flush(false);

    for (std::size_t i = 0; i < chunks.size(); ++i) {
        if (i > 0) chunks[i].prev_context = chunks[i - 1].text;
        if (i + 1 < chunks.size()) chunks[i].next_context = chunks[i + 1].text;
    }
    return chunks;
}

}  // namespace factcheck::corpus
