#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace semsearch {

/// ASCII letters are lowercased; any byte outside ASCII passes through
/// unchanged, so UTF-8 sequences (including diacritics) survive intact.
std::string ascii_lower(std::string_view text);

/// Surface normalization used for alias lookup: lowercase, collapse runs of
/// whitespace to a single space, trim the ends. Punctuation is preserved.
std::string normalize_surface(std::string_view text);

/// Splits `text` into alphanumeric runs and lowercases them. Bytes >= 0x80
/// count as word bytes so multi-byte characters stay inside their token.
std::vector<std::string> tokenize_lower(std::string_view text);

using StopwordSet = std::set<std::string>;

/// The bundled 33-word english stopword list (also shipped as
/// data/stopwords.txt, overridable on the command line).
const StopwordSet& default_stopwords();

/// One lowercase token per line; blank lines and '#' lines are skipped.
StopwordSet load_stopwords(const std::string& path);

/// Porter stem of a single lowercase token. Tokens of length <= 2 are
/// returned unchanged.
std::string porter_stem(std::string word);

/// Full indexing pipeline: lowercase, split on non-alphanumerics, drop
/// stopwords, Porter-stem each survivor.
std::vector<std::string> normalize_text(std::string_view text,
                                        const StopwordSet& stopwords);
std::vector<std::string> normalize_text(std::string_view text);

}  // namespace semsearch
