#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "corpusforge/text.hpp"

namespace corpusforge {

struct TedIngestResult {
    std::vector<Document> documents;
    /// One entry per rejected talk (e.g. missing id), naming its byte offset.
    std::vector<std::string> diagnostics;
};

/// Reads TED-style XML: `<talk id="...">` elements (IWSLT `<doc docid="...">`
/// is accepted as a synonym) holding `<seg>` elements, possibly nested inside
/// wrapper elements such as `<transcript>`. Other elements inside a talk are
/// ignored. Syntax errors throw ParseError carrying the byte offset; a `seg`
/// outside any talk or a talk nested in another throws DataError.
TedIngestResult ingest_ted_xml(std::string_view xml, const TokenizeProfile& profile = {});
TedIngestResult ingest_ted_xml(std::istream& in, const TokenizeProfile& profile = {});

}  // namespace corpusforge
