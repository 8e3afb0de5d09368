#include "corpusforge/ted_xml.hpp"

#include <algorithm>
#include <iterator>
#include <optional>
#include <sstream>
#include <utility>

#include "corpusforge/error.hpp"
#include "utf8.hpp"

namespace corpusforge {

namespace {

struct Attribute {
    std::string name;
    std::string value;
};

// Minimal pull parser: enough XML for transcript files (elements, attributes,
// text, entities, comments, CDATA, processing instructions, DOCTYPE).
class XmlReader {
  public:
    enum class Event { StartElement, EndElement, Text, End };

    explicit XmlReader(std::string_view xml) : xml_(xml) {}

    Event next() {
        if (pending_end_) {
            pending_end_ = false;
            return Event::EndElement;
        }
        while (pos_ < xml_.size()) {
            event_offset_ = pos_;
            if (xml_[pos_] != '<') {
                text_ = read_text();
                if (stack_.empty()) {
                    if (text_.find_first_not_of(" \t\r\n") != std::string::npos)
                        fail("text outside the root element");
                    continue;
                }
                return Event::Text;
            }
            if (starts_with("<!--")) {
                skip_past("-->", "unterminated comment");
                continue;
            }
            if (starts_with("<![CDATA[")) {
                const std::size_t begin = pos_ + 9;
                const std::size_t end = xml_.find("]]>", begin);
                if (end == std::string_view::npos) fail("unterminated CDATA section");
                if (stack_.empty()) fail("CDATA outside the root element");
                text_.assign(xml_.substr(begin, end - begin));
                pos_ = end + 3;
                return Event::Text;
            }
            if (starts_with("<?")) {
                skip_past("?>", "unterminated processing instruction");
                continue;
            }
            if (starts_with("<!")) {
                skip_doctype();
                continue;
            }
            if (starts_with("</")) {
                pos_ += 2;
                const std::string name = read_name();
                skip_space();
                expect('>');
                if (stack_.empty()) fail("unexpected closing tag </" + name + ">");
                if (stack_.back() != name)
                    fail("closing tag </" + name + "> does not match <" + stack_.back() + ">");
                name_ = name;
                stack_.pop_back();
                return Event::EndElement;
            }
            ++pos_;
            name_ = read_name();
            if (stack_.empty() && seen_root_) fail("second root element <" + name_ + ">");
            attributes_.clear();
            for (;;) {
                skip_space();
                if (pos_ >= xml_.size()) fail("unexpected end of input inside tag");
                if (xml_[pos_] == '/') {
                    ++pos_;
                    expect('>');
                    pending_end_ = true;
                    seen_root_ = true;
                    return Event::StartElement;
                }
                if (xml_[pos_] == '>') {
                    ++pos_;
                    stack_.push_back(name_);
                    seen_root_ = true;
                    return Event::StartElement;
                }
                Attribute attr;
                attr.name = read_name();
                skip_space();
                expect('=');
                skip_space();
                if (pos_ >= xml_.size() || (xml_[pos_] != '"' && xml_[pos_] != '\''))
                    fail("attribute value must be quoted");
                const char quote = xml_[pos_++];
                const std::size_t end = xml_.find(quote, pos_);
                if (end == std::string_view::npos) fail("unterminated attribute value");
                attr.value = decode_entities(xml_.substr(pos_, end - pos_), pos_);
                pos_ = end + 1;
                attributes_.push_back(std::move(attr));
            }
        }
        if (!stack_.empty()) {
            event_offset_ = pos_;
            fail("unexpected end of input: <" + stack_.back() + "> is not closed");
        }
        if (!seen_root_) fail("no root element");
        return Event::End;
    }

    const std::string& name() const { return name_; }
    const std::string& text() const { return text_; }
    std::size_t offset() const { return event_offset_; }

    std::optional<std::string> attribute(std::string_view key) const {
        for (const auto& a : attributes_)
            if (a.name == key) return a.value;
        return std::nullopt;
    }

  private:
    [[noreturn]] void fail(const std::string& what) const {
        const std::size_t at = std::max(pos_, event_offset_);
        throw ParseError("XML parse error at byte " + std::to_string(at) + ": " + what, at);
    }

    bool starts_with(std::string_view prefix) const { return xml_.substr(pos_).starts_with(prefix); }

    void skip_past(std::string_view terminator, const char* what) {
        const std::size_t end = xml_.find(terminator, pos_);
        if (end == std::string_view::npos) fail(what);
        pos_ = end + terminator.size();
    }

    void skip_doctype() {
        int depth = 0;
        for (; pos_ < xml_.size(); ++pos_) {
            const char c = xml_[pos_];
            if (c == '[') ++depth;
            if (c == ']') --depth;
            if (c == '>' && depth == 0) {
                ++pos_;
                return;
            }
        }
        fail("unterminated markup declaration");
    }

    void skip_space() {
        while (pos_ < xml_.size() && (xml_[pos_] == ' ' || xml_[pos_] == '\t' ||
                                      xml_[pos_] == '\r' || xml_[pos_] == '\n'))
            ++pos_;
    }

    void expect(char c) {
        if (pos_ >= xml_.size()) fail(std::string("expected '") + c + "' but input ended");
        if (xml_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string read_name() {
        const std::size_t begin = pos_;
        while (pos_ < xml_.size()) {
            const char c = xml_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '/' || c == '>' ||
                c == '=' || c == '<' || c == '"' || c == '\'')
                break;
            ++pos_;
        }
        if (pos_ == begin) {
            if (pos_ >= xml_.size()) fail("unexpected end of input, expected a name");
            fail("expected a name");
        }
        return std::string(xml_.substr(begin, pos_ - begin));
    }

    std::string read_text() {
        const std::size_t begin = pos_;
        const std::size_t end = std::min(xml_.find('<', pos_), xml_.size());
        pos_ = end;
        return decode_entities(xml_.substr(begin, end - begin), begin);
    }

    std::string decode_entities(std::string_view raw, std::size_t base) const {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out.push_back(raw[i]);
                continue;
            }
            const std::size_t semi = raw.find(';', i);
            if (semi == std::string_view::npos) {
                throw ParseError("XML parse error at byte " + std::to_string(base + i) +
                                     ": unterminated entity",
                                 base + i);
            }
            const std::string_view ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "amp") {
                out.push_back('&');
            } else if (ent == "lt") {
                out.push_back('<');
            } else if (ent == "gt") {
                out.push_back('>');
            } else if (ent == "quot") {
                out.push_back('"');
            } else if (ent == "apos") {
                out.push_back('\'');
            } else if (ent.size() > 1 && ent[0] == '#') {
                const bool hex = ent[1] == 'x' || ent[1] == 'X';
                const std::string digits(ent.substr(hex ? 2 : 1));
                char32_t cp = 0;
                try {
                    std::size_t used = 0;
                    cp = static_cast<char32_t>(std::stoul(digits, &used, hex ? 16 : 10));
                    if (used != digits.size()) throw std::invalid_argument(digits);
                } catch (const std::exception&) {
                    throw ParseError("XML parse error at byte " + std::to_string(base + i) +
                                         ": bad character reference",
                                     base + i);
                }
                utf8::append(out, cp);
            } else {
                throw ParseError("XML parse error at byte " + std::to_string(base + i) +
                                     ": unknown entity &" + std::string(ent) + ";",
                                 base + i);
            }
            i = semi;
        }
        return out;
    }

    std::string_view xml_;
    std::size_t pos_ = 0;
    std::size_t event_offset_ = 0;
    std::vector<std::string> stack_;
    std::vector<Attribute> attributes_;
    std::string name_;
    std::string text_;
    bool pending_end_ = false;
    bool seen_root_ = false;
};

bool is_talk_element(const std::string& name) { return name == "talk" || name == "doc"; }

}  // namespace

TedIngestResult ingest_ted_xml(std::string_view xml, const TokenizeProfile& profile) {
    TedIngestResult result;
    XmlReader reader(xml);

    std::optional<Document> talk;
    bool talk_rejected = false;
    int talk_depth = 0;
    int depth = 0;
    std::optional<std::string> seg_text;

    for (auto ev = reader.next(); ev != XmlReader::Event::End; ev = reader.next()) {
        switch (ev) {
            case XmlReader::Event::StartElement: {
                ++depth;
                const auto& name = reader.name();
                if (is_talk_element(name)) {
                    if (talk || talk_rejected) {
                        throw DataError("nested <" + name + "> at byte " +
                                        std::to_string(reader.offset()));
                    }
                    auto id = reader.attribute("id");
                    if (!id) id = reader.attribute("docid");
                    talk_depth = depth;
                    if (!id || id->empty()) {
                        talk_rejected = true;
                        result.diagnostics.push_back("talk at byte " +
                                                     std::to_string(reader.offset()) +
                                                     " rejected: missing id attribute");
                    } else {
                        talk = Document{*id, {}};
                    }
                } else if (name == "seg") {
                    if (!talk && !talk_rejected) {
                        throw DataError("<seg> outside any talk at byte " +
                                        std::to_string(reader.offset()));
                    }
                    if (seg_text) {
                        throw DataError("nested <seg> at byte " + std::to_string(reader.offset()));
                    }
                    seg_text.emplace();
                }
                break;
            }
            case XmlReader::Event::Text:
                if (seg_text) *seg_text += reader.text();
                break;
            case XmlReader::Event::EndElement:
                if (seg_text && reader.name() == "seg") {
                    if (talk) talk->sentences.push_back(Sentence::from_raw(std::move(*seg_text), profile));
                    seg_text.reset();
                } else if ((talk || talk_rejected) && depth == talk_depth) {
                    if (talk) result.documents.push_back(std::move(*talk));
                    talk.reset();
                    talk_rejected = false;
                }
                --depth;
                break;
            case XmlReader::Event::End:
                break;
        }
    }
    return result;
}

TedIngestResult ingest_ted_xml(std::istream& in, const TokenizeProfile& profile) {
    const std::string xml{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return ingest_ted_xml(xml, profile);
}

}  // namespace corpusforge
