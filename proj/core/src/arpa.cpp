#include <algorithm>
#include <charconv>
#include <sstream>

#include "corpusforge/corpus_io.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/ngram_lm.hpp"

namespace corpusforge {

void write_arpa(const NGramModel& model, std::ostream& out) {
    out << "# interpolated Kneser-Ney, order " << model.order() << "\n";
    for (std::size_t n = 0; n < model.discounts().size(); ++n)
        out << "# discount " << n + 1 << " " << format_exact(model.discounts()[n]) << "\n";
    out << "\n\\data\\\n";
    for (int n = 1; n <= model.order(); ++n) out << "ngram " << n << "=" << model.ngrams(n).size() << "\n";

    for (int n = 1; n <= model.order(); ++n) {
        out << "\n\\" << n << "-grams:\n";
        std::vector<std::pair<std::string, const NGramEntry*>> rows;
        rows.reserve(model.ngrams(n).size());
        for (const auto& [gram, entry] : model.ngrams(n)) {
            std::string text;
            for (std::size_t i = 0; i < gram.size(); ++i) {
                if (i) text.push_back(' ');
                text += model.word(gram[i]);
            }
            rows.emplace_back(std::move(text), &entry);
        }
        std::sort(rows.begin(), rows.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [text, entry] : rows) {
            out << format_exact(entry->log_prob) << '\t' << text;
            if (n < model.order() && entry->log_backoff != 0.0) out << '\t' << format_exact(entry->log_backoff);
            out << '\n';
        }
    }
    out << "\n\\end\\\n";
}

namespace {

class ArpaParser {
  public:
    explicit ArpaParser(std::istream& in) : in_(in) {}

    NGramModel parse() {
        std::vector<double> discounts;
        // Header: free text until \data\; our own discount comments are picked up.
        for (;;) {
            if (!next_line()) fail("missing \\data\\ section");
            if (line_ == "\\data\\") break;
            if (line_.starts_with("# discount ")) {
                std::istringstream ss(line_.substr(11));
                std::size_t n = 0;
                std::string value;
                ss >> n >> value;
                if (n == discounts.size() + 1) discounts.push_back(number(value));
            }
        }

        std::vector<std::size_t> declared;
        while (next_line() && !line_.empty()) {
            if (!line_.starts_with("ngram ")) fail("expected 'ngram N=count', got '" + line_ + "'");
            const auto eq = line_.find('=');
            if (eq == std::string::npos) fail("expected 'ngram N=count'");
            const std::size_t n = integer(trim(line_.substr(6, eq - 6)));
            const std::size_t count = integer(trim(line_.substr(eq + 1)));
            if (n != declared.size() + 1) fail("ngram orders must be listed as 1, 2, ...");
            declared.push_back(count);
        }
        if (declared.empty()) fail("\\data\\ section declares no n-gram counts");

        NGramModel model(static_cast<int>(declared.size()));
        std::vector<std::vector<std::pair<std::vector<std::string>, NGramEntry>>> sections(declared.size());

        for (std::size_t n = 1; n <= declared.size(); ++n) {
            skip_blank();
            const std::string header = "\\" + std::to_string(n) + "-grams:";
            if (line_ != header) fail("expected section header " + header + ", got '" + line_ + "'");
            while (next_line() && !line_.empty() && !line_.starts_with('\\')) {
                auto fields = split_ws(line_);
                const bool has_backoff = fields.size() == n + 2;
                if (fields.size() != n + 1 && !has_backoff)
                    fail("expected " + std::to_string(n) + " words in " + header + " entry");
                NGramEntry entry;
                entry.log_prob = number(fields[0]);
                if (has_backoff) entry.log_backoff = number(fields.back());
                std::vector<std::string> words(fields.begin() + 1, fields.begin() + 1 + static_cast<std::ptrdiff_t>(n));
                sections[n - 1].emplace_back(std::move(words), entry);
            }
            if (sections[n - 1].size() != declared[n - 1]) {
                fail("\\data\\ declares " + std::to_string(declared[n - 1]) + " " + std::to_string(n) +
                     "-grams but the section lists " + std::to_string(sections[n - 1].size()));
            }
            if (line_.starts_with('\\')) pushback_ = true;
        }
        skip_blank();
        if (line_ != "\\end\\") fail("expected \\end\\, got '" + line_ + "'");

        for (const auto& [words, entry] : sections[0]) model.add_word(words[0]);
        for (std::size_t n = 1; n <= sections.size(); ++n) {
            auto& table = model.ngrams(static_cast<int>(n));
            for (const auto& [words, entry] : sections[n - 1]) {
                std::vector<WordId> ids;
                for (const auto& w : words) {
                    auto id = model.find(w);
                    if (!id) fail("word '" + w + "' of a " + std::to_string(n) + "-gram is missing from the unigrams");
                    ids.push_back(*id);
                }
                if (!table.emplace(std::move(ids), entry).second) fail("duplicate n-gram in section " + std::to_string(n));
            }
        }
        if (discounts.size() == declared.size()) model.set_discounts(std::move(discounts));
        return model;
    }

  private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("ARPA line " + std::to_string(lineno_) + ": " + what, lineno_);
    }

    bool next_line() {
        if (pushback_) {
            pushback_ = false;
            return true;
        }
        if (!std::getline(in_, line_)) {
            line_.clear();
            eof_ = true;
            return false;
        }
        ++lineno_;
        if (!line_.empty() && line_.back() == '\r') line_.pop_back();
        line_ = trim(line_);
        return true;
    }

    void skip_blank() {
        while (next_line() && line_.empty()) {
        }
        if (eof_) fail("unexpected end of file");
    }

    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t");
        if (b == std::string::npos) return {};
        const auto e = s.find_last_not_of(" \t");
        return s.substr(b, e - b + 1);
    }

    static std::vector<std::string> split_ws(const std::string& s) {
        std::vector<std::string> out;
        std::istringstream ss(s);
        std::string f;
        while (ss >> f) out.push_back(f);
        return out;
    }

    double number(const std::string& s) const {
        double v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail("bad number '" + s + "'");
        return v;
    }

    std::size_t integer(const std::string& s) const {
        std::size_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail("bad count '" + s + "'");
        return v;
    }

    std::istream& in_;
    std::string line_;
    std::size_t lineno_ = 0;
    bool pushback_ = false;
    bool eof_ = false;
};

}  // namespace

NGramModel read_arpa(std::istream& in) { return ArpaParser(in).parse(); }

}  // namespace corpusforge
