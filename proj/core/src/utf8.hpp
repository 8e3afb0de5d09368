#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace corpusforge::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

/// Decodes UTF-8; each invalid or truncated byte becomes U+FFFD.
std::u32string decode(std::string_view bytes);

void append(std::string& out, char32_t cp);

std::string encode(std::u32string_view cps);

char32_t to_lower(char32_t cp);

bool is_space(char32_t cp);
bool is_control(char32_t cp);
bool is_punct(char32_t cp);

}  // namespace corpusforge::utf8
