#include "corpusforge/edit_distance.hpp"

namespace corpusforge {

std::size_t word_edit_distance(std::span<const std::string> a, std::span<const std::string> b) {
    return levenshtein(a, b);
}

}  // namespace corpusforge
