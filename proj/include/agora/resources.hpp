#pragma once

#include <filesystem>

#include "agora/dictionary.hpp"
#include "agora/preprocess.hpp"

namespace agora {

// $AGORA_DATA_DIR when set, otherwise the data/ directory of the source tree.
std::filesystem::path data_dir();

std::filesystem::path default_stopword_path();
std::filesystem::path default_lemma_path();
std::filesystem::path default_curated_dictionary_path();

// Empty paths fall back to the bundled files.
text::Preprocessor load_preprocessor(const std::filesystem::path& stopwords = {},
                                     const std::filesystem::path& lemmas = {});

}  // namespace agora
