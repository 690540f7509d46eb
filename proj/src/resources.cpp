#include "agora/resources.hpp"

#include <cstdlib>

namespace agora {

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("AGORA_DATA_DIR"); env && *env) return env;
  return AGORA_DEFAULT_DATA_DIR;
}

std::filesystem::path default_stopword_path() { return data_dir() / "stopwords_de.txt"; }
std::filesystem::path default_lemma_path() { return data_dir() / "lemmas_de.tsv"; }
std::filesystem::path default_curated_dictionary_path() { return data_dir() / "di_cap_demo.txt"; }

text::Preprocessor load_preprocessor(const std::filesystem::path& stopwords,
                                     const std::filesystem::path& lemmas) {
  return text::Preprocessor(
      text::StopwordList::load(stopwords.empty() ? default_stopword_path() : stopwords),
      text::LemmaTable::load(lemmas.empty() ? default_lemma_path() : lemmas));
}

}  // namespace agora
