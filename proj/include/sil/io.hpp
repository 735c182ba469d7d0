#pragma once

#include <stdexcept>
#include <string>

#include "sil/report.hpp"
#include "sil/structures.hpp"

namespace sil {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

VocabPtr vocabulary_from_json(const json& j);
json vocabulary_to_json(const Vocabulary& v);

// `where` prefixes diagnostics (usually the file name). When `vocab` is given
// the file's vocabulary must equal it and the shared pointer is reused.
Structure structure_from_json(const json& j, const std::string& where = "structure",
                              const VocabPtr& vocab = nullptr);
json structure_to_json(const Structure& s);

json read_json_file(const std::string& path);
Structure read_structure_file(const std::string& path, const VocabPtr& vocab = nullptr);

// Elements listed by their labels.
json mask_to_json(const Structure& s, Mask m);
json map_to_json(const Structure& src, const Structure& tgt, const std::vector<int>& map);

}  // namespace sil
