#pragma once

#include "ortree/tree.hpp"

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>

namespace ortree {

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kModelVersion = 1;

using Model = std::variant<Tree, Ensemble>;

void write_model(const Model &m, std::ostream &out);
void save_model(const Model &m, const std::string &path);

Model read_model(std::istream &in);
Model load_model(const std::string &path);

/// Column kinds the model expects, for reading prediction inputs.
std::map<std::string, ColumnKind> model_column_kinds(const Model &m);

} // namespace ortree
