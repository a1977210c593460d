#include "tabrl/statespace.hpp"

#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace tabrl {

namespace {

std::vector<std::int64_t> place_values(const std::vector<InputVariable>& vars,
                                       const char* what) {
  if (vars.empty()) {
    throw std::invalid_argument(std::string(what) + ": no variables given");
  }
  std::vector<std::int64_t> radices(vars.size());
  std::int64_t product = 1;
  for (int i = static_cast<int>(vars.size()) - 1; i >= 0; --i) {
    const auto& v = vars[i];
    if (v.cardinality < 1) {
      throw std::invalid_argument(std::string(what) + ": variable '" + v.name +
                                  "' has cardinality < 1");
    }
    radices[i] = product;
    if (product > std::numeric_limits<int>::max() / v.cardinality) {
      throw std::overflow_error(std::string(what) +
                                ": cardinality product overflows index type");
    }
    product *= v.cardinality;
  }
  return radices;
}

void check_labels(const InputVariable& v) {
  if (v.level_labels.empty()) return;
  if (static_cast<int>(v.level_labels.size()) != v.cardinality) {
    throw std::invalid_argument("variable '" + v.name +
                                "': level_labels size != cardinality");
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : v.level_labels) {
    if (!seen.insert(label).second) {
      throw std::invalid_argument("variable '" + v.name +
                                  "': duplicate level label '" + label + "'");
    }
  }
}

int encode_tuple(const std::vector<InputVariable>& vars,
                 const std::vector<std::int64_t>& radices,
                 const std::vector<int>& levels, const char* what) {
  if (levels.size() != vars.size()) {
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(vars.size()) +
                                " levels, got " +
                                std::to_string(levels.size()));
  }
  std::int64_t index = 0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (levels[i] < 0 || levels[i] >= vars[i].cardinality) {
      throw std::out_of_range(std::string(what) + ": level " +
                              std::to_string(levels[i]) +
                              " out of range for variable '" + vars[i].name +
                              "'");
    }
    index += levels[i] * radices[i];
  }
  return static_cast<int>(index);
}

}  // namespace

InputVariable::InputVariable(std::string name, int cardinality,
                             std::vector<std::string> labels)
    : name(std::move(name)),
      cardinality(cardinality),
      level_labels(std::move(labels)) {}

ActionSpace::ActionSpace(std::vector<InputVariable> output_variables)
    : variables_(std::move(output_variables)) {
  radices_ = place_values(variables_, "ActionSpace");
  n_actions_ = 1;
  for (const auto& v : variables_) {
    check_labels(v);
    n_actions_ *= v.cardinality;
  }
}

int ActionSpace::encode(const std::vector<int>& levels) const {
  return encode_tuple(variables_, radices_, levels, "ActionSpace::encode");
}

std::vector<int> ActionSpace::decode(int action) const {
  if (action < 0 || action >= n_actions_) {
    throw std::out_of_range("ActionSpace::decode: action out of range");
  }
  std::vector<int> levels(variables_.size());
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    levels[i] = static_cast<int>(action / radices_[i]);
    action = static_cast<int>(action % radices_[i]);
  }
  return levels;
}

StateCodec::StateCodec(std::vector<InputVariable> variables,
                       std::int64_t sibling_budget)
    : variables_(std::move(variables)) {
  radices_ = place_values(variables_, "StateCodec");
  n_states_ = 1;
  row_stride_ = 0;
  offsets_.resize(variables_.size());
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    check_labels(variables_[i]);
    n_states_ *= variables_[i].cardinality;
    offsets_[i] = row_stride_;
    row_stride_ += variables_[i].cardinality;
  }

  const std::int64_t total = static_cast<std::int64_t>(n_states_) * row_stride_;
  if (total <= sibling_budget) {
    sibling_index_.resize(static_cast<std::size_t>(total));
    for (int s = 0; s < n_states_; ++s) {
      for (int i = 0; i < n_variables(); ++i) {
        const std::int64_t radix = radices_[i];
        const int level = level_of(s, i);
        const int base = s - level * static_cast<int>(radix);
        int* row = &sibling_index_[static_cast<std::size_t>(s) * row_stride_ +
                                   offsets_[i]];
        for (int l = 0; l < variables_[i].cardinality; ++l) {
          row[l] = base + l * static_cast<int>(radix);
        }
      }
    }
  }
}

int StateCodec::encode(const std::vector<int>& levels) const {
  return encode_tuple(variables_, radices_, levels, "StateCodec::encode");
}

std::vector<int> StateCodec::decode(int state) const {
  check_state(state);
  std::vector<int> levels(variables_.size());
  std::int64_t rest = state;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    levels[i] = static_cast<int>(rest / radices_[i]);
    rest %= radices_[i];
  }
  return levels;
}

int StateCodec::level_of(int state, int i) const {
  return static_cast<int>((state / radices_[i]) % variables_[i].cardinality);
}

std::vector<int> StateCodec::sibling_set(int state, int i) const {
  check_state(state);
  check_variable(i);
  if (const int* row = sibling_row(state, i)) {
    return std::vector<int>(row, row + variables_[i].cardinality);
  }
  const std::int64_t radix = radices_[i];
  const int base = state - level_of(state, i) * static_cast<int>(radix);
  std::vector<int> out(variables_[i].cardinality);
  for (int l = 0; l < variables_[i].cardinality; ++l) {
    out[l] = base + l * static_cast<int>(radix);
  }
  return out;
}

const int* StateCodec::sibling_row(int state, int i) const {
  if (sibling_index_.empty()) return nullptr;
  return &sibling_index_[static_cast<std::size_t>(state) * row_stride_ +
                         offsets_[i]];
}

void StateCodec::check_state(int state) const {
  if (state < 0 || state >= n_states_) {
    throw std::out_of_range("StateCodec: state " + std::to_string(state) +
                            " out of range [0, " + std::to_string(n_states_) +
                            ")");
  }
}

void StateCodec::check_variable(int i) const {
  if (i < 0 || i >= n_variables()) {
    throw std::out_of_range("StateCodec: variable index out of range");
  }
}

StateCodec build_codec(std::vector<InputVariable> variables,
                       std::int64_t sibling_budget) {
  return StateCodec(std::move(variables), sibling_budget);
}

}  // namespace tabrl
